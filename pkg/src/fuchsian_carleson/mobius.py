"""Disk automorphisms and hyperbolic geometry of the unit disk.

A disk automorphism is stored in the normalized form

    g(z) = (a z + b) / (conj(b) z + conj(a)),   |a|^2 - |b|^2 = 1,

so that ``g'(z) = 1 / (conj(b) z + conj(a))**2``.  The pair ``(a, b)`` and
``(-a, -b)`` describe the same map.

Metric convention
-----------------
Hyperbolic distance is ``rho(z, w) = log((1 + p) / (1 - p))`` with the
pseudo-hyperbolic distance ``p = |z - w| / |1 - conj(z) w|``; equivalently
``p = tanh(rho / 2)`` and ``rho(0, t) = log((1 + t) / (1 - t))``.  The Euclidean
disk ``B(0, t)`` therefore has hyperbolic radius ``log((1 + t) / (1 - t))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORMALIZATION_TOL = 1e-12


class NoIsometricCircle(ValueError):
    """Raised for a rotation about 0, which has no isometric circle."""


@dataclass(frozen=True)
class DiskAutomorphism:
    """Möbius self-map of the unit disk in normalized coefficient form."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = _normalized(complex(self.a), complex(self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls) -> "DiskAutomorphism":
        return cls(1.0, 0.0)

    @classmethod
    def rotation(cls, angle: float) -> "DiskAutomorphism":
        """z -> exp(i angle) z."""
        return cls(complex(math.cos(angle / 2), math.sin(angle / 2)), 0.0)

    @classmethod
    def translation(cls, s: float, angle: float = 0.0) -> "DiskAutomorphism":
        """Hyperbolic translation sending 0 to ``s * exp(i angle)``.

        For ``angle = 0`` this is ``z -> (z + s) / (1 + s z)``; other angles
        give its conjugate by the rotation through ``angle``.
        """
        if not 0 <= s < 1:
            raise ValueError(f"translation parameter must lie in [0, 1), got {s}")
        c = 1.0 / math.sqrt((1.0 - s) * (1.0 + s))
        return cls(c, c * s * complex(math.cos(angle), math.sin(angle)))

    @property
    def det(self) -> float:
        return abs(self.a) ** 2 - abs(self.b) ** 2

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "DiskAutomorphism") -> "DiskAutomorphism":
        return compose(self, other)

    def inverse(self) -> "DiskAutomorphism":
        return DiskAutomorphism(self.a.conjugate(), -self.b)

    def derivative(self, z):
        return derivative(self, z)

    def is_identity(self, tol: float = 1e-12) -> bool:
        return abs(self.b) <= tol and abs(abs(self.a.real) - 1.0) <= tol and abs(self.a.imag) <= tol

    def same_map(self, other: "DiskAutomorphism", tol: float = 1e-10) -> bool:
        """Equality as maps, i.e. up to the sign of ``(a, b)``."""
        return any(
            abs(self.a - sgn * other.a) <= tol and abs(self.b - sgn * other.b) <= tol
            for sgn in (1.0, -1.0)
        )

    @property
    def origin_image(self) -> complex:
        """g(0) = b / conj(a)."""
        return self.b / self.a.conjugate()


def _normalized(a: complex, b: complex) -> tuple[complex, complex]:
    det = abs(a) ** 2 - abs(b) ** 2
    if not det > 0:
        raise ValueError(f"|a|^2 - |b|^2 must be positive, got {det}")
    if abs(det - 1.0) > NORMALIZATION_TOL:
        scale = 1.0 / math.sqrt(det)
        a, b = a * scale, b * scale
    return a, b


def compose(g: DiskAutomorphism, h: DiskAutomorphism) -> DiskAutomorphism:
    """Return g o h."""
    a = g.a * h.a + g.b * h.b.conjugate()
    b = g.a * h.b + g.b * h.a.conjugate()
    return DiskAutomorphism(a, b)


def inverse(g: DiskAutomorphism) -> DiskAutomorphism:
    return g.inverse()


def apply(g: DiskAutomorphism, z):
    z = np.asarray(z, dtype=complex) if not isinstance(z, (complex, float, int)) else complex(z)
    return (g.a * z + g.b) / (g.b.conjugate() * z + g.a.conjugate())


def derivative(g: DiskAutomorphism, z):
    z = np.asarray(z, dtype=complex) if not isinstance(z, (complex, float, int)) else complex(z)
    return 1.0 / (g.b.conjugate() * z + g.a.conjugate()) ** 2


def pseudo_distance(z, w):
    """|z - w| / |1 - conj(z) w|, vectorized."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)


def hyp_distance(z, w):
    """Hyperbolic distance with rho(0, t) = log((1 + t) / (1 - t)).

    Uses ``1 - p^2 = (1 - |z|^2)(1 - |w|^2) / |1 - conj(z) w|^2`` so points
    close to the unit circle keep their accuracy.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    num = np.abs(z - w)
    den = np.abs(1.0 - np.conj(z) * w)
    one_minus_p2 = (1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2) / den**2
    out = np.where(num == 0, 0.0, 2.0 * np.log1p(num / den) - np.log(one_minus_p2))
    return float(out) if out.ndim == 0 else out


def hyp_radius_of_euclidean(t: float) -> float:
    """Hyperbolic radius of the Euclidean disk B(0, t)."""
    return math.log((1.0 + t) / (1.0 - t))


@dataclass(frozen=True)
class HyperbolicDisk:
    center: complex
    hyp_radius: float

    def __post_init__(self):
        if abs(self.center) >= 1:
            raise ValueError("center must lie in the open unit disk")
        if self.hyp_radius < 0 or not math.isfinite(self.hyp_radius):
            raise ValueError("hyperbolic radius must be finite and nonnegative")


def hyperbolic_to_euclidean(disk: HyperbolicDisk) -> tuple[complex, float]:
    """Euclidean (center, radius) of a hyperbolic ball.

    The ball meets the diameter through 0 and the center at the two points
    at hyperbolic distance ``rho(0, c) +- t`` from 0; those are the ends of a
    Euclidean diameter of the ball.
    """
    c = complex(disk.center)
    mod = abs(c)
    direction = c / mod if mod > 0 else 1.0 + 0j
    d0 = 2.0 * math.atanh(mod)
    p_plus = math.tanh((d0 + disk.hyp_radius) / 2.0)
    p_minus = math.tanh((d0 - disk.hyp_radius) / 2.0)
    return direction * (p_plus + p_minus) / 2.0, (p_plus - p_minus) / 2.0


@dataclass(frozen=True)
class Circle:
    """Euclidean circle; used for isometric circles and bisectors."""

    center: complex
    radius: float

    def contains(self, z, tol: float = 0.0):
        """Closed-disk membership with an additive tolerance on the radius."""
        return np.abs(np.asarray(z) - self.center) <= self.radius + tol

    def sample(self, n: int) -> np.ndarray:
        theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return self.center + self.radius * np.exp(1j * theta)

    def orthogonality_defect(self) -> float:
        """| |c|^2 - 1 - R^2 |, zero for circles orthogonal to the unit circle."""
        return abs(abs(self.center) ** 2 - 1.0 - self.radius**2)


class IsometricCircle(Circle):
    pass


def isometric_circle(g: DiskAutomorphism, tol: float = 1e-15) -> IsometricCircle:
    """The locus |g'(z)| = 1, i.e. |conj(b) z + conj(a)| = 1."""
    if abs(g.b) <= tol:
        raise NoIsometricCircle("rotation about 0, no isometric circle")
    return IsometricCircle(-g.a.conjugate() / g.b.conjugate(), 1.0 / abs(g.b))


def random_automorphism(rng: np.random.Generator, max_abs: float = 0.95) -> DiskAutomorphism:
    """Random automorphism: a rotation followed by a translation of size <= max_abs."""
    s = max_abs * math.sqrt(rng.uniform())
    return DiskAutomorphism.translation(s, rng.uniform(0, 2 * math.pi)) @ DiskAutomorphism.rotation(
        rng.uniform(0, 2 * math.pi)
    )


def random_disk_points(rng: np.random.Generator, n: int, max_abs: float = 0.99) -> np.ndarray:
    r = max_abs * np.sqrt(rng.uniform(size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def fixed_points(g: DiskAutomorphism) -> tuple[complex, complex]:
    """Fixed points on the unit circle of a hyperbolic map, attracting first.

    Solves ``conj(b) z^2 + (conj(a) - a) z - b = 0``.  Raises ValueError for
    elliptic or parabolic maps (|Re a| <= 1).
    """
    a, b = g.a, g.b
    if abs(a.real) <= 1.0 + 1e-14 or abs(b) == 0:
        raise ValueError("map is not hyperbolic")
    disc = complex(np.sqrt((a.conjugate() - a) ** 2 + 4.0 * abs(b) ** 2))
    roots = [((a - a.conjugate()) + sgn * disc) / (2.0 * b.conjugate()) for sgn in (1.0, -1.0)]
    roots = [z / abs(z) for z in roots]
    roots.sort(key=lambda z: abs(derivative(g, z)))
    return roots[0], roots[1]
