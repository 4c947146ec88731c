"""G-compatible Beltrami coefficients defined on the Dirichlet domain.

A field is given by its values on the domain F (a real, nonnegative base
value) and is extended to the disk by the compatibility rule

    mu(z) = mu(g(z)) * conj(g'(z)) / g'(z),

using the element g that reduces z into F.  Only ``|mu|`` matters for the
Carleson analysis; the phase exists so that the rule can be tested.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from .domain import FundamentalDomain, contains, limit_set_gap, reduce_points
from .group import GroupPresentation

FAMILIES = ("compact_core", "edge_decay", "flat")


@dataclass(frozen=True)
class BeltramiSpec:
    """Base definition of |mu| on F.

    compact_core  k on |z| <= t, 0 elsewhere
    edge_decay    k (1 - |z|^2)^(alpha / 2)
    flat          k
    """

    family: str
    k: float
    alpha: float | None = None
    t: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not 0 <= self.k < 1:
            raise ValueError(f"magnitude k must satisfy 0 <= k < 1, got {self.k}")
        if self.family == "edge_decay" and not (self.alpha is not None and self.alpha > 0):
            raise ValueError("edge_decay needs a decay exponent alpha > 0")
        if self.family == "compact_core" and not (self.t is not None and 0 < self.t < 1):
            raise ValueError("compact_core needs a support radius 0 < t < 1")

    @classmethod
    def compact_core(cls, k: float, t: float) -> "BeltramiSpec":
        return cls("compact_core", k, t=t)

    @classmethod
    def edge_decay(cls, k: float, alpha: float) -> "BeltramiSpec":
        return cls("edge_decay", k, alpha=alpha)

    @classmethod
    def flat(cls, k: float) -> "BeltramiSpec":
        return cls("flat", k)

    def modulus(self, w, one_minus_r2_w):
        """|mu| at points w of F, given 1 - |w|^2 separately for accuracy."""
        w = np.asarray(w)
        if self.family == "flat":
            return np.full(w.shape, self.k)
        if self.family == "compact_core":
            return np.where(np.abs(w) <= self.t, self.k, 0.0)
        return self.k * np.asarray(one_minus_r2_w) ** (self.alpha / 2.0)


@dataclass(frozen=True)
class EdgeBall:
    """Euclidean ball around a free edge, used to split mu into two parts."""

    center: complex
    radius: float

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def boundary_half_angle(self) -> float:
        """Half-angle of the arc B ∩ ∂Δ when the center is on the circle."""
        return 2.0 * math.asin(min(self.radius / 2.0, 1.0))


@dataclass(frozen=True)
class BeltramiField:
    """Equivariant extension of a BeltramiSpec.

    ``region`` optionally restricts the base definition to part of F (used by
    :func:`decompose`); it is a predicate on points of F.
    """

    spec: BeltramiSpec
    group: GroupPresentation
    domain: FundamentalDomain
    region: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        self.group.require_certified()

    @property
    def k(self) -> float:
        return self.spec.k

    @property
    def is_zero(self) -> bool:
        return self.spec.k == 0

    @property
    def feature_radius(self) -> float | None:
        """Hyperbolic radius of the smallest isolated feature of mu on F.

        compact_core is supported on the disk |z| <= t; region-restricted
        fields jump along their region boundary.  Continuous families have
        no isolated features and return None.
        """
        if self.is_zero:
            return None
        if self.spec.family == "compact_core":
            return math.log((1 + self.spec.t) / (1 - self.spec.t))
        if self.region is not None:
            return 1.0
        return None

    def _base_modulus(self, w, omr2_w):
        m = self.spec.modulus(w, omr2_w)
        if self.region is not None:
            m = np.where(self.region(w), m, 0.0)
        return m

    def base_value(self, z):
        """mu on F (real, nonnegative).  Raises ValueError off F."""
        z = np.asarray(z, dtype=complex)
        if not np.all(contains(self.domain, z, tol=1e-9)):
            raise ValueError("base_value is only defined on the fundamental domain")
        out = self._base_modulus(z, 1.0 - np.abs(z) ** 2).astype(complex)
        return complex(out) if out.ndim == 0 else out

    def _reduced(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1):
            raise ValueError("points must lie in the open unit disk")
        return z, reduce_points(self.group, z)

    def evaluate(self, z):
        """mu(z) = mu(w) conj(g'(z)) / g'(z) with w = g(z) in F."""
        z, red = self._reduced(z)
        d = red.derivative
        omr2_w = np.abs(d) * (1.0 - np.abs(z) ** 2)
        out = self._base_modulus(red.w, omr2_w) * (np.conj(d) / d)
        return complex(out) if out.ndim == 0 else out

    def evaluate_modulus(self, z):
        z, red = self._reduced(z)
        omr2_w = np.abs(red.derivative) * (1.0 - np.abs(z) ** 2)
        out = self._base_modulus(red.w, omr2_w)
        return float(out) if np.ndim(out) == 0 else out

    def density(self, z, one_minus_r2=None):
        """|mu(z)|^2 / (1 - |z|^2).

        ``one_minus_r2`` may carry an accurate value of ``1 - |z|^2`` (the
        quadrature knows it in closed form near the circle).
        """
        z = np.asarray(z, dtype=complex)
        if one_minus_r2 is None:
            one_minus_r2 = 1.0 - np.abs(z) ** 2
        if self.is_zero:
            return np.zeros(z.shape)
        red = reduce_points(self.group, z)
        omr2_w = np.abs(red.derivative) * one_minus_r2
        m = self._base_modulus(red.w, omr2_w)
        return m * m / one_minus_r2

    def restricted(self, region: Callable[[np.ndarray], np.ndarray], label: str) -> "BeltramiField":
        base = self.region
        if base is None:
            combined = region
        else:
            def combined(w):
                return base(w) & region(w)
        return replace(self, region=combined, label=label)


def edge_balls(
    domain: FundamentalDomain,
    group: GroupPresentation,
    factor: float = 1.2,
    gap_depth: int = 4,
) -> list[EdgeBall]:
    """One ball per free edge, centred at the edge midpoint.

    Radius is ``factor`` times half the chord of the edge, reduced if needed
    so that the arc cut from the circle overshoots the edge by less than half
    the distance to the nearest limit-set direction and never reaches another
    free edge.
    """
    if not domain.free_edges:
        raise ValueError("domain has no free edges")
    if factor <= 1:
        raise ValueError("ball factor must exceed 1 so each ball covers its edge")
    gap = limit_set_gap(domain, group, gap_depth)
    edges = domain.free_edges
    balls = []
    for i, arc in enumerate(edges):
        half = arc.length / 2.0
        radius = factor * 2.0 * math.sin(half / 2.0)
        allowed = half + 0.5 * min(gap, _gap_to_other_edges(edges, i))
        if 2.0 * math.asin(min(radius / 2.0, 1.0)) > allowed:
            radius = 2.0 * math.sin(allowed / 2.0)
        balls.append(EdgeBall(complex(np.exp(1j * arc.midpoint)), radius))
    return balls


def _gap_to_other_edges(edges, i) -> float:
    if len(edges) == 1:
        return 2 * math.pi - edges[0].length
    arc = edges[i]
    best = math.inf
    for j, other in enumerate(edges):
        if j == i:
            continue
        after = (other.start - arc.end) % (2 * math.pi)
        before = (arc.start - other.end) % (2 * math.pi)
        best = min(best, after, before)
    return best


@dataclass(frozen=True)
class Decomposition:
    core: BeltramiField
    edge: BeltramiField
    balls: tuple[EdgeBall, ...]


def decompose(field_: BeltramiField, factor: float = 1.2) -> Decomposition:
    """Split mu on F into the part on the compact core and the part near the free edges.

    The edge part lives on F ∩ (union of edge balls), the core part on the
    rest of F; both are extended equivariantly.
    """
    balls = tuple(edge_balls(field_.domain, field_.group, factor))
    centers = np.array([b.center for b in balls])
    radii = np.array([b.radius for b in balls])

    def in_balls(w):
        w = np.asarray(w)
        return np.any(np.abs(w[..., None] - centers) < radii, axis=-1)

    def outside_balls(w):
        return ~in_balls(w)

    core = field_.restricted(outside_balls, "core")
    edge = field_.restricted(in_balls, "edge")
    return Decomposition(core, edge, balls)


def sample_domain(domain: FundamentalDomain, rng: np.random.Generator, n: int, max_abs: float = 1.0) -> np.ndarray:
    """Uniform samples of F ∩ {|z| < max_abs} by rejection."""
    out: list[np.ndarray] = []
    have = 0
    while have < n:
        m = max(2 * (n - have), 1024)
        r = max_abs * np.sqrt(rng.uniform(size=m))
        z = r * np.exp(2j * np.pi * rng.uniform(size=m))
        z = z[contains(domain, z)]
        out.append(z)
        have += z.size
    return np.concatenate(out)[:n]


def core_sup_modulus(decomp: Decomposition, rng: np.random.Generator, n: int = 10**5) -> float:
    """sup |z| over samples of the compact core F minus the edge balls."""
    z = sample_domain(decomp.core.domain, rng, n)
    centers = np.array([b.center for b in decomp.balls])
    radii = np.array([b.radius for b in decomp.balls])
    keep = ~np.any(np.abs(z[:, None] - centers) < radii, axis=1)
    return float(np.abs(z[keep]).max()) if keep.any() else 0.0


def modulus_invariance_residual(
    field_: BeltramiField, z: np.ndarray, elements: Sequence
) -> tuple[float, float]:
    """Max of ||mu(z)| - |mu(h z)|| and of the compatibility-rule residual.

    Every point is paired with every element.
    """
    mu_z = field_.evaluate(z)
    worst_mod = 0.0
    worst_rule = 0.0
    for h in elements:
        hz = h(z)
        mu_hz = field_.evaluate(hz)
        dh = h.derivative(z)
        worst_mod = max(worst_mod, float(np.max(np.abs(np.abs(mu_z) - np.abs(mu_hz)))))
        worst_rule = max(worst_rule, float(np.max(np.abs(mu_z - mu_hz * np.conj(dh) / dh))))
    return worst_mod, worst_rule
