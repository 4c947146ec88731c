"""Dirichlet fundamental domain at 0, point reduction and free edges.

For ``g`` with ``p = g(0) != 0`` the perpendicular bisector of ``[0, p]`` is
the circle orthogonal to the unit circle with center ``1 / conj(p)`` and
radius ``sqrt(1 - |p|^2) / |p|`` (it is the isometric circle of ``g^-1``).
The half-plane containing 0 is the exterior of that circle, and the arc of
the unit circle inside it (the *shadow*) has half-angle ``arccos |p|``.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .group import GroupPresentation, Orbit, Word, enumerate_orbit
from .mobius import Circle, DiskAutomorphism, fixed_points

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
REDUCE_MAX_ITER = 10**5
REDUCE_TOL = 1e-13
CONTAINS_TOL = 1e-12


class DegenerateBisector(ValueError):
    """g(0) = 0: there is no bisector separating 0 from its image."""


class ReductionError(RuntimeError):
    pass


def wrap_angle(theta):
    """Map angles to [0, 2 pi)."""
    out = np.mod(theta, TWO_PI)
    # tiny negative inputs round up to exactly 2 pi
    return np.where(out >= TWO_PI, 0.0, out) if np.ndim(out) else (0.0 if out >= TWO_PI else out)


@dataclass(frozen=True)
class Arc:
    """Closed counter-clockwise arc of the unit circle from ``start``."""

    start: float
    length: float

    def __post_init__(self):
        if not 0 <= self.length <= TWO_PI + 1e-15:
            raise ValueError(f"arc length must lie in [0, 2 pi], got {self.length}")
        object.__setattr__(self, "start", float(wrap_angle(self.start)))
        object.__setattr__(self, "length", float(min(self.length, TWO_PI)))

    @property
    def end(self) -> float:
        return self.start + self.length

    @property
    def midpoint(self) -> float:
        return float(wrap_angle(self.start + self.length / 2))

    @property
    def is_full(self) -> bool:
        return self.length >= TWO_PI

    def contains(self, theta, tol: float = 0.0):
        offset = wrap_angle(np.asarray(theta) - self.start + tol)
        return offset <= self.length + 2 * tol

    def endpoints(self) -> tuple[complex, complex]:
        return complex(np.exp(1j * self.start)), complex(np.exp(1j * self.end))

    def inset(self, eps: float) -> "Arc":
        return Arc(self.start + eps, max(self.length - 2 * eps, 0.0))

    def intersection_length(self, other: "Arc") -> float:
        total = 0.0
        for shift in (-TWO_PI, 0.0, TWO_PI):
            lo = max(self.start, other.start + shift)
            hi = min(self.end, other.end + shift)
            total += max(0.0, hi - lo)
        return min(total, self.length, other.length)


def arcs_complement(arcs: Sequence[Arc], tol: float = 0.0) -> list[Arc]:
    """Complement in the unit circle of the union of closed arcs."""
    if not arcs:
        return [Arc(0.0, TWO_PI)]
    if any(a.is_full for a in arcs):
        return []
    intervals = sorted((a.start, a.end) for a in arcs)
    merged: list[list[float]] = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    # the last interval may wrap past 2 pi and swallow leading ones
    while len(merged) > 1 and merged[-1][1] - TWO_PI >= merged[0][0] - tol:
        merged[-1][1] = max(merged[-1][1], merged[0][1] + TWO_PI)
        merged.pop(0)
    if merged[-1][1] - merged[0][0] >= TWO_PI - tol:
        return []
    gaps = []
    for k, (lo, hi) in enumerate(merged):
        nxt = merged[(k + 1) % len(merged)][0] + (TWO_PI if k == len(merged) - 1 else 0.0)
        if nxt - hi > tol:
            gaps.append(Arc(hi, nxt - hi))
    return sorted(gaps, key=lambda a: a.start)


@dataclass(frozen=True)
class BisectorConstraint:
    """Half-plane {rho(z, 0) <= rho(z, g(0))}, the exterior of ``circle``."""

    source: DiskAutomorphism
    circle: Circle
    shadow: Arc
    word: Word | None = None

    @property
    def half_angle(self) -> float:
        """Half of the angle subtended at the circle center by the geodesic."""
        return math.atan2(1.0, self.circle.radius)

    def satisfied(self, z, tol: float = CONTAINS_TOL):
        z = np.asarray(z)
        return np.abs(z - self.circle.center) >= self.circle.radius - tol


def bisector(g: DiskAutomorphism, word: Word | None = None, tol: float = 1e-15) -> BisectorConstraint:
    p = g.origin_image
    mod = abs(p)
    if mod <= tol:
        raise DegenerateBisector("g(0) = 0 (rotation about 0): no bisector")
    one_minus_p2 = 1.0 / abs(g.a) ** 2
    circle = Circle(1.0 / p.conjugate(), math.sqrt(one_minus_p2) / mod)
    half = math.acos(min(mod, 1.0))
    direction = math.atan2(p.imag, p.real)
    return BisectorConstraint(g, circle, Arc(direction - half, 2 * half), word)


def _allowed_interval(ci: BisectorConstraint, cj: BisectorConstraint) -> tuple[float, float] | None:
    """Part of geodesic i satisfying constraint j, in the local angle of circle i.

    Geodesic i is ``c_i + R_i exp(i (arg(-c_i) + sigma))`` for
    ``|sigma| < atan(1 / R_i)``.  Returns ``(lo, hi)`` or None if empty.
    """
    c_i, r_i = ci.circle.center, ci.circle.radius
    c_j, r_j = cj.circle.center, cj.circle.radius
    gamma = ci.half_angle
    d = c_i - c_j
    delta = abs(d)
    if delta == 0:
        return (-gamma, gamma) if r_j <= r_i else None
    kappa = (r_j**2 - r_i**2 - delta**2) / (2 * r_i * delta)
    if kappa <= -1:
        return (-gamma, gamma)
    if kappa >= 1:
        return None
    half = math.acos(kappa)
    center = math.remainder(math.atan2(d.imag, d.real) - math.atan2(-c_i.imag, -c_i.real), TWO_PI)
    best = None
    for shift in (-TWO_PI, 0.0, TWO_PI):
        lo = max(-gamma, center + shift - half)
        hi = min(gamma, center + shift + half)
        if hi > lo and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi)
    return best


@dataclass(frozen=True)
class FundamentalDomain:
    constraints: tuple[BisectorConstraint, ...]
    free_edges: tuple[Arc, ...]
    truncation_depth: int
    stabilized: bool
    shadows: tuple[Arc, ...] = ()

    @property
    def free_measure(self) -> float:
        return sum(a.length for a in self.free_edges)

    def circles(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.array([c.circle.center for c in self.constraints], dtype=complex),
            np.array([c.circle.radius for c in self.constraints], dtype=float),
        )


def _active_constraints(candidates: Sequence[BisectorConstraint], tol: float) -> list[BisectorConstraint]:
    active: list[BisectorConstraint] = []
    intervals: list[tuple[float, float]] = []
    for cand in candidates:
        gamma = cand.half_angle
        lo, hi = -gamma, gamma
        for other in active:
            iv = _allowed_interval(cand, other)
            if iv is None:
                lo, hi = 1.0, 0.0
                break
            lo, hi = max(lo, iv[0]), min(hi, iv[1])
            if hi - lo <= tol:
                break
        if hi - lo <= tol:
            continue
        keep_active, keep_iv = [], []
        for other, (olo, ohi) in zip(active, intervals):
            iv = _allowed_interval(other, cand)
            if iv is not None:
                olo, ohi = max(olo, iv[0]), min(ohi, iv[1])
                if ohi - olo > tol:
                    keep_active.append(other)
                    keep_iv.append((olo, ohi))
        active = keep_active + [cand]
        intervals = keep_iv + [(lo, hi)]
    return active


def _domain_at_depth(depth: int, orbit: Orbit):
    mask = (orbit.shells >= 1) & (orbit.shells <= depth)
    idx = np.flatnonzero(mask)
    idx = idx[np.argsort(np.abs(orbit.points[idx]), kind="stable")]
    candidates = [bisector(orbit.elements[i], orbit.words[i]) for i in idx]
    active = _active_constraints(candidates, 1e-12)
    shadows = tuple(c.shadow for c in candidates)
    edges = tuple(arcs_complement(shadows))
    return tuple(active), edges, shadows


def _same_domain(a, b, tol: float) -> bool:
    (act_a, edges_a, _), (act_b, edges_b, _) = a, b
    if len(act_a) != len(act_b) or len(edges_a) != len(edges_b):
        return False
    ca = sorted((c.circle.center.real, c.circle.center.imag) for c in act_a)
    cb = sorted((c.circle.center.real, c.circle.center.imag) for c in act_b)
    if any(abs(x[0] - y[0]) > tol or abs(x[1] - y[1]) > tol for x, y in zip(ca, cb)):
        return False
    return all(abs(x.start - y.start) <= tol and abs(x.length - y.length) <= tol for x, y in zip(edges_a, edges_b))


def build_domain(
    group: GroupPresentation,
    depth: int,
    tol: float = 1e-9,
    require_certificate: bool = True,
) -> FundamentalDomain:
    """Intersect the bisector half-planes of all reduced words of length <= depth.

    Redundant constraints are pruned.  The domain is flagged stabilized when
    the active constraints and free edges agree with those at ``depth - 1``.
    """
    if require_certificate:
        group.require_certified()
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth == 0:
        return FundamentalDomain((), (Arc(0.0, TWO_PI),), 0, False)
    orbit = enumerate_orbit(group, depth, require_certificate=False)
    current = _domain_at_depth(depth, orbit)
    previous = _domain_at_depth(depth - 1, orbit) if depth > 1 else ((), (Arc(0.0, TWO_PI),), ())
    stabilized = _same_domain(current, previous, tol)
    if not stabilized:
        log.warning("Dirichlet domain not stabilized at depth %d", depth)
    active, edges, shadows = current
    return FundamentalDomain(active, edges, depth, stabilized, shadows)


def contains(domain: FundamentalDomain, z, tol: float = CONTAINS_TOL):
    """Membership in the (truncated) Dirichlet domain, vectorized."""
    z = np.asarray(z, dtype=complex)
    if not domain.constraints:
        return np.abs(z) < 1 if z.ndim else bool(abs(z) < 1)
    centers, radii = domain.circles()
    ok = np.all(np.abs(z[..., None] - centers) >= radii - tol, axis=-1)
    return ok if z.ndim else bool(ok)


@dataclass(frozen=True)
class Reduction:
    """Vectorized reduction result: ``w = g(z)`` with ``g = (a, b)``."""

    w: np.ndarray
    derivative: np.ndarray
    a: np.ndarray
    b: np.ndarray
    steps: np.ndarray

    def element(self, i: int = 0) -> DiskAutomorphism:
        return DiskAutomorphism(complex(self.a.flat[i]), complex(self.b.flat[i]))


def reduce_points(
    group: GroupPresentation, z, max_iter: int = REDUCE_MAX_ITER, tol: float = REDUCE_TOL
) -> Reduction:
    """Greedy descent of many points into the Dirichlet domain at 0.

    A letter s is applied while it lowers rho(., 0) by more than ``tol``,
    measured as ``log|s'(z)|`` (s moves z towards 0 exactly when
    ``|s'(z)| > 1``); the steepest letter wins, ties to the lowest index.
    """
    group.require_certified()
    z = np.asarray(z, dtype=complex)
    ga, gb = group.letter_arrays()
    w, d, ra, rb, steps, n_failed = _kernels.reduce_points(z.ravel(), ga, gb, max_iter, tol)
    if n_failed:
        raise ReductionError(f"{n_failed} point(s) not reduced within {max_iter} steps")
    shape = z.shape
    return Reduction(w.reshape(shape), d.reshape(shape), ra.reshape(shape), rb.reshape(shape), steps.reshape(shape))


def reduce(
    domain: FundamentalDomain, group: GroupPresentation, z: complex, max_iter: int = REDUCE_MAX_ITER
) -> tuple[complex, DiskAutomorphism]:
    """Return ``(w, g)`` with ``w = g(z)`` in the domain."""
    if not abs(z) < 1:
        raise ValueError("z must lie in the open unit disk")
    red = reduce_points(group, np.array([z]), max_iter=max_iter)
    w = complex(red.w[0])
    if not contains(domain, w, tol=1e-9):
        raise ReductionError(f"reduced point {w} is not in the domain; truncation too shallow?")
    return w, red.element(0)


def free_edges(domain: FundamentalDomain) -> list[Arc]:
    return list(domain.free_edges)


def limit_set_directions(group: GroupPresentation, depth: int, eps: float = 1e-3) -> np.ndarray:
    """Angles of orbit points with |g(0)| > 1 - eps, a proxy for the limit set."""
    orbit = enumerate_orbit(group, depth)
    pts = orbit.points[orbit.one_minus_abs < eps]
    return wrap_angle(np.angle(pts))


def limit_point_angles(group: GroupPresentation, max_length: int = 2) -> np.ndarray:
    """Angles of the fixed points of cyclically reduced words up to max_length.

    These are exact limit points, unlike the orbit proxy above.
    """
    orbit = enumerate_orbit(group, max_length)
    out = []
    for word, g in zip(orbit.words, orbit.elements):
        w = word.letters
        if not w or w[0] == -w[-1]:
            continue
        out.extend(cmath.phase(p) for p in fixed_points(g))
    return np.unique(np.round(wrap_angle(np.array(out)), 14))


def limit_set_gap(domain: FundamentalDomain, group: GroupPresentation, depth: int, eps: float = 1e-3) -> float:
    """Smallest angular distance from a free-edge endpoint to the limit-set proxy."""
    angles = limit_set_directions(group, depth, eps)
    if angles.size == 0:
        log.warning("no orbit point within %g of the circle at depth %d", eps, depth)
        return math.inf
    ends = np.array([x for a in domain.free_edges for x in (a.start, a.end)])
    if ends.size == 0:
        return math.inf
    diff = np.abs(np.remainder(ends[:, None] - angles[None, :] + math.pi, TWO_PI) - math.pi)
    gap = float(diff.min())
    if gap < 1e-6:
        log.warning("free-edge endpoint within %g of the limit set proxy", gap)
    return gap


def arc_image(g: DiskAutomorphism, arc: Arc) -> Arc:
    p, q = arc.endpoints()
    a0 = cmath.phase(g(p))
    a1 = cmath.phase(g(q))
    length = (a1 - a0) % TWO_PI if arc.length < TWO_PI else TWO_PI
    if arc.length == 0:
        length = 0.0
    return Arc(a0, length)


@dataclass(frozen=True)
class DisjointnessResult:
    disjoint: bool
    max_overlap: float
    n_images: int


def arc_image_disjointness(
    group: GroupPresentation, arc: Arc, depth: int, tol: float = 1e-10
) -> DisjointnessResult:
    """Check that the images g(arc), g in the depth truncation, do not overlap."""
    orbit = enumerate_orbit(group, depth)
    if arc.length == 0:
        return DisjointnessResult(True, 0.0, len(orbit))
    images = [arc_image(g, arc) for g in orbit.elements]
    starts = np.array([a.start for a in images])
    ends = starts + np.array([a.length for a in images])
    starts = np.concatenate([starts, starts + TWO_PI])
    ends = np.concatenate([ends, ends + TWO_PI])
    order = np.argsort(starts, kind="stable")
    starts, ends = starts[order], ends[order]
    running = np.maximum.accumulate(ends)
    prev = np.concatenate([[-np.inf], running[:-1]])
    overlap = np.clip(np.minimum(prev, ends) - starts, 0.0, None)
    worst = float(overlap.max())
    return DisjointnessResult(worst < tol, worst, len(orbit))
