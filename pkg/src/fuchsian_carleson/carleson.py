"""Carleson-box integrals of |mu|^2 / (1 - |z|^2) and the checks built on them.

Boxes are Euclidean, B(xi, r) ∩ Δ.  The hypothesis check integrates the
density restricted to the fundamental domain over boxes centred on free
edges; the global check integrates the equivariant density over boxes
centred anywhere on the circle, including limit-set directions.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .beltrami import BeltramiField
from .domain import FundamentalDomain, contains, limit_point_angles, wrap_angle
from .group import Orbit, dyadic_radii, enumerate_orbit
from .quadrature import QuadResult, polar_box_integral

STABILITY_TOL = 0.10
CHECK_TOL = 1e-2
ENDPOINT_INSET = 1e-6
GROWTH_SLOPE = 0.1
GROWTH_R2 = 0.9
LIMIT_OFFSETS = np.array([-1.0, -0.5, 0.5, 1.0])
SEED_DEPTH = 6
SEED_SHARE = 0.25


@dataclass(frozen=True)
class CarlesonBox:
    """B(center, radius) ∩ Δ with |center| <= 1 and 0 < radius <= 2."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if abs(self.center) > 1.0 + 1e-12:
            raise ValueError("box center must satisfy |xi| <= 1")
        if not 0 < self.radius <= 2.0:
            raise ValueError(f"box radius must lie in (0, 2], got {self.radius}")

    @classmethod
    def on_circle(cls, angle: float, radius: float) -> "CarlesonBox":
        return cls(complex(math.cos(angle), math.sin(angle)), radius)

    @property
    def angle(self) -> float:
        return math.atan2(self.center.imag, self.center.real)

    def contains(self, z):
        z = np.asarray(z)
        return (np.abs(z - self.center) < self.radius) & (np.abs(z) < 1.0)


class MeasureDensity:
    """Nonnegative density (or discrete measure) to integrate over boxes.

    Parameters
    ----------
    source
        A BeltramiField (density |mu|^2 / (1 - |z|^2)), an Orbit (the
        measure sum (1 - |g(0)|^2) delta_{g(0)}), or a callable
        ``f(z, one_minus_r2)``.
    mask
        ``None``, a FundamentalDomain (restrict to F; the field is then read
        off its base values without reduction) or a predicate on z.
    weight
        Optional extra factor ``w(z)``, e.g. ``|f(z)|^2`` for embedding tests.
    """

    def __init__(
        self,
        source: BeltramiField | Orbit | Callable,
        mask: FundamentalDomain | Callable | None = None,
        weight: Callable | None = None,
        label: str = "",
    ):
        self.source = source
        self.mask = mask
        self.weight = weight
        self.label = label
        self._seeds: tuple[np.ndarray, np.ndarray] | None = None

    def seeds(self, depth: int = SEED_DEPTH) -> tuple[np.ndarray, np.ndarray] | None:
        """Euclidean disks g(B(0, R)) holding the orbit copies of the field's features.

        Only unmasked equivariant fields with isolated features need them:
        the copies g(supp) near the limit set are far smaller than a
        starting quadrature cell.
        """
        src = self.source
        if not isinstance(src, BeltramiField) or isinstance(self.mask, FundamentalDomain):
            return None
        radius = src.feature_radius
        if radius is None:
            return None
        if self._seeds is None:
            orbit = enumerate_orbit(src.group, depth)
            p = orbit.points
            x2 = math.tanh(radius / 2.0) ** 2
            den = 1.0 - x2 * np.abs(p) ** 2
            # hyperbolic ball about p: Euclidean center and radius
            self._seeds = (p * (1.0 - x2) / den, math.sqrt(x2) * orbit.one_minus_r2 / den)
        return self._seeds

    @property
    def is_discrete(self) -> bool:
        return isinstance(self.source, Orbit)

    @property
    def is_zero(self) -> bool:
        return isinstance(self.source, BeltramiField) and self.source.is_zero

    def bound(self) -> float | None:
        """k^2, so that density <= k^2 / (1 - |z|^2), for field sources."""
        if isinstance(self.source, BeltramiField):
            return self.source.k ** 2
        return None

    def masked(self, mask) -> "MeasureDensity":
        out = MeasureDensity(self.source, mask, self.weight, self.label)
        out._seeds = self._seeds if mask is None else None
        return out

    def weighted(self, weight: Callable) -> "MeasureDensity":
        out = MeasureDensity(self.source, self.mask, weight, self.label)
        out._seeds = self._seeds
        return out

    def _mask_values(self, z):
        if self.mask is None:
            return None
        if isinstance(self.mask, FundamentalDomain):
            return contains(self.mask, z)
        return np.asarray(self.mask(z), dtype=bool)

    def __call__(self, z, one_minus_r2=None) -> np.ndarray:
        if self.is_discrete:
            raise TypeError("a discrete measure has no pointwise density")
        z = np.asarray(z, dtype=complex)
        if one_minus_r2 is None:
            one_minus_r2 = 1.0 - np.abs(z) ** 2
        one_minus_r2 = np.asarray(one_minus_r2, dtype=float)
        out = np.zeros(z.shape)
        if self.is_zero:
            return out
        sel = self._mask_values(z)
        if sel is None:
            sel = np.ones(z.shape, dtype=bool)
        if not sel.any():
            return out
        zs, om = z[sel], one_minus_r2[sel]
        src = self.source
        if isinstance(src, BeltramiField):
            if isinstance(self.mask, FundamentalDomain):
                m = src._base_modulus(zs, om)
                vals = m * m / om
            else:
                vals = src.density(zs, om)
        else:
            vals = np.asarray(src(zs, om), dtype=float)
        if self.weight is not None:
            vals = vals * self.weight(zs)
        out[sel] = vals
        return out


@dataclass(frozen=True)
class BoxIntegral:
    """Result of one box integral; unpacks as ``value, error``."""

    value: float
    error: float
    converged: bool = True
    divergent: bool = False
    evals: int = 0

    def __iter__(self):
        return iter((self.value, self.error))


def box_integral(
    d: MeasureDensity,
    box: CarlesonBox,
    tol: float = 1e-3,
    max_evals: int = 4_000_000,
) -> BoxIntegral:
    """Integral of the density over B(xi, r) ∩ Δ with an error estimate.

    Discrete measures are summed exactly.  If ``tol`` cannot be met within
    ``max_evals`` the best value is returned with ``converged=False``; a
    divergent integral returns the truncated value, ``error=inf`` and
    ``divergent=True``.
    """
    if d.is_zero:
        return BoxIntegral(0.0, 0.0)
    if d.is_discrete:
        orbit = d.source
        inside = box.contains(orbit.points)
        sel = d._mask_values(orbit.points)
        if sel is not None:
            inside &= sel
        w = orbit.one_minus_r2[inside]
        if d.weight is not None:
            w = w * d.weight(orbit.points[inside])
        return BoxIntegral(float(w.sum()), 0.0)
    seeds = d.seeds()
    if seeds is not None:
        seeds = _significant_seeds(*seeds, box, tol)
    res: QuadResult = polar_box_integral(d, box.center, box.radius, tol=tol, max_evals=max_evals, seeds=seeds)
    return BoxIntegral(res.value, res.error, res.converged, res.divergent, res.evals)


def _significant_seeds(centers, radii, box: CarlesonBox, tol: float, share: float = SEED_SHARE):
    """Seed disks meeting the box, dropping the smallest ones.

    A copy g(K) of a compact feature carries measure proportional to
    1 - |g(0)|^2, so to its Euclidean radius.  The smallest disks are
    dropped as long as their radii add up to at most ``share * tol`` of
    the total.
    """
    near = np.abs(centers - box.center) < box.radius + radii
    centers, radii = centers[near], radii[near]
    order = np.argsort(-radii, kind="stable")
    radii = radii[order]
    dropped = np.cumsum(radii[::-1])[::-1]  # dropped[i] = sum of radii[i:]
    keep = int(np.count_nonzero(dropped > share * tol * dropped[0])) if len(radii) else 0
    return centers[order][:keep], radii[:keep]


def monte_carlo_oracle(
    d: MeasureDensity,
    box: CarlesonBox,
    n: int,
    rng: np.random.Generator,
    chunk: int = 1_000_000,
) -> tuple[float, float]:
    """Plain Monte Carlo over the bounding square of the box region.

    Returns ``(estimate, standard error)``.
    """
    if n < 1000:
        raise ValueError("Monte Carlo oracle needs at least 1000 samples")
    c, r = box.center, box.radius
    x0, x1 = max(c.real - r, -1.0), min(c.real + r, 1.0)
    y0, y1 = max(c.imag - r, -1.0), min(c.imag + r, 1.0)
    area = (x1 - x0) * (y1 - y0)
    s1 = s2 = 0.0
    hits = 0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        z = rng.uniform(x0, x1, m) + 1j * rng.uniform(y0, y1, m)
        inside = box.contains(z)
        vals = np.zeros(m)
        if inside.any():
            vals[inside] = d(z[inside])
        hits += int(inside.sum())
        s1 += float(vals.sum())
        s2 += float(np.dot(vals, vals))
        done += m
    if hits == 0:
        raise ValueError("box region has no samples; its measure is zero or too small")
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0)
    return area * mean, area * math.sqrt(var / (n - 1))


@dataclass(frozen=True)
class ReportRow:
    xi: complex
    r: float
    integral: float
    err_est: float
    converged: bool = True
    divergent: bool = False

    @property
    def xi_angle(self) -> float:
        return math.atan2(self.xi.imag, self.xi.real)

    @property
    def ratio(self) -> float:
        return self.integral / self.r


@dataclass
class CarlesonReport:
    """Rows of box integrals plus derived summary statistics."""

    rows: list[ReportRow]
    kind: str = ""
    info: dict = field(default_factory=dict)

    @property
    def sup_ratio(self) -> float:
        return max((row.ratio for row in self.rows), default=0.0)

    @property
    def radii(self) -> np.ndarray:
        return np.array(sorted({row.r for row in self.rows}, reverse=True))

    def scale_sups(self) -> dict[float, float]:
        """sup over xi of the ratio, for each radius."""
        out: dict[float, float] = {}
        for row in self.rows:
            out[row.r] = max(out.get(row.r, 0.0), row.ratio)
        return dict(sorted(out.items(), reverse=True))

    @property
    def n_divergent(self) -> int:
        return sum(row.divergent for row in self.rows)

    @property
    def n_unconverged(self) -> int:
        return sum((not row.converged) and not row.divergent for row in self.rows)

    def relative_change(self) -> float:
        """Relative change of the scale sup between the two smallest radii."""
        sups = list(self.scale_sups().values())
        if len(sups) < 2:
            return math.nan
        prev, last = sups[-2], sups[-1]
        if prev == 0.0:
            return 0.0 if last == 0.0 else math.inf
        return (last - prev) / prev

    @property
    def stabilized(self) -> bool:
        """No divergent box, and no growth of more than 10% at the last scale.

        A Carleson measure needs bounded ratios, so a decrease towards the
        smallest radius counts as stable.
        """
        if self.n_divergent:
            return False
        change = self.relative_change()
        return bool(not math.isnan(change) and change <= STABILITY_TOL)

    @property
    def finite(self) -> bool:
        return self.n_divergent == 0 and math.isfinite(self.sup_ratio)

    def growth_fit(self) -> tuple[float, float]:
        """Least-squares fit of scale sup ratio against log(1/r): (slope, R^2)."""
        sups = self.scale_sups()
        x = np.log(1.0 / np.array(list(sups.keys())))
        y = np.array(list(sups.values()))
        return linear_fit(x, y)

    def summary(self) -> dict[str, object]:
        slope, r2 = self.growth_fit() if len(self.scale_sups()) >= 2 else (math.nan, math.nan)
        out: dict[str, object] = {
            "kind": self.kind,
            "sup_ratio": self.sup_ratio,
            "stabilized": self.stabilized,
            "relative_change": self.relative_change(),
            "n_boxes": len(self.rows),
            "n_divergent": self.n_divergent,
            "n_unconverged": self.n_unconverged,
            "growth_slope": slope,
            "growth_r2": r2,
        }
        out.update(self.info)
        return out


def linear_fit(x, y) -> tuple[float, float]:
    """Slope and coefficient of determination of y ~ a + b x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two points for a fit")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else (1.0 if np.allclose(resid, 0) else 0.0)
    return float(slope), r2


def parallel_map(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """Ordered map; threads when ``workers > 1``.

    The kernels release the GIL and every task is deterministic, so results
    do not depend on ``workers``.
    """
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _run_boxes(
    d: MeasureDensity,
    boxes: Iterable[CarlesonBox],
    tol: float,
    max_evals: int,
    workers: int,
) -> list[ReportRow]:
    boxes = list(boxes)

    def one(box: CarlesonBox) -> ReportRow:
        res = box_integral(d, box, tol=tol, max_evals=max_evals)
        return ReportRow(box.center, box.radius, res.value, res.error, res.converged, res.divergent)

    return parallel_map(one, boxes, workers)


def edge_grid(domain: FundamentalDomain, per_edge: int, inset: float = ENDPOINT_INSET) -> np.ndarray:
    """``per_edge`` angles on each free edge, endpoints inset by ``inset``."""
    if not domain.free_edges:
        raise ValueError("domain has no free edges")
    if per_edge < 1:
        raise ValueError("need at least one point per edge")
    out = []
    for arc in domain.free_edges:
        if per_edge == 1:
            out.append(np.array([arc.midpoint]))
        else:
            out.append(np.linspace(arc.start + inset, arc.end - inset, per_edge))
    return wrap_angle(np.concatenate(out))


def hypothesis_check(
    field_: BeltramiField,
    domain: FundamentalDomain | None = None,
    radii: Sequence[float] | None = None,
    xi_per_edge: int = 9,
    tol: float = CHECK_TOL,
    max_evals: int = 4_000_000,
    workers: int = 1,
) -> CarlesonReport:
    """Boxes centred on the free edges, density restricted to F."""
    domain = field_.domain if domain is None else domain
    radii = dyadic_radii() if radii is None else np.asarray(radii, dtype=float)
    angles = edge_grid(domain, xi_per_edge)
    d = MeasureDensity(field_, mask=domain, label="hypothesis")
    boxes = [CarlesonBox.on_circle(a, r) for r in radii for a in angles]
    rows = _run_boxes(d, boxes, tol, max_evals, workers)
    return CarlesonReport(rows, "hypothesis")


def hypothesis_violated(report: CarlesonReport) -> bool:
    """Divergent boxes, or sup ratios growing like log(1/r)."""
    if report.n_divergent:
        return True
    if len(report.scale_sups()) < 3:
        return False
    slope, r2 = report.growth_fit()
    return slope > GROWTH_SLOPE and r2 > GROWTH_R2


def global_grid(
    domain: FundamentalDomain,
    xi_count: int,
    limit_angles: Sequence[float] = (),
    refine: int = 4,
) -> np.ndarray:
    """Uniform angles, refined ``refine`` times near free-edge endpoints and limit points."""
    base = np.linspace(0.0, 2 * math.pi, xi_count, endpoint=False)
    h = 2 * math.pi / xi_count
    local = np.linspace(-h / 2, h / 2, refine + 1)
    centres = [x for a in domain.free_edges for x in (a.start, a.end)] + list(limit_angles)
    extra = [c + local for c in centres]
    angles = np.concatenate([base, *extra, np.asarray(limit_angles, dtype=float)])
    return np.unique(np.round(wrap_angle(angles), 13))


def global_norm(
    field_: BeltramiField,
    radii: Sequence[float] | None = None,
    xi_count: int = 64,
    limit_depth: int = 2,
    tol: float = CHECK_TOL,
    max_evals: int = 4_000_000,
    workers: int = 1,
    zoom_rounds: int = 2,
    zoom_candidates: int = 8,
) -> CarlesonReport:
    """Boxes over the whole circle, unmasked equivariant density.

    A fixed grid cannot resolve boxes much smaller than its spacing, so
    each radius also gets boxes offset from every limit point by multiples
    of r, followed by a local search around its ``zoom_candidates`` best
    angles.
    """
    radii = dyadic_radii() if radii is None else np.asarray(radii, dtype=float)
    limits = limit_point_angles(field_.group, limit_depth) if limit_depth > 0 else np.array([])
    angles = global_grid(field_.domain, xi_count, limits)
    d = MeasureDensity(field_, label="global")
    boxes = [CarlesonBox.on_circle(a, r) for r in radii for a in angles]
    rows = _run_boxes(d, boxes, tol, max_evals, workers)
    for r in radii:
        near = [float(wrap_angle(c + off)) for c in limits for off in r * LIMIT_OFFSETS]
        rows += _run_boxes(d, [CarlesonBox.on_circle(a, r) for a in near], tol, max_evals, workers)
        rows += _zoom(d, [row for row in rows if row.r == r], r, zoom_rounds, zoom_candidates, tol, max_evals, workers)
    info = {"n_angles": len(angles), "n_limit_angles": len(limits), "zoom_rounds": zoom_rounds}
    return CarlesonReport(rows, "global", info)


def _zoom(d, rows, r, rounds, candidates, tol, max_evals, workers) -> list[ReportRow]:
    """Local search in the angle around the best rows at one radius."""
    if d.is_zero or rounds <= 0 or not rows:
        return []
    found: list[ReportRow] = []
    seen = {round(row.xi_angle, 13) for row in rows}
    pool = list(rows)
    step = 0.5 * r
    for _ in range(rounds):
        best = sorted(pool, key=lambda row: row.ratio, reverse=True)[:candidates]
        new_angles = []
        for row in best:
            for off in step * np.array([-2.0, -1.0, 1.0, 2.0]):
                a = round(float(wrap_angle(row.xi_angle + off)), 13)
                if a not in seen:
                    seen.add(a)
                    new_angles.append(a)
        batch = _run_boxes(d, [CarlesonBox.on_circle(a, r) for a in new_angles], tol, max_evals, workers)
        found += batch
        pool += batch
        step *= 0.25
    return found


@dataclass(frozen=True)
class ExtensionRow:
    box: CarlesonBox
    integral: float
    bound: float
    regime: str

    @property
    def ok(self) -> bool:
        return self.integral <= self.bound


@dataclass
class ExtensionReport:
    rows: list[ExtensionRow]
    c_star: float
    k: float

    @property
    def violations(self) -> int:
        return sum(not row.ok for row in self.rows)

    @property
    def max_ratio_to_bound(self) -> float:
        return max((row.integral / row.bound for row in self.rows), default=0.0)


def interior_boxes(rng: np.random.Generator, n: int, r_min: float = 2.0**-8, r_max: float = 1.0) -> list[CarlesonBox]:
    """Random interior boxes, half with dist(xi, ∂Δ) >= 2r and half closer."""
    out = []
    while len(out) < n:
        r = math.exp(rng.uniform(math.log(r_min), math.log(r_max)))
        far = len(out) % 2 == 0
        if far:
            if 1.0 - 2.0 * r <= 0:
                continue
            rad = (1.0 - 2.0 * r) * math.sqrt(rng.uniform())
        else:
            rad = 1.0 - 2.0 * r * rng.uniform()
            rad = max(rad, 0.0)
            if rad >= 1.0:
                continue
        out.append(CarlesonBox(rad * np.exp(2j * math.pi * rng.uniform()), r))
    return out


def interior_extension_check(
    field_: BeltramiField,
    c_star: float,
    boxes: Sequence[CarlesonBox],
    tol: float = CHECK_TOL,
    max_evals: int = 4_000_000,
    workers: int = 1,
) -> ExtensionReport:
    """Check integral <= max(pi k, 4 C*) r for boxes centred inside the disk.

    Far from the circle (dist >= 2r) the density is at most k^2 / r on the
    box, giving pi k^2 r <= pi k r.  Otherwise B(xi, r) lies in B(eta, 4r)
    for the nearest boundary point eta, giving 4 C* r.
    """
    d = MeasureDensity(field_, label="interior")
    bound_const = max(math.pi * field_.k, 4.0 * c_star)
    rows = _run_boxes(d, boxes, tol, max_evals, workers)
    out = []
    for box, row in zip(boxes, rows):
        regime = "far" if 1.0 - abs(box.center) >= 2.0 * box.radius else "near"
        # charge the quadrature error against the check
        out.append(ExtensionRow(box, row.integral + row.err_est, bound_const * box.radius, regime))
    return ExtensionReport(out, c_star, field_.k)


@dataclass(frozen=True)
class EmbeddingResult:
    degrees: tuple[int, ...]
    ratios: np.ndarray
    c_star: float

    @property
    def kappa(self) -> float:
        """Smallest kappa with ratio <= kappa * C* for every degree."""
        return float(np.max(self.ratios) / self.c_star) if self.c_star > 0 else math.inf


def boundary_l2(coeffs: Sequence[complex], nodes: int = 2**14) -> float:
    """∫ |f|^2 ds over the unit circle by the uniform trapezoid rule."""
    theta = np.linspace(0.0, 2 * math.pi, nodes, endpoint=False)
    vals = np.polynomial.polynomial.polyval(np.exp(1j * theta), np.asarray(coeffs, dtype=complex))
    return float(2 * math.pi * np.mean(np.abs(vals) ** 2))


def embedding_ratio(
    d: MeasureDensity,
    coeffs: Sequence[complex],
    tol: float = 1e-4,
    nodes: int = 2**14,
    max_evals: int = 4_000_000,
) -> float:
    """(∬_Δ |f|^2 dν) / (∫_∂Δ |f|^2 ds) for the polynomial with these coefficients."""
    coeffs = np.asarray(coeffs, dtype=complex)
    denom = boundary_l2(coeffs, nodes)
    if denom == 0.0:
        raise ValueError("boundary integral vanishes (f is identically zero)")

    def weight(z):
        return np.abs(np.polynomial.polynomial.polyval(z, coeffs)) ** 2

    res = box_integral(d.weighted(weight), CarlesonBox(0.0, 1.0), tol=tol, max_evals=max_evals)
    if res.divergent:
        return math.inf
    return res.value / denom


def embedding_test(
    d: MeasureDensity,
    c_star: float,
    degrees: Sequence[int] = tuple(range(9)),
    tol: float = 1e-4,
) -> EmbeddingResult:
    """Ratios for the monomials z^n, n in ``degrees``."""
    ratios = []
    for n in degrees:
        coeffs = np.zeros(n + 1, dtype=complex)
        coeffs[n] = 1.0
        ratios.append(embedding_ratio(d, coeffs, tol=tol))
    return EmbeddingResult(tuple(degrees), np.array(ratios), c_star)


@dataclass
class TheoremVerdict:
    verdict: str
    hypothesis: CarlesonReport
    global_report: CarlesonReport | None
    reasons: list[str]

    @property
    def exit_code(self) -> int:
        return {"PASS": 0, "FAIL": 1, "INCONCLUSIVE": 2}[self.verdict]


def verify_theorem(
    field_: BeltramiField,
    radii: Sequence[float] | None = None,
    xi_per_edge: int = 9,
    xi_count: int = 64,
    limit_depth: int = 2,
    tol: float = CHECK_TOL,
    max_evals: int = 4_000_000,
    workers: int = 1,
    zoom_rounds: int = 2,
) -> TheoremVerdict:
    """Hypothesis check, then (if bounded) the global check.

    PASS: hypothesis bounded and global stabilized.  FAIL: hypothesis
    violated.  INCONCLUSIVE: anything else (quadrature or stabilization flags).
    """
    hyp = hypothesis_check(field_, None, radii, xi_per_edge, tol, max_evals, workers)
    reasons = []
    if hypothesis_violated(hyp):
        if hyp.n_divergent:
            reasons.append(f"{hyp.n_divergent} hypothesis boxes diverge")
        else:
            slope, r2 = hyp.growth_fit()
            reasons.append(f"hypothesis ratios grow like log(1/r): slope={slope:.3g}, R2={r2:.3g}")
        return TheoremVerdict("FAIL", hyp, None, reasons)
    if hyp.n_unconverged or not hyp.stabilized:
        reasons.append(
            f"hypothesis not settled: unconverged={hyp.n_unconverged}, stabilized={hyp.stabilized}"
        )
        return TheoremVerdict("INCONCLUSIVE", hyp, None, reasons)
    glob = global_norm(field_, radii, xi_count, limit_depth, tol, max_evals, workers, zoom_rounds)
    if glob.finite and glob.stabilized and not glob.n_unconverged:
        return TheoremVerdict("PASS", hyp, glob, reasons)
    reasons.append(
        f"global not settled: divergent={glob.n_divergent}, unconverged={glob.n_unconverged}, "
        f"relative_change={glob.relative_change():.3g}"
    )
    return TheoremVerdict("INCONCLUSIVE", hyp, glob, reasons)
