"""Adaptive quadrature over B(xi, r) ∩ Δ in polar coordinates about xi.

Write z = xi + rho * exp(i phi) and psi = phi - arg(-xi), so psi = 0 points
towards the center of the disk.  Along a ray the disk boundary is reached at

    rho_e(psi) = -beta + sqrt(beta^2 + 1 - |xi|^2),   beta = -|xi| cos(psi),

and ``1 - |z|^2 = (rho_e - rho)(rho - rho_m)`` exactly, with rho_m the other
root.  Rays with ``rho_e <= r`` end on the unit circle, where the density may
blow up; the psi range is split where rays switch between ending on the
circle and ending on |z - xi| = r.

The radial variable is graded towards the end of the ray: with
``rho = rho_max * (1 - 2**-tau)`` each unit of tau halves the distance to the
end.  The (psi, tau) rectangle, tau in [0, levels], is integrated with
tensor Gauss-Legendre cells that are split in four wherever the
difference between a cell and the sum of its children (a Richardson-type
estimate) is largest.  The remaining tau > levels strip is extrapolated
geometrically from the last layers; if layers stop shrinking the integral
is declared divergent.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

LN2 = math.log(2.0)
DEFAULT_LEVELS = 22
DEFAULT_ORDER = 4
DIVERGENCE_RATIO = 0.9
ON_CIRCLE_TOL = 1e-14
TAIL_WINDOW = 6

Density = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evals: int
    converged: bool
    divergent: bool
    layers: np.ndarray

    def __iter__(self):
        return iter((self.value, self.error))


class _PolarMap:
    def __init__(self, density: Density, xi: complex, r: float):
        self.density = density
        self.xi = complex(xi)
        self.r = float(r)
        mod = abs(self.xi)
        self.mod = min(mod, 1.0)
        self.c = max((1.0 - self.mod) * (1.0 + self.mod), 0.0)
        if self.c < ON_CIRCLE_TOL:
            self.c = 0.0
        self.on_circle = self.c == 0.0
        self.theta0 = math.atan2(-self.xi.imag, -self.xi.real) if mod > 0 else 0.0

    def psi_breaks(self) -> list[float]:
        lo, hi = (-math.pi / 2, math.pi / 2) if self.on_circle else (-math.pi, math.pi)
        points = [lo, hi]
        if self.mod > 0:
            beta_star = (self.c - self.r * self.r) / (2.0 * self.r)
            c_star = -beta_star / self.mod
            if -1.0 < c_star < 1.0:
                a = math.acos(c_star)
                points += [p for p in (-a, a) if lo < p < hi]
        return sorted(points)

    def __call__(self, psi: np.ndarray, tau: np.ndarray) -> np.ndarray:
        r, c = self.r, self.c
        beta = -self.mod * np.cos(psi)
        root = np.sqrt(beta * beta + c)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho_e = np.where(beta <= 0, root - beta, c / (beta + root))
            rho_m = np.where(rho_e > 0, -c / rho_e, 0.0)
        t = np.exp2(-tau)
        capped = rho_e > r
        rho_max = np.where(capped, r, rho_e)
        rho = rho_max * (1.0 - t)
        with np.errstate(divide="ignore", invalid="ignore"):
            # rho_e - r without cancellation, via the quadratic at rho = r
            end_gap = np.where(capped, (c - 2.0 * beta * r - r * r) / (r - rho_m), 0.0)
        gap = np.where(capped, end_gap + r * t, rho_e * t)
        omr2 = gap * (rho - rho_m)
        z = self.xi + rho * np.exp(1j * (psi + self.theta0))
        az = np.abs(z)
        z = np.where(az < 1.0, z, z / az * np.nextafter(1.0, 0.0))
        ok = (rho_max > 0) & (omr2 > 0)
        out = np.zeros(np.shape(psi))
        if np.any(ok):
            f = self.density(z[ok], omr2[ok])
            out[ok] = f * rho[ok] * rho_max[ok] * t[ok] * LN2
        return out


class _CellRule:
    """Tensor Gauss-Legendre rule applied to many rectangles at once."""

    def __init__(self, integrand: _PolarMap, order: int, chunk: int = 1 << 18):
        x, w = np.polynomial.legendre.leggauss(order)
        self.x = (x + 1.0) / 2.0
        self.w = np.outer(w, w).ravel() / 4.0
        self.xx, self.yy = (a.ravel() for a in np.meshgrid(self.x, self.x, indexing="ij"))
        self.f = integrand
        self.npts = order * order
        self.chunk = max(chunk // self.npts, 1)
        self.evals = 0

    def __call__(self, pa, pb, ta, tb) -> np.ndarray:
        out = np.empty(len(pa))
        for s in range(0, len(pa), self.chunk):
            sl = slice(s, s + self.chunk)
            dp = (pb[sl] - pa[sl])[:, None]
            dt = (tb[sl] - ta[sl])[:, None]
            psi = pa[sl][:, None] + dp * self.xx
            tau = ta[sl][:, None] + dt * self.yy
            vals = self.f(psi.ravel(), tau.ravel()).reshape(psi.shape)
            out[sl] = (vals @ self.w) * (dp[:, 0] * dt[:, 0])
            self.evals += vals.size
        return out


SEED_RINGS = ((0.5, 6), (0.95, 12))


def _footprints(centers, radii):
    """Points covering each seed disk (center plus two rings), each asking for cells of half the radius."""
    centers = np.asarray(centers, dtype=complex).ravel()
    radii = np.asarray(radii, dtype=float).ravel()
    pts = [centers]
    for frac, n in SEED_RINGS:
        ring = np.exp(2j * np.pi * (np.arange(n) + 0.5 * frac) / n)
        pts.append((centers[:, None] + frac * radii[:, None] * ring).ravel())
    sizes = np.concatenate([radii] + [np.repeat(radii, n) for _, n in SEED_RINGS])
    return np.concatenate(pts), 0.5 * sizes


def _seed_cells(f: _PolarMap, pa0, pa, pb, ta, tb, levels: int, points, sizes, max_generations: int = 64):
    """Split starting cells until each is smaller than the seeds it holds."""
    points = np.asarray(points, dtype=complex).ravel()
    sizes = np.asarray(sizes, dtype=float).ravel()
    d = points - f.xi
    rho = np.abs(d)
    psi = np.angle(d * complex(math.cos(-f.theta0), math.sin(-f.theta0)))
    beta = -f.mod * np.cos(psi)
    root = np.sqrt(beta * beta + f.c)
    with np.errstate(divide="ignore", invalid="ignore"):
        rho_e = np.where(beta <= 0, root - beta, f.c / (beta + root))
    rho_max = np.minimum(rho_e, f.r)
    lo, hi = pa0[0], pb[pb.argmax()]
    # a feature just outside the region still reaches into it
    ok = (rho < rho_max + sizes) & (psi >= lo) & (psi <= hi) & (rho_max > 0) & (sizes > 0)
    rho, psi, rho_max, sizes = rho[ok], psi[ok], rho_max[ok], sizes[ok]
    gap = np.maximum(rho_max - rho, 0.5 * sizes)
    tau = -np.log2(np.minimum(gap / rho_max, 1.0))
    deep = tau < levels
    rho, psi, rho_max, sizes, tau = rho[deep], psi[deep], rho_max[deep], sizes[deep], tau[deep]
    if psi.size == 0:
        return pa, pb, ta, tb
    rho = np.minimum(rho, rho_max)
    # starting cells are laid out psi-major with ``levels`` layers each
    pidx = np.clip(np.searchsorted(pa0, psi, side="right") - 1, 0, len(pa0) - 1)
    cell = pidx * levels + np.minimum(tau.astype(int), levels - 1)
    for _ in range(max_generations):
        tang = np.maximum(rho, 1e-300) * (pb[cell] - pa[cell])
        radial = rho_max * (np.exp2(-ta[cell]) - np.exp2(-tb[cell]))
        need_p = np.zeros(len(pa), dtype=bool)
        need_t = np.zeros(len(pa), dtype=bool)
        np.logical_or.at(need_p, cell, tang > sizes)
        np.logical_or.at(need_t, cell, radial > sizes)
        split = need_p | need_t
        if not split.any():
            break
        by_psi = need_p[split]
        idx = np.flatnonzero(split)
        pm = 0.5 * (pa[idx] + pb[idx])
        tm = 0.5 * (ta[idx] + tb[idx])
        a_pa, a_pb = pa[idx], np.where(by_psi, pm, pb[idx])
        a_ta, a_tb = ta[idx], np.where(by_psi, tb[idx], tm)
        b_pa, b_pb = np.where(by_psi, pm, pa[idx]), pb[idx]
        b_ta, b_tb = np.where(by_psi, ta[idx], tm), tb[idx]
        keep = ~split
        n_keep = int(keep.sum())
        new_index = np.cumsum(keep) - 1
        rank = np.cumsum(split) - 1
        in_split = split[cell]
        r_ = rank[cell[in_split]]
        second = np.where(by_psi[r_], psi[in_split] >= pm[r_], tau[in_split] >= tm[r_])
        cell = np.where(in_split, 0, new_index[cell])
        cell[in_split] = n_keep + r_ + np.where(second, len(idx), 0)
        pa = np.concatenate([pa[keep], a_pa, b_pa])
        pb = np.concatenate([pb[keep], a_pb, b_pb])
        ta = np.concatenate([ta[keep], a_ta, b_ta])
        tb = np.concatenate([tb[keep], a_tb, b_tb])
    return pa, pb, ta, tb


def _quarters(pa, pb, ta, tb):
    pm = 0.5 * (pa + pb)
    tm = 0.5 * (ta + tb)
    qa = np.stack([pa, pm, pa, pm], axis=1)
    qb = np.stack([pm, pb, pm, pb], axis=1)
    sa = np.stack([ta, ta, tm, tm], axis=1)
    sb = np.stack([tm, tm, tb, tb], axis=1)
    return qa, qb, sa, sb


def polar_box_integral(
    density: Density,
    xi: complex,
    r: float,
    tol: float = 1e-3,
    atol: float = 1e-15,
    levels: int = DEFAULT_LEVELS,
    order: int = DEFAULT_ORDER,
    max_evals: int = 4_000_000,
    psi_cell: float = math.pi / 16,
    seeds: tuple[np.ndarray, np.ndarray] | None = None,
) -> QuadResult:
    """Integrate ``density(z, 1 - |z|^2)`` over B(xi, r) ∩ Δ.

    ``tol`` is relative, ``atol`` absolute; the returned error is the sum of
    cell estimates plus the tail uncertainty.

    ``seeds = (centers, radii)`` lists disks holding features that the
    error estimate could step over, such as small isolated bumps of the
    density.  Starting cells meeting a disk are split until they are
    smaller than half its radius.
    """
    if not 0 < r <= 2.0:
        raise ValueError(f"box radius must lie in (0, 2], got {r}")
    if abs(xi) > 1.0 + 1e-12:
        raise ValueError("box center must satisfy |xi| <= 1")
    f = _PolarMap(density, xi, r)
    rule = _CellRule(f, order)

    breaks = f.psi_breaks()
    edges = []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        m = max(2, math.ceil((hi - lo) / psi_cell))
        edges.append(np.linspace(lo, hi, m + 1))
    pedges = np.concatenate([e[:-1] for e in edges] + [[breaks[-1]]])
    # cells never straddle a break because each piece was split on its own
    keep = np.diff(pedges) > 0
    pa0 = pedges[:-1][keep]
    pb0 = pedges[1:][keep]
    P, T = np.meshgrid(np.arange(len(pa0)), np.arange(levels), indexing="ij")
    pa, pb = pa0[P.ravel()], pb0[P.ravel()]
    ta = T.ravel().astype(float)
    tb = ta + 1.0
    if seeds is not None:
        pa, pb, ta, tb = _seed_cells(f, pa0, pa, pb, ta, tb, levels, *_footprints(*seeds))

    coarse = rule(pa, pb, ta, tb)
    qa, qb, sa, sb = _quarters(pa, pb, ta, tb)
    sub = rule(qa.ravel(), qb.ravel(), sa.ravel(), sb.ravel()).reshape(-1, 4)
    Q = sub.sum(axis=1)
    err = np.abs(Q - coarse)

    converged = False
    per_split = 16 * rule.npts
    while True:
        total = float(Q.sum())
        E = float(err.sum())
        if E <= max(tol * abs(total), atol):
            converged = True
            break
        if _tail_diverges(ta, Q, err, levels):
            break
        budget = (max_evals - rule.evals) // per_split
        if budget <= 0:
            break
        order_idx = np.argsort(-err, kind="stable")
        cum = np.cumsum(err[order_idx])
        k = int(np.searchsorted(cum, 0.5 * E)) + 1
        k = min(k, budget, 50_000, len(order_idx))
        pick = order_idx[:k]
        rest = np.ones(len(Q), dtype=bool)
        rest[pick] = False

        ca, cb, csa, csb = (a.ravel() for a in _quarters(pa[pick], pb[pick], ta[pick], tb[pick]))
        child_coarse = sub[pick].ravel()
        ga, gb, gsa, gsb = _quarters(ca, cb, csa, csb)
        child_sub = rule(ga.ravel(), gb.ravel(), gsa.ravel(), gsb.ravel()).reshape(-1, 4)
        child_Q = child_sub.sum(axis=1)
        child_err = np.abs(child_Q - child_coarse)

        pa = np.concatenate([pa[rest], ca])
        pb = np.concatenate([pb[rest], cb])
        ta = np.concatenate([ta[rest], csa])
        tb = np.concatenate([tb[rest], csb])
        sub = np.concatenate([sub[rest], child_sub])
        Q = np.concatenate([Q[rest], child_Q])
        err = np.concatenate([err[rest], child_err])

    layers = np.bincount(np.floor(ta).astype(int), weights=Q, minlength=levels)[:levels]
    total = float(Q.sum())
    E = float(err.sum())
    tail, tail_err, divergent = _tail(layers)
    if divergent:
        return QuadResult(total, math.inf, rule.evals, False, True, layers)
    return QuadResult(total + tail, E + tail_err, rule.evals, converged, False, layers)


def _window_ratio(layers: np.ndarray, window: int) -> float:
    """Per-layer shrink factor from the sums of the last two windows of layers.

    Windows smooth out log-periodic layer totals of self-similar densities.
    """
    last = float(layers[-window:].sum())
    prev = float(layers[-2 * window : -window].sum())
    if prev <= 0.0:
        return 0.0 if last <= 0.0 else math.inf
    return (last / prev) ** (1.0 / window)


def _tail_diverges(ta, Q, err, levels: int, window: int = TAIL_WINDOW) -> bool:
    """True once the deepest layers are resolved and clearly not shrinking."""
    idx = np.floor(ta).astype(int) - (levels - 2 * window)
    deep = idx >= 0
    layers = np.bincount(idx[deep], weights=Q[deep], minlength=2 * window)
    errs = np.bincount(idx[deep], weights=err[deep], minlength=2 * window)
    if np.any(errs > 0.01 * layers):
        return False
    return _window_ratio(layers, window) >= DIVERGENCE_RATIO


def _tail(layers: np.ndarray, window: int = TAIL_WINDOW) -> tuple[float, float, bool]:
    """Geometric extrapolation beyond the last layer, with half of it as error."""
    if layers[-window:].sum() <= 0.0:
        return 0.0, 0.0, False
    q = _window_ratio(layers, window)
    if q >= DIVERGENCE_RATIO:
        return math.inf, math.inf, True
    tail = float(layers[-window:].sum()) * q**window / (1.0 - q**window)
    return tail, 0.5 * tail, False
