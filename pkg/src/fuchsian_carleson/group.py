"""Free (Schottky) Fuchsian groups, orbit enumeration and orbit diagnostics.

Generators are indexed from 1; a letter is a signed index, ``+i`` for the
i-th generator and ``-i`` for its inverse.  Letters are always ordered
``+1, -1, +2, -2, ...``, which is also the tie-break order used by point
reduction.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from .mobius import DiskAutomorphism, IsometricCircle, isometric_circle

DEFAULT_ORBIT_CAP = 10**6


class OrbitTooLarge(MemoryError):
    pass


class UncertifiedGroup(ValueError):
    """A computation that needs a discreteness certificate got none."""


@dataclass(frozen=True)
class SchottkyCertificate:
    """Pairwise disjoint, mutually exterior isometric circles.

    ``circles[k]`` belongs to ``letters[k]``; ``min_gap`` is the smallest
    ``|c_i - c_j| - R_i - R_j`` over pairs (positive when certified).
    """

    letters: tuple[int, ...]
    circles: tuple[IsometricCircle, ...]
    min_gap: float


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[DiskAutomorphism, ...]
    schottky_certificate: SchottkyCertificate | None = None

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def certified(self) -> bool:
        return self.schottky_certificate is not None

    def letter_elements(self) -> list[tuple[int, DiskAutomorphism]]:
        """(letter, element) pairs in tie-break order +1, -1, +2, -2, ..."""
        out = []
        for i, g in enumerate(self.generators, start=1):
            out.append((i, g))
            out.append((-i, g.inverse()))
        return out

    def letter_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pairs = self.letter_elements()
        return (
            np.array([g.a for _, g in pairs], dtype=complex),
            np.array([g.b for _, g in pairs], dtype=complex),
        )

    def element(self, word: "Word | Sequence[int]") -> DiskAutomorphism:
        letters = word.letters if isinstance(word, Word) else tuple(word)
        g = DiskAutomorphism.identity()
        for letter in letters:
            g = g @ self.letter(letter)
        return g

    def letter(self, letter: int) -> DiskAutomorphism:
        g = self.generators[abs(letter) - 1]
        return g if letter > 0 else g.inverse()

    def require_certified(self) -> None:
        if not self.certified:
            raise UncertifiedGroup(
                "group has no Schottky certificate (isometric circles not pairwise disjoint)"
            )


@dataclass(frozen=True)
class Word:
    """Freely reduced word in the generators."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if any(x == 0 for x in letters):
            raise ValueError("letter 0 is not a generator index")
        if any(x == -y for x, y in zip(letters, letters[1:])):
            raise ValueError(f"word {letters} is not freely reduced")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(free_reduce(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return ".".join(str(x) for x in self.letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "e"):
            return cls(())
        return cls(tuple(int(x) for x in text.split(".")))


def free_reduce(letters: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class OrbitPoint:
    point: complex
    word: Word
    element: DiskAutomorphism


@dataclass
class Orbit:
    """Truncated orbit of 0, in BFS order (shell by shell).

    ``one_minus_r2`` holds ``1 - |g(0)|^2 = 1 / |a|^2``, which stays accurate
    for orbit points extremely close to the unit circle.
    """

    points: np.ndarray
    words: list[Word]
    elements: list[DiskAutomorphism]
    shells: np.ndarray
    one_minus_r2: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, i: int) -> OrbitPoint:
        return OrbitPoint(complex(self.points[i]), self.words[i], self.elements[i])

    def __iter__(self) -> Iterator[OrbitPoint]:
        return (self[i] for i in range(len(self)))

    @property
    def max_length(self) -> int:
        return int(self.shells.max()) if len(self) else 0

    @property
    def one_minus_abs(self) -> np.ndarray:
        return self.one_minus_r2 / (1.0 + np.abs(self.points))

    @property
    def origin_distance(self) -> np.ndarray:
        """rho(0, g(0)) = log((1 + |p|)^2 / (1 - |p|^2))."""
        return 2.0 * np.log1p(np.abs(self.points)) - np.log(self.one_minus_r2)

    def subset(self, mask) -> "Orbit":
        idx = np.flatnonzero(mask)
        return Orbit(
            self.points[idx],
            [self.words[i] for i in idx],
            [self.elements[i] for i in idx],
            self.shells[idx],
            self.one_minus_r2[idx],
        )

    @classmethod
    def from_points(cls, points: Sequence[complex]) -> "Orbit":
        """Bare point configuration (no group); handy for diagnostics."""
        pts = np.asarray(points, dtype=complex)
        elements = [DiskAutomorphism.translation(abs(p), math.atan2(p.imag, p.real)) for p in pts]
        return cls(
            pts,
            [Word(()) for _ in pts],
            elements,
            np.zeros(len(pts), dtype=int),
            1.0 - np.abs(pts) ** 2,
        )


def translation_length_from_s(s: float) -> float:
    """Translation length T of z -> (z + s)/(1 + s z) under rho(0,t) = log((1+t)/(1-t))."""
    return 2.0 * math.atanh(s)


def s_from_translation_length(length: float) -> float:
    return math.tanh(length / 2.0)


def schottky_certificate(generators: Sequence[DiskAutomorphism]) -> SchottkyCertificate | None:
    """Certificate if the 2n isometric circles are pairwise disjoint and exterior."""
    letters: list[int] = []
    circles: list[IsometricCircle] = []
    for i, g in enumerate(generators, start=1):
        for letter, h in ((i, g), (-i, g.inverse())):
            try:
                circles.append(isometric_circle(h))
            except ValueError:
                return None
            letters.append(letter)
    gap = math.inf
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            ci, cj = circles[i], circles[j]
            gap = min(gap, abs(ci.center - cj.center) - ci.radius - cj.radius)
    if len(circles) > 1 and not gap > 0:
        return None
    return SchottkyCertificate(tuple(letters), tuple(circles), gap)


def make_schottky(params: Sequence[tuple[float, float]]) -> GroupPresentation:
    """Group generated by hyperbolic translations along diameters.

    Each ``(angle, length)`` gives the translation of hyperbolic length
    ``length`` along the diameter at ``angle``: the rotation-conjugate of
    ``z -> (z + s)/(1 + s z)`` with ``s = tanh(length / 2)``.  The result carries
    a Schottky certificate when the isometric circles are pairwise disjoint.
    """
    if len(params) < 1:
        raise ValueError("need at least one generator")
    gens = []
    for angle, length in params:
        if not length > 0 or not math.isfinite(length):
            raise ValueError(f"translation length must be positive, got {length}")
        gens.append(DiskAutomorphism.translation(s_from_translation_length(length), angle))
    gens = tuple(gens)
    return GroupPresentation(gens, schottky_certificate(gens))


def schottky_from_s(angles: Sequence[float], s: float | Sequence[float]) -> GroupPresentation:
    """Convenience: generators sending 0 to ``s * exp(i angle)``."""
    ss = [s] * len(angles) if np.isscalar(s) else list(s)
    return make_schottky([(a, translation_length_from_s(x)) for a, x in zip(angles, ss)])


def shell_size(rank: int, length: int) -> int:
    """Number of reduced words of a given length in the free group of given rank."""
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def enumerate_orbit(
    group: GroupPresentation,
    max_length: int,
    cap: int = DEFAULT_ORBIT_CAP,
    require_certificate: bool = True,
) -> Orbit:
    """All freely reduced words of length <= max_length, BFS order.

    Word ``w.s`` is the element ``element(w) o s``.
    """
    if require_certificate:
        group.require_certified()
    if max_length < 0:
        raise ValueError("max_length must be nonnegative")
    total = sum(shell_size(group.rank, k) for k in range(max_length + 1))
    if total > cap:
        raise OrbitTooLarge(f"orbit of length {max_length} has {total} points, cap is {cap}")
    letters = group.letter_elements()
    words = [Word(())]
    elements = [DiskAutomorphism.identity()]
    shells = [0]
    frontier = [0]
    for length in range(1, max_length + 1):
        new_frontier = []
        for idx in frontier:
            w = words[idx].letters
            g = elements[idx]
            for letter, s in letters:
                if w and w[-1] == -letter:
                    continue
                words.append(Word(w + (letter,)))
                elements.append(g @ s)
                shells.append(length)
                new_frontier.append(len(words) - 1)
        frontier = new_frontier
    a = np.array([g.a for g in elements], dtype=complex)
    b = np.array([g.b for g in elements], dtype=complex)
    return Orbit(b / np.conj(a), words, elements, np.array(shells), 1.0 / np.abs(a) ** 2)


def _rho(z, omr2_z, w, omr2_w):
    num = np.abs(z - w)
    den = np.abs(1.0 - np.conj(z) * w)
    d = 2.0 * np.log1p(num / den) - np.log(omr2_z * omr2_w / den**2)
    return np.where(num == 0, 0.0, d)


def _suffix_table(orbit: Orbit) -> np.ndarray | None:
    """``table[i, k]`` = index of the word obtained by deleting the first k letters of word i.

    Returns None when the orbit carries no distinct words (bare point sets).
    """
    index = {w.letters: i for i, w in enumerate(orbit.words)}
    if len(index) != len(orbit):
        return None
    depth = orbit.max_length
    table = np.zeros((len(orbit), depth + 1), dtype=np.int64)
    for i, w in enumerate(orbit.words):
        letters = w.letters
        for k in range(depth + 1):
            table[i, k] = index[letters[k:]] if k <= len(letters) else 0
    return table


def _common_prefix(orbit: Orbit, rows: np.ndarray) -> np.ndarray:
    depth = orbit.max_length
    padded = np.zeros((len(orbit), max(depth, 1)), dtype=np.int64)
    for i, w in enumerate(orbit.words):
        padded[i, : len(w)] = w.letters
    same = (padded[rows][:, None, :] == padded[None, :, :]) & (padded[rows][:, None, :] != 0)
    return np.cumprod(same, axis=2).sum(axis=2)


def distances_from(orbit: Orbit, base: int) -> np.ndarray:
    """rho(z_base, z_j) for all j.

    The common prefix h of the two words is cancelled first
    (rho(h x, h y) = rho(x, y)), so deep orbit points that are close to each
    other do not lose accuracy to cancellation in ``1 - conj(z) w``.
    """
    return _distance_rows(orbit, np.array([base]))[0]


def _distance_rows(orbit: Orbit, rows: np.ndarray) -> np.ndarray:
    table = _suffix_table(orbit)
    z, omr2 = orbit.points, orbit.one_minus_r2
    if table is None:
        return _rho(z[rows][:, None], omr2[rows][:, None], z[None, :], omr2[None, :])
    k = _common_prefix(orbit, rows)
    si = table[rows[:, None], k]
    sj = table[np.arange(len(orbit))[None, :], k]
    return _rho(z[si], omr2[si], z[sj], omr2[sj])


def pairwise_distances(orbit: Orbit, chunk: int = 256) -> np.ndarray:
    """Full matrix of hyperbolic distances between orbit points."""
    n = len(orbit)
    out = np.empty((n, n))
    for start in range(0, n, chunk):
        rows = np.arange(start, min(start + chunk, n))
        out[rows] = _distance_rows(orbit, rows)
    np.fill_diagonal(out, 0.0)
    return out


def log_pseudo_from_rho(rho):
    """log p for p = tanh(rho / 2), accurate when p is close to 1."""
    e = np.exp(-np.asarray(rho, dtype=float))
    with np.errstate(divide="ignore"):
        return np.log1p(-e) - np.log1p(e)


def separation_delta(orbit: Orbit) -> float:
    """Minimum pairwise hyperbolic distance of the orbit points."""
    if len(orbit) < 2:
        raise ValueError("separation needs at least two points")
    d = pairwise_distances(orbit)
    np.fill_diagonal(d, np.inf)
    return float(d.min())


@dataclass(frozen=True)
class ShellSums:
    total: float
    per_shell: np.ndarray

    def ratios(self) -> np.ndarray:
        """per_shell[l+1] / per_shell[l]."""
        return self.per_shell[1:] / self.per_shell[:-1]


def _by_shell(orbit: Orbit, values: np.ndarray) -> ShellSums:
    per_shell = np.bincount(orbit.shells, weights=values, minlength=orbit.max_length + 1)
    return ShellSums(float(values.sum()), per_shell)


def boundary_sum(orbit: Orbit) -> ShellSums:
    """Sum of 1 - |g(0)| over the truncated orbit, with per-shell subtotals."""
    return _by_shell(orbit, orbit.one_minus_abs)


def poincare_partial_sum(orbit: Orbit, exponent: float) -> ShellSums:
    """Sum of exp(-exponent * rho(0, g(0))) over the truncated orbit."""
    if exponent == 0:
        return _by_shell(orbit, np.ones(len(orbit)))
    return _by_shell(orbit, np.exp(-exponent * orbit.origin_distance))


@dataclass(frozen=True)
class BlaschkeResult:
    value: float
    log_value: float
    n_factors: int
    coincident: bool


def ball_indices(orbit: Orbit, base: int, radius: float) -> np.ndarray:
    """Indices j != base with rho(z_base, z_j) <= radius."""
    keep = distances_from(orbit, base) <= radius
    keep[base] = False
    return np.flatnonzero(keep)


def blaschke_lower_bound(orbit: Orbit, base: int, radius: float | None = None) -> BlaschkeResult:
    """Product over j != base of p(z_base, z_j) on the truncated orbit.

    With ``radius`` only the points within that hyperbolic distance of the
    base point enter, so that products at different base points are taken
    over isometric configurations.
    """
    if not 0 <= base < len(orbit):
        raise IndexError(f"base index {base} out of range")
    rho = distances_from(orbit, base)
    others = np.arange(len(orbit)) != base
    keep = others if radius is None else others & (rho <= radius)
    if np.any(rho[keep] == 0):
        return BlaschkeResult(0.0, -math.inf, int(keep.sum()), True)
    total = float(log_pseudo_from_rho(rho[keep]).sum())
    return BlaschkeResult(math.exp(total), total, int(keep.sum()), False)


def blaschke_exponent_constant(orbit: Orbit) -> float:
    """Smallest C with prod_{j != 0} |g_j(0)| >= exp(-C * sum (1 - |g_j(0)|)).

    Computed termwise, C = max over j of -log|z_j| / (1 - |z_j|); the orbit
    must contain the identity at index 0.
    """
    r = np.abs(orbit.points[1:])
    oma = orbit.one_minus_abs[1:]
    return float(np.max(-np.log(r) / oma))


def dirac_carleson_norm(
    orbit: Orbit,
    xi_angles: Sequence[float],
    radii: Sequence[float],
    return_argmax: bool = False,
):
    """sup over boxes B(xi, r) of (1/r) * sum_{g(0) in B} (1 - |g(0)|^2).

    Boxes are centred at ``exp(i angle)`` for every angle and radius given.
    """
    if len(orbit) == 0:
        raise ValueError("empty orbit")
    xi = np.exp(1j * np.asarray(xi_angles, dtype=float))
    radii = np.asarray(radii, dtype=float)
    weights = orbit.one_minus_r2
    best = 0.0
    arg = (None, None)
    for r in radii:
        inside = np.abs(orbit.points[None, :] - xi[:, None]) < r
        totals = inside.astype(float) @ weights / r
        k = int(np.argmax(totals))
        if totals[k] > best:
            best = float(totals[k])
            arg = (float(np.angle(xi[k]) % (2 * np.pi)), float(r))
    return (best, arg) if return_argmax else best


def dyadic_radii(first: int = 1, last: int = 9) -> np.ndarray:
    return 2.0 ** -np.arange(first, last + 1, dtype=float)
