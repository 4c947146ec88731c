"""Plain-text output formats and their parsers.

Floats are written with 17 significant digits so every file round-trips
exactly.  Summaries are ``key=value`` lines.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .carleson import CarlesonReport
from .domain import FundamentalDomain
from .group import Orbit, boundary_sum

REPORT_HEADER = ("xi_angle", "r", "integral", "err_est", "ratio")
PLOT_HEADER = ("xi_angle", "log2_inv_r", "ratio")
ORBIT_HEADER = ("index", "word", "shell", "re", "im", "one_minus_r2")
SHELL_HEADER = ("shell", "count", "boundary_sum", "ratio")
CONSTRAINT_HEADER = ("word", "center_re", "center_im", "radius", "shadow_start", "shadow_length")
EDGE_HEADER = ("start", "length", "end")


def fmt(x) -> str:
    """17 significant digits; bools and ints as-is."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _write_rows(path: Path, header: Iterable[str], rows: Iterable[Iterable]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])
    return path


def _read_rows(path: Path, header: tuple[str, ...]) -> list[list[str]]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        got = tuple(next(reader))
        if got != header:
            raise ValueError(f"{path}: expected header {header}, found {got}")
        return [row for row in reader if row]


class ReportRecord(NamedTuple):
    xi_angle: float
    r: float
    integral: float
    err_est: float
    ratio: float


def write_report_csv(report: CarlesonReport, path) -> Path:
    rows = ((row.xi_angle, row.r, row.integral, row.err_est, row.ratio) for row in report.rows)
    return _write_rows(path, REPORT_HEADER, rows)


def read_report_csv(path) -> list[ReportRecord]:
    return [ReportRecord(*map(float, row)) for row in _read_rows(path, REPORT_HEADER)]


class PlotRecord(NamedTuple):
    xi_angle: float
    log2_inv_r: float
    ratio: float


def write_plot_csv(report: CarlesonReport, path) -> Path:
    """Ratio against log2(1/r), one line per box, ordered by angle then scale."""
    rows = sorted(report.rows, key=lambda row: (row.xi_angle, -row.r))
    return _write_rows(path, PLOT_HEADER, ((row.xi_angle, -math.log2(row.r), row.ratio) for row in rows))


def read_plot_csv(path) -> list[PlotRecord]:
    return [PlotRecord(*map(float, row)) for row in _read_rows(path, PLOT_HEADER)]


def write_summary(values: Mapping[str, object], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for key, value in values.items():
            if "=" in key or "\n" in key:
                raise ValueError(f"bad summary key {key!r}")
            text = fmt(value)
            if "\n" in text:
                raise ValueError(f"summary value for {key!r} spans lines")
            fh.write(f"{key}={text}\n")
    return path


def parse_value(text: str):
    """Inverse of :func:`fmt` for summary values."""
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_summary(path) -> dict[str, object]:
    out = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}: malformed summary line {line!r}")
        out[key] = parse_value(value)
    return out


class OrbitRecord(NamedTuple):
    index: int
    word: str
    shell: int
    point: complex
    one_minus_r2: float


def write_orbit_csv(orbit: Orbit, path) -> Path:
    rows = (
        (i, str(w), int(s), p.real, p.imag, om)
        for i, (w, s, p, om) in enumerate(zip(orbit.words, orbit.shells, orbit.points, orbit.one_minus_r2))
    )
    return _write_rows(path, ORBIT_HEADER, rows)


def read_orbit_csv(path) -> list[OrbitRecord]:
    return [
        OrbitRecord(int(i), w, int(s), complex(float(re), float(im)), float(om))
        for i, w, s, re, im, om in _read_rows(path, ORBIT_HEADER)
    ]


class ShellRecord(NamedTuple):
    shell: int
    count: int
    boundary_sum: float
    ratio: float


def write_shell_csv(orbit: Orbit, path) -> Path:
    sums = boundary_sum(orbit).per_shell
    counts = np.bincount(orbit.shells, minlength=len(sums))
    ratios = np.concatenate([[math.nan], sums[1:] / np.where(sums[:-1] > 0, sums[:-1], math.nan)])
    return _write_rows(path, SHELL_HEADER, zip(range(len(sums)), counts, sums, ratios))


def read_shell_csv(path) -> list[ShellRecord]:
    return [ShellRecord(int(a), int(b), float(c), float(d)) for a, b, c, d in _read_rows(path, SHELL_HEADER)]


class ConstraintRecord(NamedTuple):
    word: str
    center: complex
    radius: float
    shadow_start: float
    shadow_length: float


def write_domain_csv(domain: FundamentalDomain, constraints_path, edges_path) -> tuple[Path, Path]:
    rows = (
        ("" if c.word is None else str(c.word), c.circle.center.real, c.circle.center.imag, c.circle.radius, c.shadow.start, c.shadow.length)
        for c in domain.constraints
    )
    p1 = _write_rows(constraints_path, CONSTRAINT_HEADER, rows)
    p2 = _write_rows(edges_path, EDGE_HEADER, ((a.start, a.length, a.end) for a in domain.free_edges))
    return p1, p2


def read_constraints_csv(path) -> list[ConstraintRecord]:
    return [
        ConstraintRecord(w, complex(float(x), float(y)), float(r), float(s), float(ln))
        for w, x, y, r, s, ln in _read_rows(path, CONSTRAINT_HEADER)
    ]


class EdgeRecord(NamedTuple):
    start: float
    length: float
    end: float


def read_edges_csv(path) -> list[EdgeRecord]:
    return [EdgeRecord(*map(float, row)) for row in _read_rows(path, EDGE_HEADER)]
