"""Experiment configuration: INI-style sections read with configparser.

Example::

    [group]
    type = schottky
    angles = 0, 1.5707963267948966
    s = 0.95

    [mu]
    family = edge_decay
    k = 0.5
    alpha = 1.0

    [domain]
    depth = 3

    [estimator]
    dyadic_first = 1
    dyadic_last = 9

    [output]
    directory = results

Every value is validated before any computation starts.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .beltrami import FAMILIES, BeltramiSpec

OUTPUT_ENV = "FUCHSIAN_CARLESON_OUTPUT"
FORMATS = ("csv", "plot")


class ConfigError(ValueError):
    """Invalid or unparseable experiment configuration."""


@dataclass(frozen=True)
class GroupConfig:
    type: str = "schottky"
    angles: tuple[float, ...] = (0.0, math.pi / 2)
    s: tuple[float, ...] = (0.95,)

    def s_values(self) -> tuple[float, ...]:
        return self.s * len(self.angles) if len(self.s) == 1 else self.s


@dataclass(frozen=True)
class MuConfig:
    family: str = "edge_decay"
    k: float = 0.5
    alpha: float | None = 1.0
    t: float | None = None
    ball_factor: float = 1.2

    def spec(self) -> BeltramiSpec:
        if self.family == "compact_core":
            return BeltramiSpec.compact_core(self.k, self.t)
        if self.family == "edge_decay":
            return BeltramiSpec.edge_decay(self.k, self.alpha)
        return BeltramiSpec.flat(self.k)


@dataclass(frozen=True)
class DomainConfig:
    depth: int = 3
    stabilization_tol: float = 1e-9


@dataclass(frozen=True)
class EstimatorConfig:
    radii: tuple[float, ...] = tuple(2.0 ** -np.arange(1, 10))
    xi_per_edge: int = 9
    xi_count: int = 64
    limit_depth: int = 2
    zoom_rounds: int = 2
    tol: float = 1e-2
    max_evals: int = 4_000_000
    mc_samples: int = 10**6
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class OutputConfig:
    directory: Path = Path("results")
    formats: tuple[str, ...] = FORMATS


@dataclass(frozen=True)
class ExperimentConfig:
    group: GroupConfig = field(default_factory=GroupConfig)
    mu: MuConfig = field(default_factory=MuConfig)
    domain: DomainConfig = field(default_factory=DomainConfig)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


KNOWN = {
    "group": {"type", "angles", "s"},
    "mu": {"family", "k", "alpha", "t", "ball_factor"},
    "domain": {"depth", "stabilization_tol"},
    "estimator": {
        "radii", "dyadic_first", "dyadic_last", "xi_per_edge", "xi_count", "limit_depth",
        "zoom_rounds", "tol", "max_evals", "mc_samples", "seed", "workers",
    },
    "output": {"directory", "formats"},
}


def _floats(text: str, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"{what}: expected numbers, got {text!r}") from exc
    if not vals:
        raise ConfigError(f"{what}: empty list")
    return vals


def _get(sec, key, conv, default, what):
    if key not in sec:
        return default
    raw = sec[key].strip()
    try:
        return conv(raw)
    except ValueError as exc:
        raise ConfigError(f"{what}.{key}: cannot parse {raw!r}") from exc


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def parse_config(text: str, base_dir: Path | None = None) -> ExperimentConfig:
    """Parse and validate configuration text."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable config: {exc}") from exc
    for name in cp.sections():
        _check(name in KNOWN, f"unknown section [{name}]")
        extra = set(cp[name]) - KNOWN[name]
        _check(not extra, f"unknown keys in [{name}]: {', '.join(sorted(extra))}")
    empty: dict = {}
    g = cp["group"] if cp.has_section("group") else empty
    m = cp["mu"] if cp.has_section("mu") else empty
    d = cp["domain"] if cp.has_section("domain") else empty
    e = cp["estimator"] if cp.has_section("estimator") else empty
    o = cp["output"] if cp.has_section("output") else empty

    gd = GroupConfig()
    group = GroupConfig(
        type=_get(g, "type", str, gd.type, "group"),
        angles=_floats(g["angles"], "group.angles") if "angles" in g else gd.angles,
        s=_floats(g["s"], "group.s") if "s" in g else gd.s,
    )
    _check(group.type == "schottky", f"group.type must be 'schottky', got {group.type!r}")
    _check(len(group.s) in (1, len(group.angles)), "group.s must be one value or one per angle")
    _check(all(0 < s < 1 for s in group.s), "group.s values must lie in (0, 1)")

    md = MuConfig()
    family = _get(m, "family", str, md.family, "mu")
    _check(family in FAMILIES, f"mu.family must be one of {FAMILIES}, got {family!r}")
    mu = MuConfig(
        family=family,
        k=_get(m, "k", float, md.k, "mu"),
        alpha=_get(m, "alpha", float, md.alpha if family == "edge_decay" else None, "mu"),
        t=_get(m, "t", float, None, "mu"),
        ball_factor=_get(m, "ball_factor", float, md.ball_factor, "mu"),
    )
    try:
        mu.spec()
    except ValueError as exc:
        raise ConfigError(f"mu: {exc}") from exc
    _check(mu.ball_factor > 1, "mu.ball_factor must exceed 1")

    dd = DomainConfig()
    domain = DomainConfig(
        depth=_get(d, "depth", int, dd.depth, "domain"),
        stabilization_tol=_get(d, "stabilization_tol", float, dd.stabilization_tol, "domain"),
    )
    _check(1 <= domain.depth <= 8, "domain.depth must lie in 1..8")
    _check(domain.stabilization_tol > 0, "domain.stabilization_tol must be positive")

    ed = EstimatorConfig()
    if "radii" in e:
        _check("dyadic_first" not in e and "dyadic_last" not in e, "give either radii or dyadic_first/last")
        radii = _floats(e["radii"], "estimator.radii")
    else:
        first = _get(e, "dyadic_first", int, 1, "estimator")
        last = _get(e, "dyadic_last", int, 9, "estimator")
        _check(-1 <= first <= last <= 30, "need -1 <= dyadic_first <= dyadic_last <= 30")
        radii = tuple(2.0 ** -np.arange(first, last + 1))
    _check(all(0 < r <= 2 for r in radii), "estimator radii must lie in (0, 2]")
    est = EstimatorConfig(
        radii=tuple(sorted(set(radii), reverse=True)),
        xi_per_edge=_get(e, "xi_per_edge", int, ed.xi_per_edge, "estimator"),
        xi_count=_get(e, "xi_count", int, ed.xi_count, "estimator"),
        limit_depth=_get(e, "limit_depth", int, ed.limit_depth, "estimator"),
        zoom_rounds=_get(e, "zoom_rounds", int, ed.zoom_rounds, "estimator"),
        tol=_get(e, "tol", float, ed.tol, "estimator"),
        max_evals=_get(e, "max_evals", int, ed.max_evals, "estimator"),
        mc_samples=_get(e, "mc_samples", int, ed.mc_samples, "estimator"),
        seed=_get(e, "seed", int, ed.seed, "estimator"),
        workers=_get(e, "workers", int, ed.workers, "estimator"),
    )
    _check(est.xi_per_edge >= 1, "estimator.xi_per_edge must be >= 1")
    _check(est.xi_count >= 4, "estimator.xi_count must be >= 4")
    _check(0 <= est.limit_depth <= 6, "estimator.limit_depth must lie in 0..6")
    _check(0 <= est.zoom_rounds <= 8, "estimator.zoom_rounds must lie in 0..8")
    _check(0 < est.tol < 1, "estimator.tol must lie in (0, 1)")
    _check(est.max_evals >= 10_000, "estimator.max_evals must be >= 10000")
    _check(est.mc_samples >= 1000, "estimator.mc_samples must be >= 1000")
    _check(est.seed >= 0, "estimator.seed must be nonnegative")
    _check(est.workers >= 1, "estimator.workers must be >= 1")

    directory = Path(_get(o, "directory", str, "results", "output"))
    if base_dir is not None and not directory.is_absolute():
        directory = base_dir / directory
    formats = tuple(x.strip() for x in o["formats"].split(",") if x.strip()) if "formats" in o else FORMATS
    _check(all(f in FORMATS for f in formats), f"output.formats must be a subset of {FORMATS}")
    return ExperimentConfig(group, mu, domain, est, OutputConfig(directory, formats))


def load_config(path) -> ExperimentConfig:
    """Read a config file; relative output directories resolve against its folder.

    The environment variable ``FUCHSIAN_CARLESON_OUTPUT`` overrides the
    output directory.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = parse_config(text, base_dir=path.parent)
    override = os.environ.get(OUTPUT_ENV)
    if override:
        cfg = ExperimentConfig(cfg.group, cfg.mu, cfg.domain, cfg.estimator, OutputConfig(Path(override), cfg.output.formats))
    return cfg
