"""Command-line harness: ``fuchsian-carleson <command> --config FILE``.

Exit codes: 0 PASS, 1 FAIL, 2 INCONCLUSIVE, 3 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .beltrami import BeltramiField
from .carleson import (
    CarlesonReport,
    global_norm,
    hypothesis_check,
    hypothesis_violated,
    verify_theorem,
)
from .config import ConfigError, ExperimentConfig, load_config
from .domain import FundamentalDomain, build_domain
from .group import (
    GroupPresentation,
    UncertifiedGroup,
    boundary_sum,
    enumerate_orbit,
    schottky_from_s,
    separation_delta,
)
from .reports import (
    write_domain_csv,
    write_orbit_csv,
    write_plot_csv,
    write_report_csv,
    write_shell_csv,
    write_summary,
)

log = logging.getLogger("fuchsian_carleson")

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_CONFIG = 0, 1, 2, 3


@dataclass
class Setup:
    cfg: ExperimentConfig
    group: GroupPresentation
    domain: FundamentalDomain | None = None
    field: BeltramiField | None = None


def _setup(cfg: ExperimentConfig, need_domain: bool = True, need_field: bool = True) -> Setup:
    try:
        group = schottky_from_s(cfg.group.angles, cfg.group.s_values())
        group.require_certified()
    except (ValueError, UncertifiedGroup) as exc:
        raise ConfigError(f"group: {exc}") from exc
    out = Setup(cfg, group)
    if need_domain:
        out.domain = build_domain(group, cfg.domain.depth, tol=cfg.domain.stabilization_tol)
    if need_field:
        out.field = BeltramiField(cfg.mu.spec(), group, out.domain)
    return out


def _write_report(cfg: ExperimentConfig, report: CarlesonReport, stem: str, extra: dict | None = None) -> None:
    out = cfg.output.directory
    if "csv" in cfg.output.formats:
        write_report_csv(report, out / f"{stem}.csv")
    if "plot" in cfg.output.formats:
        write_plot_csv(report, out / f"{stem}_plot.csv")
    summary = report.summary()
    summary.update(extra or {})
    write_summary(summary, out / f"{stem}_summary.txt")


def cmd_orbit(cfg: ExperimentConfig) -> int:
    s = _setup(cfg, need_domain=False, need_field=False)
    orbit = enumerate_orbit(s.group, cfg.domain.depth)
    out = cfg.output.directory
    write_orbit_csv(orbit, out / "orbit.csv")
    write_shell_csv(orbit, out / "shell_sums.csv")
    write_summary(
        {
            "n_points": len(orbit),
            "max_length": orbit.max_length,
            "boundary_sum": boundary_sum(orbit).total,
            "separation_delta": separation_delta(orbit),
        },
        out / "orbit_summary.txt",
    )
    return EXIT_PASS


def cmd_domain(cfg: ExperimentConfig) -> int:
    s = _setup(cfg, need_field=False)
    out = cfg.output.directory
    write_domain_csv(s.domain, out / "constraints.csv", out / "free_edges.csv")
    write_summary(
        {
            "n_constraints": len(s.domain.constraints),
            "n_free_edges": len(s.domain.free_edges),
            "free_measure": s.domain.free_measure,
            "stabilized": s.domain.stabilized,
        },
        out / "domain_summary.txt",
    )
    return EXIT_PASS if s.domain.stabilized else EXIT_INCONCLUSIVE


def _hypothesis(s: Setup) -> CarlesonReport:
    e = s.cfg.estimator
    return hypothesis_check(s.field, s.domain, e.radii, e.xi_per_edge, e.tol, e.max_evals, e.workers)


def _hypothesis_code(report: CarlesonReport) -> int:
    if hypothesis_violated(report):
        return EXIT_FAIL
    if report.n_unconverged or not report.stabilized:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def cmd_check_hypothesis(cfg: ExperimentConfig) -> int:
    s = _setup(cfg)
    report = _hypothesis(s)
    code = _hypothesis_code(report)
    _write_report(cfg, report, "hypothesis", {"violated": hypothesis_violated(report), "exit_code": code})
    return code


def cmd_check_global(cfg: ExperimentConfig) -> int:
    s = _setup(cfg)
    e = cfg.estimator
    report = global_norm(s.field, e.radii, e.xi_count, e.limit_depth, e.tol, e.max_evals, e.workers, e.zoom_rounds)
    if report.n_divergent:
        code = EXIT_FAIL
    elif report.stabilized and not report.n_unconverged:
        code = EXIT_PASS
    else:
        code = EXIT_INCONCLUSIVE
    _write_report(cfg, report, "global", {"exit_code": code})
    return code


def cmd_verify_theorem(cfg: ExperimentConfig) -> int:
    s = _setup(cfg)
    e = cfg.estimator
    result = verify_theorem(
        s.field, e.radii, e.xi_per_edge, e.xi_count, e.limit_depth, e.tol, e.max_evals, e.workers, e.zoom_rounds
    )
    _write_report(cfg, result.hypothesis, "hypothesis")
    summary: dict[str, object] = {
        "verdict": result.verdict,
        "exit_code": result.exit_code,
        "hypothesis_sup_ratio": result.hypothesis.sup_ratio,
        "hypothesis_stabilized": result.hypothesis.stabilized,
        "hypothesis_violated": hypothesis_violated(result.hypothesis),
    }
    if result.global_report is not None:
        _write_report(cfg, result.global_report, "global")
        summary["sup_ratio"] = result.global_report.sup_ratio
        summary["stabilized"] = result.global_report.stabilized
    else:
        summary["sup_ratio"] = result.hypothesis.sup_ratio
        summary["stabilized"] = result.hypothesis.stabilized
    summary["reasons"] = "; ".join(result.reasons) or "none"
    write_summary(summary, cfg.output.directory / "theorem_summary.txt")
    print(f"verdict={result.verdict}")
    return result.exit_code


COMMANDS = {
    "orbit": cmd_orbit,
    "domain": cmd_domain,
    "check-hypothesis": cmd_check_hypothesis,
    "check-global": cmd_check_global,
    "verify-theorem": cmd_verify_theorem,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuchsian-carleson",
        description="Carleson-measure experiments for Beltrami coefficients of Fuchsian groups.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path, help="experiment config file")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
