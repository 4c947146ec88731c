import math
import textwrap

import numpy as np
import pytest

from fuchsian_carleson import cli
from fuchsian_carleson.beltrami import BeltramiSpec
from fuchsian_carleson.carleson import CarlesonReport, ReportRow, hypothesis_check
from fuchsian_carleson.config import OUTPUT_ENV, ConfigError, load_config, parse_config
from fuchsian_carleson.group import enumerate_orbit
from fuchsian_carleson.reports import (
    fmt,
    read_constraints_csv,
    read_edges_csv,
    read_orbit_csv,
    read_plot_csv,
    read_report_csv,
    read_shell_csv,
    read_summary,
    write_domain_csv,
    write_orbit_csv,
    write_plot_csv,
    write_report_csv,
    write_shell_csv,
    write_summary,
)

BASE = """
[group]
angles = 0, 1.5707963267948966
s = 0.95

[mu]
family = {family}
k = {k}

[domain]
depth = 3

[estimator]
dyadic_first = 1
dyadic_last = 3
xi_per_edge = 3
xi_count = 16

[output]
directory = out
"""


def write_config(tmp_path, family="flat", k=0.5, extra=""):
    path = tmp_path / "exp.ini"
    path.write_text(BASE.format(family=family, k=k) + extra)
    return path


def test_fmt_round_trip():
    x = 0.1 + 0.2
    assert float(fmt(x)) == x
    assert fmt(True) == "true" and fmt(np.int64(3)) == "3"


def test_report_csv_round_trip(tmp_path, field_factory):
    rep = hypothesis_check(field_factory(BeltramiSpec.edge_decay(0.5, 1.0)), radii=[0.5, 0.25], xi_per_edge=3)
    path = write_report_csv(rep, tmp_path / "r.csv")
    assert path.read_text().splitlines()[0] == "xi_angle,r,integral,err_est,ratio"
    back = read_report_csv(path)
    assert [(b.integral, b.err_est, b.ratio) for b in back] == [(r.integral, r.err_est, r.ratio) for r in rep.rows]
    plot = read_plot_csv(write_plot_csv(rep, tmp_path / "p.csv"))
    assert sorted(p.ratio for p in plot) == sorted(r.ratio for r in rep.rows)
    assert {p.log2_inv_r for p in plot} == {1.0, 2.0}


def test_summary_round_trip(tmp_path):
    values = {"sup_ratio": 1 / 3, "stabilized": False, "n_boxes": 12, "kind": "global", "change": math.inf}
    assert read_summary(write_summary(values, tmp_path / "s.txt")) == values
    with pytest.raises(ValueError):
        write_summary({"a=b": 1}, tmp_path / "bad.txt")


def test_orbit_and_shell_round_trip(tmp_path, schottky):
    orbit = enumerate_orbit(schottky, 3)
    rows = read_orbit_csv(write_orbit_csv(orbit, tmp_path / "o.csv"))
    assert len(rows) == 53
    assert [r.point for r in rows] == list(orbit.points)
    assert rows[0].word == "e"
    shells = read_shell_csv(write_shell_csv(orbit, tmp_path / "s.csv"))
    assert [s.count for s in shells] == [1, 4, 12, 36]
    assert math.isnan(shells[0].ratio)


def test_domain_round_trip(tmp_path, schottky_domain):
    c, e = write_domain_csv(schottky_domain, tmp_path / "c.csv", tmp_path / "e.csv")
    cons = read_constraints_csv(c)
    assert [x.radius for x in cons] == [k.circle.radius for k in schottky_domain.constraints]
    edges = read_edges_csv(e)
    assert [x.start for x in edges] == [a.start for a in schottky_domain.free_edges]


def test_header_mismatch(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_report_csv(path)


def test_config_defaults():
    cfg = parse_config("")
    assert cfg.group.s_values() == (0.95, 0.95)
    assert cfg.mu.spec() == BeltramiSpec.edge_decay(0.5, 1.0)
    assert cfg.estimator.radii[0] == 0.5 and cfg.estimator.radii[-1] == 2.0**-9


@pytest.mark.parametrize(
    "text",
    [
        "[group]\ns = 1.2\n",
        "[group]\ntype = fuchsian\n",
        "[mu]\nfamily = wavy\n",
        "[mu]\nfamily = compact_core\nk = 0.5\n",
        "[mu]\nk = 1.0\n",
        "[domain]\ndepth = 0\n",
        "[estimator]\nradii = 0.5\ndyadic_first = 2\n",
        "[estimator]\ntol = 2\n",
        "[estimator]\nxi_count = three\n",
        "[output]\nformats = csv, png\n",
        "[plots]\nx = 1\n",
        "[group]\ncolour = red\n",
        "not an ini file",
    ],
)
def test_config_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_config_paths_and_env(tmp_path, monkeypatch):
    path = write_config(tmp_path)
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    assert load_config(path).output.directory == tmp_path / "out"
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "elsewhere"))
    assert load_config(path).output.directory == tmp_path / "elsewhere"
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")


def test_cli_orbit_and_domain(tmp_path, monkeypatch):
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    path = write_config(tmp_path)
    assert cli.main(["orbit", "--config", str(path)]) == 0
    assert len(read_orbit_csv(tmp_path / "out" / "orbit.csv")) == 53
    assert read_summary(tmp_path / "out" / "orbit_summary.txt")["n_points"] == 53
    assert cli.main(["domain", "--config", str(path)]) == 0
    summary = read_summary(tmp_path / "out" / "domain_summary.txt")
    assert summary["n_free_edges"] == 4 and summary["stabilized"] is True


def test_cli_zero_field_passes(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    path = write_config(tmp_path, family="flat", k=0.0)
    assert cli.main(["verify-theorem", "--config", str(path)]) == 0
    assert "verdict=PASS" in capsys.readouterr().out
    summary = read_summary(tmp_path / "out" / "theorem_summary.txt")
    assert summary["sup_ratio"] == 0 and summary["exit_code"] == 0


def test_cli_flat_fails(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "env_out"))
    path = write_config(tmp_path, family="flat", k=0.5)
    assert cli.main(["check-hypothesis", "--config", str(path)]) == 1
    assert cli.main(["verify-theorem", "--config", str(path)]) == 1
    summary = read_summary(tmp_path / "env_out" / "theorem_summary.txt")
    assert summary["verdict"] == "FAIL"
    assert read_report_csv(tmp_path / "env_out" / "hypothesis.csv")


def test_cli_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[group]\ns = 0.3\n")  # overlapping circles, not certified
    assert cli.main(["orbit", "--config", str(bad)]) == 3
    assert "config error" in capsys.readouterr().err
    assert cli.main(["domain", "--config", str(tmp_path / "nope.ini")]) == 3


def test_cli_runs_reproducible(tmp_path, monkeypatch):
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    path = write_config(tmp_path, family="edge_decay", k=0.5, extra="")
    cli.main(["check-hypothesis", "--config", str(path)])
    first = (tmp_path / "out" / "hypothesis.csv").read_bytes()
    cli.main(["check-hypothesis", "--config", str(path)])
    assert (tmp_path / "out" / "hypothesis.csv").read_bytes() == first


def test_cli_requires_config():
    with pytest.raises(SystemExit):
        cli.main(["orbit"])
