import csv
import io
import math

import pytest

from cnt_receiver import cli
from cnt_receiver.scenario import (
    ConfigError,
    ScenarioConfig,
    dump_config,
    parse_config,
    run_ber,
    run_single,
    run_sweep,
    wilson_interval,
)


def _rows(text: str) -> tuple[str, list[str], list[list[str]]]:
    lines = text.splitlines()
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    return lines[0], rows[0], rows[1:]


def test_parse_round_trip():
    cfg = parse_config("[model]\nviscosity = 0.2\n[design]\nvariant = no_reference\n[run]\nmargins = 1, 2\n")
    assert cfg.params.viscosity == 0.2
    assert cfg.variant == "no_reference"
    assert cfg.margins == (1.0, 2.0)
    assert parse_config(dump_config(cfg)) == cfg


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("[model]\nmass = 1\nmas = 2\n")
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config("[extra]\na = 1\n")


def test_invalid_values_name_the_field():
    with pytest.raises(ConfigError, match="run.period_count"):
        parse_config("[run]\nperiod_count = 0\n")
    with pytest.raises(ConfigError, match="model: mass"):
        parse_config("[model]\nmass = -1\n")
    with pytest.raises(ConfigError):
        ScenarioConfig(sweep_axis="bogus")


def test_single_is_deterministic():
    cfg = ScenarioConfig(period_count=20, sigma=5.0, seed=11)
    a = run_single(cfg).to_csv("x")
    assert a == run_single(cfg).to_csv("x")
    values = dict(_rows(a)[2])
    assert float(values["detected_plus"]) in (1.0, -1.0)
    assert float(values["j_closed_form"]) == pytest.approx(200.0)


def test_delta_theta_sweep_peaks_at_pi():
    t = run_sweep(ScenarioConfig(sweep_axis="delta_theta", sweep_points=64))
    assert len(t.rows) == 64
    best = max(t.rows, key=lambda r: r[1])
    assert best[0] == pytest.approx(math.pi)
    for _, jss, jcf in t.rows:
        assert jss == pytest.approx(jcf, rel=1e-8, abs=1e-9)


def test_eta_sweep_includes_degenerate_point():
    t = run_sweep(ScenarioConfig(sweep_axis="eta", sweep_values=(-1.0, -0.5, 0.0, 1.0)))
    by_eta = {r[0]: r[1] for r in t.rows}
    assert by_eta[-0.5] < 1e-10
    assert by_eta[1.0] == pytest.approx(3 * by_eta[0.0])


def test_s_sweep_gap_shrinks():
    t = run_sweep(ScenarioConfig(sweep_axis="s", sweep_values=(10.0, 50.0)))
    assert t.rows[0][-1] > t.rows[1][-1]


def test_ber_limits():
    quiet = run_ber(ScenarioConfig(period_count=10, sigmas=(0.0,), trials=500))
    assert quiet.rows[0][4] == 0
    loud = run_ber(ScenarioConfig(period_count=10, sigmas=(1e6,), trials=4000))
    lo, hi = loud.rows[0][6], loud.rows[0][7]
    assert lo < 0.5 < hi


def test_wilson_interval_contains_estimate():
    lo, hi = wilson_interval(30, 1000)
    assert lo < 0.03 < hi
    assert wilson_interval(0, 100)[0] == 0.0


def test_cli_single_writes_csv_and_manifest(tmp_path):
    out = tmp_path / "single.csv"
    traj = tmp_path / "traj.csv"
    assert cli.main(["single", "--seed", "4", "--out", str(out), "--trajectory", str(traj)]) == 0
    comment, header, rows = _rows(out.read_text())
    assert comment.startswith("# command=single seed=4")
    assert header == ["quantity", "value"]
    assert (tmp_path / "single.csv.manifest.txt").read_text().count("seed = 4") == 1
    _, theader, trows = _rows(traj.read_text())
    assert theader == ["t", "x", "v"]
    assert len(trows) == 200 * 1000 + 1


def test_cli_sweep_axis_override(tmp_path, capsys):
    cfg = tmp_path / "s.ini"
    cfg.write_text("[run]\nsweep_points = 32\n")
    assert cli.main(["sweep", "--config", str(cfg), "--axis", "theta_minus"]) == 0
    _, header, rows = _rows(capsys.readouterr().out)
    assert header[0] == "theta_minus" and len(rows) == 32


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[run]\nperiod_count = 0\n")
    assert cli.main(["single", "--config", str(bad)]) == cli.EXIT_CONFIG
    assert cli.main(["single", "--config", str(tmp_path / "missing.ini")]) == cli.EXIT_IO
    ok = tmp_path / "ok.ini"
    ok.write_text("[run]\nperiod_count = 5\n")
    assert cli.main(["single", "--config", str(ok), "--out", str(tmp_path / "no" / "dir.csv")]) == cli.EXIT_IO


def test_readme_config_parses():
    import re
    from pathlib import Path

    text = (Path(__file__).parents[1] / "README.md").read_text()
    cfg = parse_config(re.search(r"```ini\n(.*?)```", text, re.S).group(1))
    assert cfg.variant == "no_carrier" and cfg.noise_mode == "gaussian"
    assert cfg.margins == (0.5, 1.0, 2.0, 3.0)
