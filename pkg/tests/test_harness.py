import csv
import io
import json
from dataclasses import replace

import pytest

from ratiolab.cli import main
from ratiolab.errors import ConfigError
from ratiolab.harness import (EXPERIMENTS, default_config, format_config, load_config,
                              parse_config, report_csv, report_json, run_experiment)
from ratiolab.shifts import FamilySpec, ShiftSet

IDENTITY = """
experiment = zeta-ratio
sweep_bound = 200
alpha = 0.1
beta = 0.2
gamma = 0.1
delta = 0.2
"""


@pytest.mark.parametrize("experiment", EXPERIMENTS)
def test_config_text_roundtrip(experiment):
    cfg = default_config(experiment)
    assert parse_config(format_config(cfg)) == cfg


def test_config_file_and_complex_shifts(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(IDENTITY + "alpha = 0.1+0.05j\nbeta = 0.1-0.05j\n", encoding="utf-8")
    cfg = load_config(path)
    assert cfg.shifts.alpha == (0.1 + 0.05j,)
    assert parse_config(format_config(cfg)) == cfg


@pytest.mark.parametrize("text", [
    "experiment = zeta-ratio\nbogus = 1\n",
    "experiment = zeta-ratio\ngamma = 0\n",
    "experiment = zeta-ratio\ndelta = -0.1\n",
    "experiment = nope\n",
    "experiment = quad-family\nfamily = ZetaT\n",
    "experiment = zeta-ratio\nalpha = 0.1 +\n",
    "just a line\n",
])
def test_config_rejections(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_identity_ratio_gap():
    (rep,) = run_experiment(parse_config(IDENTITY))
    assert rep.relative_gap < 1e-8
    assert rep.lhs == pytest.approx(199.0)
    assert rep.passed


def test_scales_give_one_report_each():
    cfg = replace(parse_config(IDENTITY), scales=(1.0, 0.5))
    reps = run_experiment(cfg)
    assert [r.scale for r in reps] == [1.0, 0.5]


def test_json_report_digits_and_echo():
    reps = run_experiment(parse_config(IDENTITY))
    text = report_json(reps)
    obj = json.loads(text)
    assert set(obj) >= {"lhs", "rhs", "relative_gap", "error_budget", "runtime_s", "config"}
    assert obj["config"]["experiment"] == "zeta-ratio"
    assert obj["config"]["prime_cutoff"] == 10000
    # 17 significant digits reproduce the doubles exactly
    assert complex(*obj["lhs"]) == reps[0].lhs
    assert obj["rhs"][0] == reps[0].rhs.value.real


def test_csv_report_rows():
    cfg = replace(parse_config(IDENTITY), scales=(1.0, 0.5))
    reps = run_experiment(cfg)
    rows = list(csv.DictReader(io.StringIO(report_csv(reps))))
    assert len(rows) == 2
    assert float(rows[0]["lhs_re"]) == reps[0].lhs.real
    assert json.loads(rows[1]["config"])["scales"] == [1.0, 0.5]


def test_euler_factor_experiment_per_family():
    for fam, shifts in (("ZetaT", ShiftSet([0.1], [0.12], [0.15], [0.2])),
                        ("QuadraticPositive", ShiftSet([0.1], (), [0.15])),
                        ("EllipticEvenTwists", ShiftSet([0.1], (), [0.1]))):
        cfg = replace(default_config("euler-factor"), family=FamilySpec(fam, 1.0), shifts=shifts)
        (rep,) = run_experiment(cfg)
        assert rep.relative_gap < 1e-10


def test_cli_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.cfg"
    good.write_text(IDENTITY, encoding="utf-8")
    out = tmp_path / "rep.json"
    assert main(["zeta-ratio", "--config", str(good), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["relative_gap"] < 1e-8

    assert main(["rmt-check", "--samples", "2000", "--seed", "3", "--tolerance", "1e-12",
                 "--format", "csv"]) == 1
    assert capsys.readouterr().out.startswith("lhs_re,")

    bad = tmp_path / "bad.cfg"
    bad.write_text("experiment = zeta-ratio\nunknown_key = 3\n", encoding="utf-8")
    assert main(["zeta-ratio", "--config", str(bad)]) == 2
    assert main(["quad-family", "--config", str(good)]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_prime_cutoff_flag(capsys):
    assert main(["euler-factor", "--prime-cutoff", "2000"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["config"]["prime_cutoff"] == 2000
