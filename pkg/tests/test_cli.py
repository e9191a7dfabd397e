import csv
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentseries import cli
from laurentseries.config import ExperimentConfig
from laurentseries.errors import ConfigurationError
from laurentseries.experiments import DEFAULTS, EXPERIMENTS, default_config, run_experiment


@settings(max_examples=50)
@given(st.integers(0, 4096), st.lists(st.integers(0, 8), min_size=1, max_size=4),
       st.lists(st.floats(1e-12, 0.5), min_size=1, max_size=3), st.integers(0, 2**64 - 1),
       st.one_of(st.none(), st.integers(1, 4096)))
def test_config_round_trip(N, k, eps, seed, m):
    cfg = ExperimentConfig(N=N, k=k, eps=eps, seed=seed, m=m, domain={"kind": "polydisc", "R": [1, 2]})
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg


@pytest.mark.parametrize("bad", [{"N": -1}, {"k": []}, {"k": [9]}, {"eps": [0]}, {"seed": -1}, {"seed": 2**64},
                                 {"res": 1}, {"depth": 0}, {"function": {}}, {"domain": {"kind": "ball"}},
                                 {"trials": True}, {"colour": "red"}])
def test_config_rejects(bad):
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict(bad)


def test_every_default_is_valid():
    assert set(DEFAULTS) == set(EXPERIMENTS)
    for name in DEFAULTS:
        default_config(name, seed=3).validate()


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_coeffs_unit_monomial(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"function": {"name": "monomial", "alpha": [2]}, "m": 8, "N": 3, "options": {}}))
    assert cli.main(["coeffs", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "coeffs" / "coefficients.csv")[1:]
    big = [r for r in rows if abs(complex(float(r[3]), float(r[4]))) > 1e-14]
    assert len(big) == 1 and big[0][2] == "2" and float(big[0][3]) == pytest.approx(1)


def test_tails_example(tmp_path):
    assert cli.main(["tails", "--out", str(tmp_path)]) == 0
    verdict = json.loads((tmp_path / "tails" / "verdict.json").read_text())
    assert verdict["orders"][0]["tail"] < 1e-6
    rows = _rows(tmp_path / "tails" / "tails_k0.csv")
    assert rows[0] == ["j", "term", "tail"] and len(rows) == 82


def test_bound_check_example(tmp_path):
    cfg = tmp_path / "b.json"
    cfg.write_text(json.dumps({"function": {"name": "geometric", "a": 3}, "domain": {"kind": "polydisc", "R": [1]},
                               "k": [0, 1, 2]}))
    cli.main(["bound-check", "--config", str(cfg), "--out", str(tmp_path)])
    verdict = json.loads((tmp_path / "bound-check" / "verdict.json").read_text())
    assert verdict["corrected_violations"] == 0


def test_invalid_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"N": -1}')
    assert cli.main(["tails", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    cfg.write_text("{not json")
    assert cli.main(["tails", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert cli.main(["tails", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2
    assert cli.main(["tails", "--workers", "0", "--out", str(tmp_path)]) == 2
    # a function that is not holomorphic on the requested region
    cfg.write_text(json.dumps({"function": {"name": "geometric", "a": 0.5}, "domain": {"kind": "polydisc", "R": [1]}}))
    assert cli.main(["tails", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_verdict_failure_exits_1(tmp_path):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"options": {"dims": [2], "tol": 1e-3}}))
    assert cli.main(["summability", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    cfg.write_text(json.dumps({"options": {"dims": [1], "tol": 1e-3}}))
    assert cli.main(["summability", "--config", str(cfg), "--out", str(tmp_path)]) == 0


def test_output_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["kernels"]) == 0
    assert (tmp_path / "env" / "kernels" / "verdict.json").exists()
    assert not list((tmp_path / "env" / "kernels").glob("*.tmp"))


def test_seed_flag_overrides_config(tmp_path, capsys):
    assert cli.main(["shift", "--seed", "42", "--print-config"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 42


def test_same_seed_same_bytes(tmp_path):
    for sub in ("a", "b"):
        assert cli.main(["net-cauchy", "--seed", "9", "--out", str(tmp_path / sub)]) == 0
        assert cli.main(["shift", "--seed", "9", "--out", str(tmp_path / sub)]) == 0
    for name in ("net-cauchy/tails_k0.csv", "net-cauchy/rearrangements_k0_eps1e-06.csv", "shift/shift.csv",
                 "net-cauchy/verdict.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_workers_do_not_change_results():
    cfg = default_config("seminorms")
    one = run_experiment("seminorms", cfg, workers=1)
    two = run_experiment("seminorms", cfg, workers=3)
    assert one.tables == two.tables and one.verdict == two.verdict


def test_report_writes_summary(tmp_path):
    cfg = tmp_path / "r.json"
    cfg.write_text(json.dumps({"options": {"experiments": ["kernels", "enumeration", "summability"]}}))
    status = cli.main(["report", "--config", str(cfg), "--out", str(tmp_path), "--workers", "2"])
    rows = _rows(tmp_path / "report" / "summary.csv")
    assert [r[0] for r in rows[1:]] == ["kernels", "enumeration", "summability"]
    assert status == 1 and rows[3][1] == "0"
    cfg.write_text(json.dumps({"options": {"experiments": ["nope"]}}))
    assert cli.main(["report", "--config", str(cfg), "--out", str(tmp_path)]) == 2
