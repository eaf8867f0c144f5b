import json

import pytest

from stabcap.cli import run_command


def run(tmp_path, *argv):
    return run_command([*argv, "--out", str(tmp_path)])


def write(tmp_path, cfg):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return str(p)


SCALAR = {"seed": 3,
          "model": {"kind": "additive", "drift": {"type": "linear", "matrix": [[2.0]]},
                    "init": {"family": "uniform", "low": -1, "high": 1}},
          "channel": {"kind": "noiseless", "size": 8},
          "policy": {"rate_bits": 3, "gain": 2.0}}


def test_moment_bound_verb(tmp_path):
    cfg = write(tmp_path, {"seed": 0, "model": {"drift": {"type": "sqrt_decay"}}})
    assert run(tmp_path, "bound", "--theorem", "moment", "--config", cfg) == 0
    rep = json.loads((tmp_path / "bound.json").read_text())
    assert rep["schema_version"] and rep["seed"] == 0
    assert rep["results"]["kappa"] == pytest.approx(3, abs=1e-3)
    assert rep["results"]["value"] == pytest.approx(0.3849001795, abs=1e-6)


def test_intervals_verb(tmp_path):
    assert run(tmp_path, "lemmas", "intervals", "--seed", "0",
               "--set", "lemmas.intervals=[[0,1],[2,3]]") == 0
    rep = json.loads((tmp_path / "lemmas_intervals.json").read_text())
    assert rep["results"]["selected"] == [0, 1]
    assert (tmp_path / "intervals.csv").read_text().startswith("index,left,right,selected")


def test_unknown_verb(tmp_path, capsys):
    assert run_command(["frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err


def test_missing_seed(tmp_path, capsys):
    assert run(tmp_path, "lemmas", "rate") == 2
    assert "seed" in capsys.readouterr().err


def test_bad_key_named(tmp_path, capsys):
    cfg = dict(SCALAR, model={"drift": {"type": "linear", "matrix": [[1, 2, 3]]}})
    assert run(tmp_path, "bound", "--theorem", "linear", "--config", write(tmp_path, cfg)) == 2
    assert "model.drift.matrix" in capsys.readouterr().err


def test_numeric_error_exit(tmp_path):
    cfg = {"seed": 1, "model": {"drift": {"type": "linear", "matrix": [[1e200]]},
                                "init": {"family": "point", "value": 1.0}}}
    assert run(tmp_path, "simulate", "--config", write(tmp_path, cfg)) == 3


def test_env_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("STABCAP_OUT", str(tmp_path / "envout"))
    assert run_command(["lemmas", "rate", "--seed", "1"]) == 0
    assert (tmp_path / "envout" / "lemmas_rate.json").exists()


def test_round_trip_bit_identical(tmp_path):
    cfg = write(tmp_path, SCALAR)
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_command(["simulate", "--config", cfg, "--set", "simulate.horizon=30", "--out", str(a)]) == 0
    embedded = json.loads((a / "simulate.json").read_text())["config"]
    cfg2 = tmp_path / "embedded.json"
    cfg2.write_text(json.dumps(embedded))
    assert run_command(["simulate", "--config", str(cfg2), "--out", str(b)]) == 0
    assert (a / "simulate.json").read_bytes() == (b / "simulate.json").read_bytes()
    assert (a / "trajectories.csv").read_bytes() == (b / "trajectories.csv").read_bytes()
    assert (a / "symbols.csv").read_text().startswith("t,q,q_prime,u")


@pytest.mark.parametrize("argv", [
    ["entropy", "--set", "entropy.horizons=[2,3,4]"],
    ["ams", "--set", "ams.horizon=200"],
    ["noisy-demo", "--set", "noisy_demo.horizons=[4,6]", "--set", "noisy_demo.trials=20"],
    ["bound", "--theorem", "linear"],
])
def test_verbs_run(tmp_path, argv):
    assert run(tmp_path, *argv, "--config", write(tmp_path, SCALAR)) == 0


def test_channel_verb(tmp_path):
    cfg = {"seed": 2, "channel": {"kind": "bsc", "crossover": 0.11},
           "channel_experiment": {"rates": [0.25], "blocklength": 50, "trials": 20}}
    assert run(tmp_path, "channel", "--config", write(tmp_path, cfg)) == 0
    rep = json.loads((tmp_path / "channel.json").read_text())
    assert rep["results"]["capacity"] == pytest.approx(0.50008, abs=1e-4)


def test_cocycle_verb(tmp_path):
    cfg = {"seed": 0, "model": {"kind": "semilinear", "matrices": {"a": [[2, 0], [0, 0.5]], "b": [[3, 0], [0, 1]]}},
           "bound": {"blocks": [[0], [1]], "n_max": 6}}
    assert run(tmp_path, "bound", "--theorem", "cocycle", "--config", write(tmp_path, cfg)) == 0
    rep = json.loads((tmp_path / "bound.json").read_text())
    assert rep["results"]["total"]["value"] == pytest.approx(1.0)


def test_reproduce(tmp_path, capsys):
    assert run(tmp_path, "reproduce") == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_unknown_section_key(tmp_path, capsys):
    assert run(tmp_path, "lemmas", "rate", "--seed", "0", "--set", "lemmas.bogus=1") == 2
    assert "lemmas.bogus" in capsys.readouterr().err


def test_noisy_demo_reports_both_noise_modes(tmp_path):
    assert run(tmp_path, "noisy-demo", "--config", write(tmp_path, SCALAR),
               "--set", "noisy_demo.horizons=[4,6]", "--set", "noisy_demo.trials=20") == 0
    res = json.loads((tmp_path / "noisy_demo.json").read_text())["results"]
    assert res["experiment"]["noise_mode"] == "per_trial"
    assert res["experiment_fixed"]["noise_mode"] == "fixed"
    assert "averaged" in res["experiment"]["notes"][0]
    assert "conditional" in res["experiment_fixed"]["notes"][0]


def test_nonlinear_closed_loop_flagged(tmp_path):
    cfg = dict(SCALAR, model={"drift": {"type": "sqrt_decay"},
                              "init": {"family": "uniform", "low": -1, "high": 1}})
    assert run(tmp_path, "ams", "--config", write(tmp_path, cfg), "--set", "ams.horizon=100") == 0
    res = json.loads((tmp_path / "ams.json").read_text())["results"]
    assert res["linear_bound"] is None and "heuristic" in res["notes"][0]
