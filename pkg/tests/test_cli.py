import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from gdalab.cli import main


def write_cfg(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run(tmp_path, cmd, cfg, *extra, out="out"):
    code = main([cmd, "--config", write_cfg(tmp_path, cfg), "--out", str(tmp_path / out), *extra])
    return code, tmp_path / out


def read_csv(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


QUAD = {"builtin": "quadratic", "a": 1, "b": 0, "c": -1}


def test_simulate_quadratic_converges(tmp_path):
    code, out = run(tmp_path, "simulate", {"payoff": QUAD, "initial": [[1, 1]], "integrator": {"t_max": 40}})
    assert code == 0
    last = read_csv(out / "trajectory_0.csv")[-1]
    assert abs(float(last["x1"])) < 1e-6 and abs(float(last["y1"])) < 1e-6
    audit = json.loads((out / "audit_0.json").read_text())
    assert audit["monotone"] and audit["r_source"] == "certificate" and audit["r"] == 0.5
    assert {"max_rate_discrepancy", "monotone", "worst_t"} <= set(audit)


def test_simulate_conservative_default_r(tmp_path):
    cfg = {"payoff": {"expression": "x1*y1", "m": 1, "n": 1}, "initial": [{"x": [1], "y": [0]}],
           "integrator": {"t_max": 20}}
    code, out = run(tmp_path, "simulate", cfg)
    assert code == 0
    audit = json.loads((out / "audit_0.json").read_text())
    assert audit["r"] == 0.0 and audit["r_source"] == "default" and audit["max_drift"] < 1e-6


def test_simulate_van_der_pol_amplitude(tmp_path):
    cfg = {"payoff": {"builtin": "lienard", "mu": 1, "alpha": 0}, "initial": [[0.1, 0]],
           "integrator": {"t_max": 200, "record_every": 0.05}}
    code, out = run(tmp_path, "simulate", cfg)
    assert code == 0
    rows = read_csv(out / "trajectory_0.csv")
    x = np.array([float(r["x1"]) for r in rows])
    early, late = np.abs(x[: len(x) // 10]).max(), np.abs(x[len(x) // 2 :]).max()
    assert early < late and late == pytest.approx(2.0, abs=0.05)


def test_simulate_r_override(tmp_path):
    cfg = {"payoff": QUAD, "initial": [[1, 1]], "integrator": {"t_max": 1}, "r_override": 0.25}
    code, out = run(tmp_path, "simulate", cfg)
    audit = json.loads((out / "audit_0.json").read_text())
    assert audit["r"] == 0.25 and audit["r_source"] == "override"
    row = read_csv(out / "trajectory_0.csv")[0]
    assert float(row["L"]) == pytest.approx(float(row["T"]) - 0.25 * float(row["S"]), rel=1e-15)


@pytest.mark.parametrize("payoff,t1,case,r", [
    ({"builtin": "quadratic", "a": 2, "b": 2, "c": 1}, True, "case1", 1.5),
    ({"builtin": "lienard", "mu": 1, "alpha": 1.5}, True, "case2", -1.25),
    ({"expression": "x1*y1"}, False, "none", None),
])
def test_certify_examples(tmp_path, payoff, t1, case, r):
    code, out = run(tmp_path, "certify", {"payoff": payoff})
    assert code == 0
    cert = json.loads((out / "certificate.json").read_text())
    assert cert["theorem1"] is t1 and cert["theorem2_case"] == case and cert["r"] == r
    assert cert["lemmas"]["lemma1"]["violations"] == 0
    if payoff.get("expression"):
        assert cert["provenance"] == "sampled" and any("heuristic" in c for c in cert["caveats"])


def test_classify_examples(tmp_path):
    cfg = {"payoff": QUAD, "initial": [[1, 1]], "integrator": {"t_max": 40}}
    code, out = run(tmp_path, "classify", cfg)
    res = json.loads((out / "classification.json").read_text())
    assert code == 0 and len(res) == 1 and res[0]["verdict"] == "Converged"
    assert "config_echo" in res[0]
    cfg = {"payoff": {"expression": "x1*y1"}, "initial": [[1, 0], [0, 2]], "integrator": {"t_max": 40}}
    code, out = run(tmp_path, "classify", cfg, out="o2")
    res = json.loads((out / "classification.json").read_text())
    assert [r["verdict"] for r in res] == ["BoundedNonConvergent"] * 2
    assert all(abs(r["period"] - 2 * np.pi) < 1e-3 for r in res)
    cfg = {"payoff": {"builtin": "quadratic", "a": 2, "b": 1, "c": 1}, "initial": [[1, 1]]}
    code, out = run(tmp_path, "classify", cfg, out="o3")
    assert json.loads((out / "classification.json").read_text())[0]["verdict"] == "Diverged"


LIENARD_SWEEP = {"payoff": {"builtin": "lienard", "mu": 1, "alpha": 0}, "initial": [[0.1, 0]],
                 "integrator": {"t_max": 200, "record_every": 0.05},
                 "sweep": {"parameter": "alpha", "values": [0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]}}


def test_sweep_lienard(tmp_path):
    code, out = run(tmp_path, "sweep", LIENARD_SWEEP)
    assert code == 0
    text = (out / "sweep.csv").read_text()
    assert text.splitlines()[0] == "alpha,theorem1,theorem2_case,corollary1,verdict,r"
    for row in read_csv(out / "sweep.csv"):
        alpha = float(row["alpha"])
        if alpha < 1:
            assert row["verdict"] == "BoundedNonConvergent"
        elif alpha > 1:
            assert row["verdict"] == "Converged" and row["theorem2_case"] == "case2"


def test_sweep_jobs_match_sequential(tmp_path):
    cfg = {"payoff": QUAD, "initial": [[1, 1]], "integrator": {"t_max": 30},
           "classifier": {"eps_ss": 1e-6}, "sweep": {"parameters": {"a": [-1, 1], "c": [-1, 0.5]}}}
    _, o1 = run(tmp_path, "sweep", cfg, out="seq")
    _, o2 = run(tmp_path, "sweep", cfg, "--jobs", "2", out="par")
    assert (o1 / "sweep.csv").read_bytes() == (o2 / "sweep.csv").read_bytes()
    rows = read_csv(o1 / "sweep.csv")
    assert [(r["a"], r["c"]) for r in rows] == [("-1", "-1"), ("-1", "0.5"), ("1", "-1"), ("1", "0.5")]


def test_sweep_multiple_starts(tmp_path):
    cfg = {"payoff": QUAD, "initial": [[1, 1], [-1, 2]], "integrator": {"t_max": 30},
           "classifier": {"eps_ss": 1e-6}, "sweep": {"parameter": "b", "values": [0, 1], "starts": 2}}
    code, out = run(tmp_path, "sweep", cfg)
    rows = read_csv(out / "sweep.csv")
    assert code == 0 and [r["start"] for r in rows] == ["0", "1", "0", "1"]


def test_determinism_byte_identical(tmp_path):
    cfg = {"payoff": {"expression": "x1^4/12 - x1^2/2 - x1*y1 - y1^2"}, "initial": [[0.3, 0.1], [1, -1]],
           "integrator": {"t_max": 10, "record_every": 0.05}, "certify": {"samples": 200}, "seed": 11}
    for cmd, name in [("certify", "certificate.json"), ("classify", "classification.json"),
                      ("simulate", "audit_1.json"), ("simulate", "trajectory_0.csv")]:
        _, a = run(tmp_path, cmd, cfg, out=f"a_{cmd}")
        _, b = run(tmp_path, cmd, cfg, "--jobs", "2", out=f"b_{cmd}")
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_gda_seed_overrides(tmp_path, monkeypatch):
    cfg = {"payoff": {"expression": "x1^4/12 - x1^2/2 - x1*y1 - y1^2"}, "certify": {"samples": 50}, "seed": 1}
    monkeypatch.setenv("GDA_SEED", "42")
    _, out = run(tmp_path, "certify", cfg)
    assert json.loads((out / "certificate.json").read_text())["seed"] == 42
    monkeypatch.setenv("GDA_SEED", "x")
    code, out = run(tmp_path, "certify", cfg, out="bad")
    assert code == 2 and not out.exists()


@pytest.mark.parametrize("cfg,needle", [
    ({"payoff": {"builtin": "lienard", "mu": 1, "alpha": 0}, "initial": [[0.1, 0]],
      "sweep": {"parameter": "alpha", "values": []}}, "sweep"),
    ({"payoff": {"builtin": "quadratic", "a": 1, "b": 0}, "initial": [[1, 1]]}, "payoff"),
    ({"payoff": QUAD, "initial": [[1, 1]], "integrator": {"step": -1}}, "integrator.step"),
    ({"payoff": QUAD, "initial": [[1, 1]], "bogus": 1}, "bogus"),
    ({"payoff": {"expression": "x1*z9"}, "initial": [[1, 1]]}, "z9"),
    ({"payoff": QUAD, "initial": [[1, 1, 1]]}, "initial.0"),
    ({"payoff": QUAD, "initial": []}, "initial"),
    ({"payoff": QUAD, "initial": [[1, 1]], "sweep": {"parameter": "mu", "values": [1]}}, "sweep.parameters.mu"),
])
def test_validation_errors_exit_2(tmp_path, capsys, cfg, needle):
    cmd = "sweep" if "sweep" in cfg else "simulate"
    code, out = run(tmp_path, cmd, cfg)
    assert code == 2
    assert needle in capsys.readouterr().err
    assert not out.exists()


def test_malformed_json_exit_2(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("{not json")
    assert main(["certify", "--config", str(path), "--out", str(tmp_path / "o")]) == 2


def test_runtime_failure_exit_1(tmp_path, capsys):
    # the payoff cannot be evaluated at the start state
    cfg = {"payoff": {"expression": "log(x1) + y1"}, "initial": [[-1, 0]], "r_override": 0}
    code, out = run(tmp_path, "simulate", cfg)
    assert code == 1 and "error" in capsys.readouterr().err
    assert not out.exists() or not any(out.iterdir())


def test_console_script_entry_point(tmp_path):
    cfg = write_cfg(tmp_path, {"payoff": QUAD})
    res = subprocess.run([sys.executable, "-m", "gdalab.cli", "certify", "--config", cfg, "--out",
                          str(tmp_path / "o")], capture_output=True, text=True)
    assert res.returncode == 0 and "certificate.json" in res.stdout
