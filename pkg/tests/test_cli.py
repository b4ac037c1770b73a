import json

import numpy as np
import pytest

from mcvwave.cli import main

CONST_CFG = """
T0 = 2
cv = 1
mbar = 1
lambda_coeffs = 1.5
tau_coeffs = 0.25
L = 1
tp = 0.5
qbar0 = 1
"""

ROOT_CFG = CONST_CFG.replace("lambda_coeffs = 1.5", "lambda_coeffs = 1, -0.5")


def run_cli(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "mcvwave" in capsys.readouterr().out


def test_no_command_is_usage_error():
    assert run_cli() == 1


def test_material_constant(tmp_path, capsys):
    cfg = tmp_path / "m.cfg"
    cfg.write_text(CONST_CFG)
    assert run_cli("material", "--config", cfg) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["admissibility"]["whole_range_admissible"] is True
    assert out["dimensionless"]["alpha"] == pytest.approx(0.5 / 0.25, rel=1e-15)


def test_material_root_in_range(tmp_path, capsys):
    cfg = tmp_path / "m.cfg"
    cfg.write_text(ROOT_CFG)
    # lambda = 1 - 0.5 (T - 2) vanishes at T = 4
    assert run_cli("material", "--config", cfg, "--t-lo", 2, "--t-hi", 6) == 2
    out = json.loads(capsys.readouterr().out)
    (iv,) = out["admissibility"]["intervals"]
    assert iv["hi"] == pytest.approx(4.0)


def test_material_malformed_key(tmp_path, capsys):
    cfg = tmp_path / "m.cfg"
    cfg.write_text(CONST_CFG + "colour = 3\n")
    assert run_cli("material", "--config", cfg) == 1
    assert ":10:" in capsys.readouterr().err


def test_material_missing_file(tmp_path):
    assert run_cli("material", "--config", tmp_path / "nope.cfg") == 1


def test_soliton_soliton(tmp_path):
    out = tmp_path / "tanh.csv"
    assert run_cli("soliton", "--case", "n2-tanh", "--out", out) == 0
    data = read_csv(out)
    assert data.shape == (201, 3)
    U, V = data[:, 1], data[:, 2]
    # the dark dip fills (0, 16); the tails saturate to the asymptotes
    assert U.min() == pytest.approx(0.0, abs=1e-9) and U.max() == pytest.approx(16.0, rel=1e-12)
    assert np.all((U >= 0) & (U <= 16))
    assert V.max() == pytest.approx(1.4, rel=1e-14)
    man = json.loads((tmp_path / "tanh.manifest.json").read_text())
    assert set(man) >= {"command", "version", "parameters", "inputs", "outputs", "wall_time"}
    assert man["parameters"]["params"]["beta"][2] == pytest.approx(1.53125e-3, rel=1e-14)
    assert man["outputs"] == [str(out)]


def test_soliton_case00(tmp_path):
    out = tmp_path / "c.csv"
    assert run_cli("soliton", "--case", "case00", "--xi-min", -1, "--xi-max", 1, "--samples", 3, "--out", out) == 0
    data = read_csv(out)
    assert data[1, 0] == 0.0 and data[1, 1] == 0.5


def test_soliton_negative_c_tilde_suggests_tan(tmp_path, capsys):
    assert run_cli("soliton", "--case", "n2-tanh", "--c1", -2, "--out", tmp_path / "x.csv") == 3
    assert "n2-tan" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


def test_soliton_unknown_case(tmp_path):
    assert run_cli("soliton", "--case", "n9", "--out", tmp_path / "x.csv") == 1


def test_soliton_params_json(tmp_path):
    pj = tmp_path / "p.json"
    pj.write_text(json.dumps({"w": 3.0}))
    out = tmp_path / "c.csv"
    assert run_cli("soliton", "--case", "case00", "--params", pj, "--out", out) == 0
    man = json.loads((tmp_path / "c.manifest.json").read_text())
    assert str(pj) in man["inputs"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    assert run_cli("soliton", "--case", "case00", "--params", bad, "--out", out) == 1


def test_soliton_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run_cli("soliton", "--case", "n6-train", "--out", p) == 0
    assert a.read_bytes() == b.read_bytes()
    ma = json.loads((tmp_path / "a.manifest.json").read_text())
    mb = json.loads((tmp_path / "b.manifest.json").read_text())
    assert ma["parameters"] == mb["parameters"]


def test_simulate_front(tmp_path, capsys):
    prefix = tmp_path / "front"
    assert run_cli("simulate", "--nx", 64, "--n-out", 2, "--out", prefix) == 0
    assert "shape_error=" in capsys.readouterr().out
    man = json.loads((tmp_path / "front.manifest.json").read_text())
    assert man["status"] == "completed"
    assert "shape_error" in man["diagnostics"][-1]
    assert man["diagnostics"][-1]["shape_error"] < 0.01
    data = read_csv(tmp_path / "front.csv")
    assert data.shape == (3 * 64, 4)


def test_simulate_t_end_zero(tmp_path):
    prefix = tmp_path / "z"
    assert run_cli("simulate", "--nx", 32, "--t-end", 0, "--out", prefix) == 0
    data = read_csv(tmp_path / "z.csv")
    assert data.shape == (32, 4)
    assert np.all(data[:, 1] == 0.0)
    man = json.loads((tmp_path / "z.manifest.json").read_text())
    assert man["diagnostics"][0]["shape_error"] == 0.0


def test_simulate_bad_cfl(tmp_path):
    assert run_cli("simulate", "--cfl", 1.5, "--out", tmp_path / "s") == 1


def test_simulate_solver_failure(tmp_path, capsys):
    prefix = tmp_path / "f4"
    assert run_cli("simulate", "--case", "n2-tanh", "--nx", 256, "--out", prefix) == 4
    assert "cell" in capsys.readouterr().err
    man = json.loads((tmp_path / "f4.manifest.json").read_text())
    assert man["status"] == "failed"
    assert man["error"]["t"] is not None
    assert not (tmp_path / "f4.csv").exists()


def test_simulate_stationary_needs_window(tmp_path):
    assert run_cli("simulate", "--case", "case00", "--out", tmp_path / "s") == 1


def test_verify_constraints(tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert run_cli("verify", "constraints", "--out", rep) == 0
    assert str(rep) in capsys.readouterr().out
    d = json.loads(rep.read_text())
    assert d["overall"] is True and d["suites"] == {"constraints": True}


def test_verify_zero_tolerance_fails(tmp_path):
    assert run_cli("verify", "constraints", "--tol", "material=0", "--tol", "constraint=0",
                   "--tol", "constants=0", "--out", tmp_path / "r.json") == 5


def test_verify_unknown_suite(tmp_path):
    assert run_cli("verify", "everything", "--out", tmp_path / "r.json") == 1


def test_verify_bad_tol(tmp_path):
    assert run_cli("verify", "constraints", "--tol", "nonsense=1", "--out", tmp_path / "r.json") == 1
    assert run_cli("verify", "constraints", "--tol", "material=-1", "--out", tmp_path / "r.json") == 1
