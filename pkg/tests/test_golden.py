"""Golden-file checks for the soliton command.

Regenerate with ``MCVWAVE_REGEN_GOLDEN=1 pytest tests/test_golden.py``; the
content checks below then confirm the new files against independent formulas.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from mcvwave.cases import CASES, build, train_params
from mcvwave.cli import main
from mcvwave.families import train_implicit_residual

GOLDEN = Path(__file__).parent / "golden"
SOLITON_CASES = list(CASES)


def generate(case, out):
    assert main(["soliton", "--case", case, "--out", str(out)]) == 0
    return Path(out).read_bytes()


@pytest.mark.parametrize("case", SOLITON_CASES)
def test_golden_bytes(case, tmp_path):
    got = generate(case, tmp_path / f"{case}.csv")
    ref = GOLDEN / f"{case}.csv"
    if os.environ.get("MCVWAVE_REGEN_GOLDEN"):
        ref.write_bytes(got)
    assert got == ref.read_bytes()


def load(case):
    return np.loadtxt(GOLDEN / f"{case}.csv", delimiter=",", skiprows=1)


def test_golden_case00_is_exponential():
    xi, U, V = load("case00").T
    assert np.allclose(U, 0.5 * np.exp(xi / 1.5), rtol=1e-14, atol=0)
    # V = (w alpha / k) G(U) with G = U
    assert np.allclose(V, 2.0 * U, rtol=1e-15, atol=0)


@pytest.mark.parametrize("case, c1", [("n2-tanh", 0.0), ("n2-tan", -2.0)])
def test_golden_n2_flux(case, c1):
    xi, U, V = load(case).T
    G = 0.08 * U - 0.005 * U * U
    assert np.allclose(V, 0.875 / 0.2 * G + c1, rtol=1e-13, atol=1e-14)


def test_golden_n2_tanh_shape():
    xi, U, V = load("n2-tanh").T
    # U = 8 (1 + tanh(A xi)), A = -437.5
    assert np.allclose(U, 8.0 * (1.0 + np.tanh(-437.5 * xi)), rtol=1e-12, atol=1e-12)


def test_golden_n2_tan_shape():
    xi, U, V = load("n2-tan").T
    wp = build("n2-tan")[0]
    A, amp, off = (wp.constants[k] for k in ("A_rate", "amp", "offset"))
    assert np.allclose(U, off + amp * np.tan(A * xi), rtol=1e-12)


def test_golden_train_satisfies_implicit_relation():
    xi, U, V = load("n6-train").T
    _, _, f, _ = build("n6-train")
    assert np.max(np.abs(train_implicit_residual(train_params(), f, xi, U))) <= 1e-8
