import json
import math

import numpy as np
import pytest

from mcvwave.cases import build, train_params
from mcvwave.errors import DomainError
from mcvwave.material import DimensionlessParams
from mcvwave.polynomial import Polynomial
from mcvwave.rational import integrate_rational
from mcvwave.travelling import WaveFrame
from mcvwave.validation import (
    ValidationReport,
    closed_form_vs_oracle,
    constraint_audit,
    quadrature_oracle,
)

ONE = Polynomial([1.0])
X2M1 = Polynomial([-1.0, 0.0, 1.0])


def test_oracle_artanh():
    assert quadrature_oracle(ONE, X2M1, 0.0, 0.5) == pytest.approx(-math.atanh(0.5), rel=1e-12)


def test_oracle_reversed_and_empty():
    assert quadrature_oracle(ONE, X2M1, 0.5, 0.0) == pytest.approx(math.atanh(0.5), rel=1e-12)
    assert quadrature_oracle(ONE, X2M1, 0.3, 0.3) == 0.0


def test_oracle_rejects_pole():
    with pytest.raises(DomainError):
        quadrature_oracle(ONE, X2M1, 0.0, 2.0)
    with pytest.raises(DomainError):
        quadrature_oracle(ONE, X2M1, 1.0, 2.0)


def test_closed_form_agrees():
    e = integrate_rational(ONE, X2M1)
    rep = closed_form_vs_oracle(e, ONE, X2M1, [(0.0, 0.5), (-0.9, 0.9), (1.5, 4.0)])
    assert rep.overall
    assert max(c.value for c in rep.checks) <= 1e-12


def test_corrupted_coefficient_is_caught():
    e = integrate_rational(ONE, X2M1)
    d = e.to_dict()
    d["artanh_terms"][0]["coef"] *= 1 + 1e-6
    bad = type(e).from_dict(d)
    rep = closed_form_vs_oracle(bad, ONE, X2M1, [(0.0, 0.5)])
    assert not rep.overall


def test_pole_in_interval_is_a_failure():
    e = integrate_rational(ONE, X2M1)
    rep = closed_form_vs_oracle(e, ONE, X2M1, [(0.0, 2.0)])
    assert not rep.overall and "interval[0]" in rep.notes


def test_n2_audit_round_trip():
    _, p, f, _ = build("n2-tanh")
    rep = constraint_audit("n2", p, f)
    assert rep.overall
    assert max(c.value for c in rep.checks) <= 1e-10


def test_n2_audit_sees_tiny_perturbation():
    _, p, f, _ = build("n2-tanh")
    b = list(p.beta)
    b[2] += 1e-6
    rep = constraint_audit("n2", DimensionlessParams(p.alpha, b, p.gamma), f)
    (c,) = [c for c in rep.checks if c.name == "beta2"]
    assert c.value == pytest.approx(1e-6, rel=1e-6)
    assert not rep.overall


def test_n2_audit_wrong_orders():
    rep = constraint_audit("n2", DimensionlessParams(1.0, (1.0,), (1.0,)), WaveFrame(1.0, 1.0))
    assert not rep.overall


def test_train_audit():
    tp = train_params()
    f = WaveFrame(0.8, 0.7)
    rep = constraint_audit(tp, tp.params(), f)
    assert rep.overall, [c for c in rep.checks if not c.passed]
    notes = rep.notes["alternate_closure"]
    assert notes["beta1"]["delta"] == pytest.approx(3.75 - 16.25, rel=1e-10)


def test_train_audit_sees_perturbed_beta():
    tp = train_params()
    p = tp.params()
    b = list(p.beta)
    b[4] *= 1 + 1e-6
    rep = constraint_audit(tp, DimensionlessParams(p.alpha, b, p.gamma), WaveFrame(0.8, 0.7))
    assert not rep.overall


def test_report_json_schema():
    rep = ValidationReport()
    rep.add("a", 1e-12, 1e-10)
    rep.add("b", float("nan"), 1.0)
    rep.fail("c", "why")
    d = json.loads(rep.to_json())
    assert set(d) == {"checks", "overall", "notes"}
    assert d["overall"] is False
    assert [c["pass"] for c in d["checks"]] == [True, False, False]
    assert set(d["checks"][0]) == {"name", "value", "tol", "pass"}
    assert d["checks"][2]["value"] == "inf"
    assert d["notes"] == {"c": "why"}


def test_report_extend_prefix():
    a, b = ValidationReport(), ValidationReport()
    b.add("x", 0.0, 1.0)
    a.extend(b, "sub.")
    assert a.checks[0].name == "sub.x" and a.overall


def test_oracle_matches_numpy_integral_of_polynomial():
    # constant denominator: the oracle is ordinary polynomial integration
    A = Polynomial([1.0, -2.0, 3.0])
    got = quadrature_oracle(A, Polynomial([2.0]), -1.0, 2.0)
    P = np.polynomial.Polynomial([1.0, -2.0, 3.0]).integ() / 2.0
    assert got == pytest.approx(P(2.0) - P(-1.0), rel=1e-12)
