import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcvwave.errors import DomainError
from mcvwave.polynomial import Polynomial
from mcvwave.rational import ClosedFormExpr, evaluate, hermite_decompose, integrate_rational
from mcvwave.travelling import fd_derivative
from mcvwave.verify import random_rational


def test_hermite_cover_up():
    hd = hermite_decompose(Polynomial([1.0]), Polynomial([-1, 0, 1]))
    res = dict((round(b), a) for b, a in hd.residues)
    assert res[1] == pytest.approx(0.5, rel=1e-14)
    assert res[-1] == pytest.approx(-0.5, rel=1e-14)
    assert hd.rational_num.is_zero()


def test_hermite_double_pole():
    hd = hermite_decompose(Polynomial([1.0]), Polynomial.from_roots([1.0, 1.0]))
    # 1/(x-1)^2 = (-1/(x-1))'
    assert all(abs(a) < 1e-14 for _, a in hd.residues)
    x = np.array([-1.0, 0.5, 3.0])
    assert np.allclose(hd.rational_num(x) / hd.rational_den(x), -1 / (x - 1), rtol=1e-13)


def test_hermite_quadratic():
    hd = hermite_decompose(Polynomial([0, 2.0]), Polynomial([1, 0, 1]))
    (h, d, C, D), = hd.quadratic
    assert (C, D) == (pytest.approx(2.0), pytest.approx(0.0, abs=1e-15))


def test_integrate_pure_artanh():
    e = integrate_rational(Polynomial([1.0]), Polynomial([-1, 0, 1]))
    assert len(e.artanh_terms) == 1 and not e.log_terms
    x = np.linspace(-0.9, 0.9, 7)
    assert np.allclose(e(x) - e(0.0), -np.arctanh(x), atol=1e-14)


def test_integrate_log():
    e = integrate_rational(Polynomial([1.5]), Polynomial([0, 1.0]))
    x = np.array([0.2, 1.0, 7.0])
    assert np.allclose(e(x), 1.5 * np.log(x), atol=1e-14)


def test_integrate_arctan():
    e = integrate_rational(Polynomial([1.0]), Polynomial([1, 0, 1]))
    x = np.array([-3.0, 0.0, 2.0])
    assert np.allclose(e(x) - e(0.0), np.arctan(x), atol=1e-14)


def test_evaluate_poly_part():
    e = ClosedFormExpr(poly_part=Polynomial([0, 0, 0.5]))
    assert evaluate(e, 2.0) == 2.0


def test_evaluate_artanh_edge():
    e = integrate_rational(Polynomial([1.0]), Polynomial([-1, 0, 1]))
    assert evaluate(e, 0.0) - e.constant == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        evaluate(e, 1.0)


def test_outside_artanh_window_is_real():
    e = integrate_rational(Polynomial([1.0]), Polynomial([-1, 0, 1]))
    # d/dx of the expression is still 1/(x^2-1) beyond the window
    x = np.array([1.5, 3.0, -4.0])
    assert np.allclose(e.derivative(x), 1 / (x * x - 1), rtol=1e-13)
    xr = np.array([1.5, 3.0])
    assert np.allclose(fd_derivative(e, xr, domain=(1.0, math.inf)), 1 / (xr * xr - 1), rtol=1e-8)
    assert np.all(np.isfinite(e(x)))


def test_json_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(10):
        A, B, _, (u1, u2) = random_rational(rng)
        e = integrate_rational(A, B)
        back = ClosedFormExpr.from_dict(json.loads(e.to_json()))
        assert back(u1) == e(u1) and back(u2) == e(u2)


def test_repeated_roots_mixed():
    # (x^2 + 1) / ((x-1)^2 (x+2)) on (-2, 1)
    A = Polynomial([1, 0, 1])
    B = Polynomial.from_roots([1.0, 1.0, -2.0])
    e = integrate_rational(A, B)
    x = np.linspace(-1.5, 0.5, 11)
    assert np.allclose(e.derivative(x), A(x) / B(x), rtol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_derivative_matches_integrand(seed):
    A, B, gap, (u1, u2) = random_rational(np.random.default_rng(seed))
    e = integrate_rational(A, B)
    x = np.linspace(u1, u2, 7)
    g = A(x) / B(x)
    assert np.max(np.abs(e.derivative(x) - g)) <= 1e-8 * (1 + np.max(np.abs(g)))
