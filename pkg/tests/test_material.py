import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcvwave.errors import ConfigError, DomainError, InadmissibleMaterial
from mcvwave.material import (
    MaterialExpansion,
    ScalingContext,
    check_admissible_range,
    eval_lambda,
    eval_rho,
    eval_tau,
    nondimensionalize,
    parse_material_config,
)
from mcvwave.verify import material_identity_errors


def mat(lam, tau, T0=1.0, c_v=1.0, m_bar=1.0):
    return MaterialExpansion(T0, tuple(lam), tuple(tau), c_v, m_bar)


def test_lambda_constant():
    assert eval_lambda(mat([2.5], [1]), 7.0) == (2.5, True)


def test_lambda_linear():
    assert eval_lambda(mat([2, 1], [1]), 4.0).value == 5.0


def test_lambda_flagged_when_negative():
    v = eval_lambda(mat([1, -0.5], [1]), 4.0)
    assert v.value == -0.5 and v.admissible is False


def test_tau_values():
    assert eval_tau(mat([1], [0.3]), 9.0).value == 0.3
    assert eval_tau(mat([1], [1, 2]), 1.5).value == 2.0
    v = eval_tau(mat([1], [1, -1]), 3.0)
    assert v.value == -1.0 and not v.admissible


def test_lambda_array():
    v = eval_lambda(mat([1, -1], [1]), np.array([1.0, 1.5, 2.5]))
    assert list(v.admissible) == [True, True, False]


def test_rho_reference():
    m = mat([2.0], [3.0], T0=5.0, m_bar=0.5)
    assert eval_rho(m, 5.0) == pytest.approx(3.0 / (0.5 * 2.0 * 25.0), rel=1e-15)


def test_rho_direct_substitution():
    assert eval_rho(mat([1], [1]), 2.0) == 0.25


def test_rho_domain_error():
    with pytest.raises(DomainError):
        eval_rho(mat([1, -1], [1]), 2.5)


def test_inadmissible_constants():
    with pytest.raises(InadmissibleMaterial):
        mat([-1.0], [1.0])
    with pytest.raises(InadmissibleMaterial):
        mat([1.0], [1.0], T0=0.0)


def test_nondimensionalize_unit_case():
    p = nondimensionalize(mat([1], [1]), ScalingContext(1.0, 1.0, 1.0))
    assert (p.alpha, p.beta, p.gamma) == (1.0, (1.0,), (1.0,))


def test_nondimensionalize_b0_doubling_fixed_alpha0():
    # rho0 = b0/(mbar a0 T0^2): doubling mbar with b0 keeps rho0 and alpha0
    ctx = ScalingContext(1.3, 0.7, 2.0)
    p1 = nondimensionalize(mat([1.2], [0.4], T0=3.0, m_bar=0.5), ctx)
    p2 = nondimensionalize(mat([1.2], [0.8], T0=3.0, m_bar=1.0), ctx)
    assert p2.alpha == pytest.approx(p1.alpha / 2, rel=1e-15)
    assert p2.gamma[0] == pytest.approx(2 * p1.gamma[0], rel=1e-15)
    assert p2.beta[0] == pytest.approx(p1.beta[0], rel=1e-15)


def test_nondimensionalize_b0_doubling_through_rho0():
    # with mbar fixed, rho0 doubles and alpha0 halves, so gamma0 is unchanged
    ctx = ScalingContext(1.3, 0.7, 2.0)
    p1 = nondimensionalize(mat([1.2], [0.4], T0=3.0), ctx)
    p2 = nondimensionalize(mat([1.2], [0.8], T0=3.0), ctx)
    assert p2.alpha == pytest.approx(p1.alpha / 2, rel=1e-15)
    assert p2.gamma[0] == pytest.approx(p1.gamma[0], rel=1e-15)
    assert p2.beta[0] == pytest.approx(p1.beta[0] / 2, rel=1e-15)


def test_nondimensionalize_alpha():
    p = nondimensionalize(mat([3.0], [0.25], T0=2.0), ScalingContext(1.0, 0.5, 1.0))
    assert p.alpha == 0.5 / 0.25


@settings(max_examples=100, deadline=None)
@given(
    st.floats(0.1, 10), st.floats(1e-3, 1), st.floats(1, 500),
    st.lists(st.floats(-0.3, 0.3), max_size=3), st.lists(st.floats(-0.3, 0.3), max_size=3),
    st.floats(0.1, 10), st.floats(0.01, 1), st.floats(0.1, 10),
)
def test_alpha_gamma0_equals_beta0(a0, b0, T0, la, tb, L, tp, q):
    m = MaterialExpansion(T0, (a0, *la), (b0, *tb), 1.3, 0.7)
    p = nondimensionalize(m, ScalingContext(L, tp, q))
    assert p.alpha * p.gamma[0] == p.beta[0]


def test_rho_identity_random():
    worst_rho, worst_nd = material_identity_errors(np.random.default_rng(11), n_points=200)
    assert worst_rho <= 1e-12 and worst_nd == 0.0


def test_admissible_whole():
    rep = check_admissible_range(mat([1], [1]), 1.0, 11.0)
    assert rep.whole


def test_admissible_single_root():
    # lambda = 1 - (T - 1) vanishes at T = 2
    rep = check_admissible_range(mat([1, -1], [1]), 1.0, 11.0)
    (iv,) = rep.intervals
    assert (iv.lo, iv.hi, iv.lo_open, iv.hi_open) == (1.0, 2.0, False, True)
    assert not rep.whole


def test_admissible_two_roots():
    # lambda = 1 - (T - 3)^2 positive on (2, 4)
    rep = check_admissible_range(mat([1, 0, -1], [1], T0=3.0), 1.0, 5.0)
    (iv,) = rep.intervals
    assert iv.lo == pytest.approx(2.0) and iv.hi == pytest.approx(4.0)
    assert iv.lo_open and iv.hi_open


CONFIG = """
# unit material
T0 = 1
cv = 1
mbar = 1
lambda_coeffs = 1
tau_coeffs = 1
L = 1
tp = 1
qbar0 = 1
"""


def test_parse_config():
    m, ctx = parse_material_config(CONFIG)
    assert m.T0 == 1.0 and ctx.L == 1.0
    assert ctx.T_end(m) == 2.0


def test_parse_config_errors():
    with pytest.raises(ConfigError, match=":3:"):
        parse_material_config("T0 = 1\ncv = 1\nbogus = 2\n")
    with pytest.raises(ConfigError, match="missing"):
        parse_material_config("T0 = 1\n")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_material_config("T0 = 1\nT0 = 2\n")
    with pytest.raises(ConfigError, match="cannot parse"):
        parse_material_config("T0 = abc\n")


def test_qbar_zero_rejected():
    with pytest.raises(ConfigError):
        ScalingContext(1.0, 1.0, 0.0)
    assert math.isfinite(ScalingContext(1.0, 1.0, -1.0).q_bar0)
