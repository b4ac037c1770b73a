import math

import numpy as np
import pytest
import scipy.linalg

from mcvwave.cases import build
from mcvwave.errors import ConfigError, HyperbolicityError, SolverFailure
from mcvwave.material import DimensionlessParams
from mcvwave.sim import (
    SimConfig,
    SimState,
    init_from_profile,
    max_signal_speed,
    run,
    snapshots_csv,
    step,
)

UNIT = DimensionlessParams(1.0, (1.0,), (1.0,))


def cfg_for(p, nx=64, t_end=0.1, bc="periodic", **kw):
    return SimConfig(nx, 0.0, 1.0, 0.4, t_end, bc, p, **kw)


def test_config_validation():
    with pytest.raises(ConfigError):
        cfg_for(UNIT, nx=8)
    with pytest.raises(ConfigError):
        SimConfig(64, 0.0, 1.0, 1.0, 0.1, "periodic", UNIT)
    with pytest.raises(ConfigError):
        cfg_for(UNIT, bc="fixed")
    with pytest.raises(ConfigError):
        cfg_for(UNIT, bc="reflect")


def test_init_case00():
    wp, p, f, _ = build("case00")
    cfg = SimConfig(16, -1.0, 1.0, 0.5, 0.0, "periodic", p)
    s = init_from_profile(cfg, wp, f)
    assert np.allclose(s.U, 0.5 * np.exp(s.x / 1.5), rtol=1e-14)


def test_init_time_shift():
    wp, p, f, _ = build("case00")
    cfg = SimConfig(16, -1.0, 1.0, 0.5, 0.0, "periodic", p)
    s = init_from_profile(cfg, wp, f, t0=0.25)
    # U = exp(xi / 1.5) / 2 with xi = x - 2 t
    assert np.allclose(s.U, 0.5 * np.exp((s.x - 0.5) / 1.5), rtol=1e-14)
    assert s.t == 0.25


def test_signal_speed():
    p = DimensionlessParams(1.25, (0.5,), (0.4,))
    s = SimState(np.zeros(3), np.array([0.0, 1.0, 2.0]), np.zeros(3), 0.0)
    assert max_signal_speed(s, p) == pytest.approx(math.sqrt(0.5 / (1.25 * 0.16)), rel=1e-15)


def test_gamma_zero_is_rejected():
    p = DimensionlessParams(1.0, (1.0,), (1.0, -1.0))
    s = SimState(np.zeros(3), np.array([0.0, 1.0, 0.5]), np.zeros(3), 0.0)
    with pytest.raises(HyperbolicityError):
        max_signal_speed(s, p)


def test_negative_b_over_alpha_is_rejected():
    p = DimensionlessParams(1.0, (-1.0,), (1.0,))
    s = SimState(np.zeros(2), np.zeros(2), np.zeros(2), 0.0)
    with pytest.raises(HyperbolicityError):
        max_signal_speed(s, p)


def test_zero_state_is_fixed():
    cfg = cfg_for(UNIT)
    x = cfg.cell_centers()
    r = run(cfg, SimState(x, np.zeros_like(x), np.zeros_like(x), 0.0))
    assert np.all(r.state.U == 0) and np.all(r.state.V == 0)
    assert r.state.t == 0.1


def test_uniform_temperature_is_fixed():
    p = DimensionlessParams(1.0, (1.0, -0.5), (1.0, 0.3))
    cfg = cfg_for(p, bc="fixed", bc_values=((0.7, 0.0), (0.7, 0.0)))
    x = cfg.cell_centers()
    r = run(cfg, SimState(x, np.full_like(x, 0.7), np.zeros_like(x), 0.0))
    assert np.max(np.abs(r.state.U - 0.7)) <= 1e-15
    assert np.max(np.abs(r.state.V)) <= 1e-15


def test_t_end_zero_is_identity():
    cfg = cfg_for(UNIT, t_end=0.0)
    x = cfg.cell_centers()
    s = SimState(x, np.sin(2 * np.pi * x), np.cos(2 * np.pi * x), 0.0)
    r = run(cfg, s, n_out=3)
    assert r.state is s and r.steps == 0


def _mode_error(nx, g0, T=0.5):
    # linear system; compare a Fourier mode against the exact matrix exponential
    p = DimensionlessParams(1.0, (1.0,), (g0,))
    cfg = SimConfig(nx, 0.0, 1.0, 0.4, T, "periodic", p)
    x = cfg.cell_centers()
    kk, h = 2 * np.pi, cfg.dx
    sinc = math.sin(kk * h / 2) / (kk * h / 2)
    mode = np.exp(1j * kk * x) * sinc
    u0 = np.array([1.0, 0.3j])
    s = SimState(x, 1e-3 * np.real(u0[0] * mode), 1e-3 * np.real(u0[1] * mode), 0.0)
    r = run(cfg, s)
    M = np.array([[0, -1j * kk / g0], [-1j * kk / g0, -1 / g0]])
    uT = scipy.linalg.expm(M * T) @ u0
    return np.max(np.abs(r.state.U - 1e-3 * np.real(uT[0] * mode))) / 1e-3


@pytest.mark.parametrize("g0", [1.0, -1.0])
def test_second_order_on_fourier_mode(g0):
    e1, e2 = _mode_error(128, g0), _mode_error(256, g0)
    assert math.log2(e1 / e2) >= 1.8


def test_divergence_guard():
    # Gamma < 0 makes the relaxation grow V like exp(t)
    p = DimensionlessParams(1.0, (1.0,), (-0.05,))
    cfg = SimConfig(16, 0.0, 1.0, 0.5, 5.0, "periodic", p, max_growth=10.0)
    x = cfg.cell_centers()
    with pytest.raises(SolverFailure, match="diverged"):
        run(cfg, SimState(x, np.zeros_like(x), np.ones_like(x), 0.0))


def test_step_budget():
    cfg = cfg_for(UNIT, t_end=1.0, max_steps=3)
    x = cfg.cell_centers()
    with pytest.raises(SolverFailure, match="budget"):
        run(cfg, SimState(x, np.zeros_like(x), np.zeros_like(x), 0.0))


def test_single_step_advances_time():
    cfg = cfg_for(UNIT)
    x = cfg.cell_centers()
    s = step(SimState(x, np.sin(2 * np.pi * x), np.zeros_like(x), 0.0), cfg, dt=1e-3)
    assert s.t == 1e-3


def test_output_times_exact():
    cfg = cfg_for(UNIT, t_end=0.3)
    x = cfg.cell_centers()
    r = run(cfg, SimState(x, np.sin(2 * np.pi * x), np.zeros_like(x), 0.0), n_out=3, keep_snapshots=True)
    assert [s.t for s in r.snapshots] == [0.0, 0.3 / 3, 0.3 * 2 / 3, 0.3]
    assert len(r.diagnostics) == 4


def test_snapshots_csv():
    x = np.array([0.25, 0.75])
    text = snapshots_csv([SimState(x, np.array([1.0, 2.0]), np.zeros(2), 0.0)])
    assert text == "x,t,U,V\n0.25,0.0,1.0,0.0\n0.75,0.0,2.0,0.0\n"
