"""Finite-volume solver for the dimensionless system

    alpha Gamma(U) U_t + V_x = 0,      Gamma(U) V_t + V + B(U) U_x = 0

written as the quasilinear pair

    U_t + a(U) V_x = 0,   V_t + b(U) U_x = -V/Gamma(U),
    a = 1/(alpha Gamma),  b = B/Gamma,  signal speed c = sqrt(a b).

Hyperbolic part: MUSCL (MC-limited) reconstruction, central interface
averages with local Lax-Friedrichs dissipation, Heun (SSP-RK2) in time.
Relaxation: V <- V exp(-dt/Gamma(U)), Strang-split around the hyperbolic step.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, HyperbolicityError, SolverFailure
from .travelling import fmt_float

NGHOST = 2


@dataclass(frozen=True)
class SimConfig:
    nx: int
    x_min: float
    x_max: float
    cfl: float
    t_end: float
    bc: str
    params: object
    # fixed bc: ((U_left, V_left), (U_right, V_right)), scalars or per-ghost
    # arrays, or a callable t -> that pair
    bc_values: object = None
    max_steps: int = 10_000_000
    max_wall: float | None = None  # seconds
    # divergence guard: fail once max(|U|, |V|) exceeds this multiple of its
    # initial value (plus one)
    max_growth: float = 1e8

    def __post_init__(self):
        if int(self.nx) != self.nx or self.nx < 16:
            raise ConfigError("nx must be an integer >= 16")
        if not 0 < self.cfl < 1:
            raise ConfigError(f"cfl must lie in (0, 1), got {self.cfl!r}")
        if not self.x_min < self.x_max:
            raise ConfigError("x_min must be below x_max")
        if not self.t_end >= 0:
            raise ConfigError("t_end must be non-negative")
        if self.bc not in ("periodic", "fixed"):
            raise ConfigError(f"bc must be 'periodic' or 'fixed', got {self.bc!r}")
        if not self.max_growth > 0:
            raise ConfigError("max_growth must be positive")
        if self.bc == "fixed" and self.bc_values is None:
            raise ConfigError("fixed bc needs bc_values")

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.nx

    def cell_centers(self):
        return self.x_min + self.dx * (np.arange(self.nx) + 0.5)

    def to_dict(self):
        return {
            "nx": self.nx, "x_min": self.x_min, "x_max": self.x_max, "cfl": self.cfl,
            "t_end": self.t_end, "bc": self.bc, "params": self.params.to_dict(),
            "bc_values": None if self.bc_values is None or callable(self.bc_values)
            else [[np.asarray(c, dtype=float).tolist() for c in side] for side in self.bc_values],
            "bc_time_dependent": callable(self.bc_values),
            "max_steps": self.max_steps, "max_growth": self.max_growth,
        }


@dataclass(frozen=True)
class SimState:
    x: np.ndarray
    U: np.ndarray
    V: np.ndarray
    t: float

    def __post_init__(self):
        if not (self.x.shape == self.U.shape == self.V.shape):
            raise ValueError("x, U and V must have equal length")
        if not (np.all(np.isfinite(self.U)) and np.all(np.isfinite(self.V))):
            raise ValueError("state contains non-finite values")


def _edge_value(g, edge, inward):
    """Value of g as close to a finite domain edge as floating point allows."""
    x = edge
    for _ in range(64):
        x = np.nextafter(x, inward)
        try:
            v = float(g(x))
        except DomainError:
            continue
        if math.isfinite(v):
            return v
    raise DomainError(f"profile has no finite limit at xi={edge!r}")


def init_from_profile(cfg, wp, f, t0=0.0, fallback=True):
    """Sample a travelling-wave profile at xi = k x - w t0 on the cell centers.

    Cells whose xi falls outside the profile domain take the profile's value at
    the nearest domain edge when ``fallback`` is set and the profile is a
    soliton (the edge value is then its asymptotic constant); otherwise a
    DomainError is raised.
    """
    x = cfg.cell_centers()
    xi = f.k * x - f.w * t0
    lo, hi = wp.domain_xi
    inside = (xi > lo) & (xi < hi)
    U = np.empty_like(xi)
    V = np.empty_like(xi)
    if np.any(inside):
        U[inside], V[inside] = wp.sample(xi[inside])
    if not np.all(inside):
        if not (fallback and wp.soliton):
            bad = xi[~inside][0]
            raise DomainError(f"cell at xi={bad!r} lies outside the profile domain {wp.domain_xi}")
        below, above = xi <= lo, xi >= hi
        if np.any(below):
            U[below], V[below] = _edge_value(wp.U, lo, hi), _edge_value(wp.V, lo, hi)
        if np.any(above):
            U[above], V[above] = _edge_value(wp.U, hi, lo), _edge_value(wp.V, hi, lo)
    return SimState(x, U, V, float(t0))


def ghost_centers(x_min, x_max, nx):
    """Centers of the NGHOST ghost cells on each side, in increasing x."""
    dx = (x_max - x_min) / nx
    j = np.arange(NGHOST, 0, -1) - 0.5
    return x_min - dx * j, x_max + dx * j[::-1]


def profile_bc_values(wp, f, x_min, x_max, nx, t=0.0):
    """Ghost-cell states ((U, V) left, (U, V) right) from the profile at time t.

    Each side is a pair of arrays over its ghost cells. Positions are clamped
    into the profile domain, so soliton tails give their asymptotic constants.
    """
    lo, hi = wp.domain_xi
    a, b = float(np.nextafter(lo, hi)), float(np.nextafter(hi, lo))
    out = []
    for xs in ghost_centers(x_min, x_max, nx):
        xi = np.clip(f.k * xs - f.w * t, a, b)
        out.append((wp.U(xi), wp.V(xi)))
    return tuple(out)


def profile_bc(wp, f, x_min, x_max, nx):
    """Time-dependent ghost states following the travelling profile."""
    memo = {}

    def bc(t):
        if t not in memo:
            if len(memo) > 4:
                memo.clear()
            memo[t] = profile_bc_values(wp, f, x_min, x_max, nx, t)
        return memo[t]

    return bc


def _coefficients(U, p):
    gam = p.gamma_poly()(U)
    bet = p.beta_poly()(U)
    return gam, bet


def _speeds(U, p, first_cell=0):
    gam, bet = _coefficients(U, p)
    zero = np.flatnonzero(gam == 0)
    if zero.size:
        i = int(zero[0])
        raise HyperbolicityError(f"Gamma(U) = 0 at cell {i + first_cell} (U={U[i]!r}): unbounded signal speed", i + first_cell)
    # B(U) within rounding of zero (e.g. at U = -beta0/beta1) counts as zero
    absU = np.abs(U)
    scale = sum(abs(b) * absU**i for i, b in enumerate(p.beta))
    bet = np.where(np.abs(bet) <= 8 * np.finfo(float).eps * scale, 0.0, bet)
    rad = bet / (p.alpha * gam * gam)
    neg = np.flatnonzero(rad < 0)
    if neg.size:
        i = int(neg[0])
        raise HyperbolicityError(f"B(U)/alpha < 0 at cell {i + first_cell} (U={U[i]!r}): hyperbolicity lost", i + first_cell)
    return np.sqrt(rad)


def max_signal_speed(state, p):
    """max_i sqrt(B(U_i) / (alpha Gamma(U_i)^2))."""
    return float(np.max(_speeds(state.U, p)))


def _pad(arr, cfg, which, t):
    if cfg.bc == "periodic":
        return np.concatenate([arr[-NGHOST:], arr, arr[:NGHOST]])
    bv = cfg.bc_values(t) if callable(cfg.bc_values) else cfg.bc_values
    (ul, vl), (ur, vr) = bv
    left, right = (ul, ur) if which == "U" else (vl, vr)
    left = np.broadcast_to(np.asarray(left, dtype=float), (NGHOST,))
    right = np.broadcast_to(np.asarray(right, dtype=float), (NGHOST,))
    return np.concatenate([left, arr, right])


def _mc_slope(a, b):
    """Monotonized-central limited slope from backward/forward differences."""
    m = np.minimum(np.minimum(2 * np.abs(a), 2 * np.abs(b)), 0.5 * np.abs(a + b))
    return np.where(a * b > 0, np.sign(a) * m, 0.0)


def _interface_states(q):
    """Left/right MUSCL states at the nx+1 interfaces of a padded array."""
    d = np.diff(q)
    slope = _mc_slope(d[:-1], d[1:])  # for padded cells 1 .. n-2
    qc = q[1:-1]
    right_face = qc + 0.5 * slope  # state on the right face of each cell
    left_face = qc - 0.5 * slope
    # interfaces between padded cells j and j+1, for j = 1 .. n-3
    return right_face[:-1], left_face[1:]


def _rhs(U, V, cfg, p, t):
    """Semi-discrete hyperbolic operator (dU/dt, dV/dt) without the source."""
    Up, Vp = _pad(U, cfg, "U", t), _pad(V, cfg, "V", t)
    UL, UR = _interface_states(Up)
    VL, VR = _interface_states(Vp)
    # entry m is the face between padded cells m+1 and m+2; with two ghosts
    # the first nx+1 entries are exactly the faces of the real cells
    n = cfg.nx + 1
    UL, UR, VL, VR = UL[:n], UR[:n], VL[:n], VR[:n]
    # dissipation speed from the two adjacent cells, the same speeds that set dt
    cc = _speeds(Up[NGHOST - 1:NGHOST + cfg.nx + 1], p)
    cf = np.maximum(cc[:-1], cc[1:])
    gam, bet = _coefficients(U, p)
    a = 1.0 / (p.alpha * gam)
    b = bet / gam
    Vhat = 0.5 * (VL + VR)
    Uhat = 0.5 * (UL + UR)
    dissU = 0.5 * cf * (UR - UL)
    dissV = 0.5 * cf * (VR - VL)
    dx = cfg.dx
    dU = -(a * np.diff(Vhat) - np.diff(dissU)) / dx
    dV = -(b * np.diff(Uhat) - np.diff(dissV)) / dx
    return dU, dV


def _relax(U, V, dt, p):
    gam = p.gamma_poly()(U)
    with np.errstate(over="ignore"):
        return V * np.exp(-dt / gam)


def stable_dt(state, cfg):
    c = max_signal_speed(state, cfg.params)
    remaining = cfg.t_end - state.t
    if c == 0.0:
        return remaining
    return min(cfg.cfl * cfg.dx / c, remaining)


def step(state, cfg, dt=None):
    """One Strang step: half relaxation, Heun hyperbolic step, half relaxation."""
    p = cfg.params
    if dt is None:
        dt = stable_dt(state, cfg)
    U, V = state.U, state.V
    V = _relax(U, V, 0.5 * dt, p)
    k1U, k1V = _rhs(U, V, cfg, p, state.t)
    U1, V1 = U + dt * k1U, V + dt * k1V
    k2U, k2V = _rhs(U1, V1, cfg, p, state.t + dt)
    U = 0.5 * (U + U1 + dt * k2U)
    V = 0.5 * (V + V1 + dt * k2V)
    V = _relax(U, V, 0.5 * dt, p)
    t = state.t + dt
    bad = np.flatnonzero(~(np.isfinite(U) & np.isfinite(V)))
    if bad.size:
        i = int(bad[0])
        raise SolverFailure(f"non-finite value at cell {i}, t={t!r}", i, t)
    return SimState(state.x, U, V, t)


def shape_error(state, wp, f):
    """Relative L2 distance ||U - U_exact|| / ||U_exact|| at the state's time."""
    xi = f.k * state.x - f.w * state.t
    lo, hi = wp.domain_xi
    m = (xi > lo) & (xi < hi)
    Ue = wp.U(xi[m])
    den = float(np.sqrt(np.sum(Ue * Ue)))
    num = float(np.sqrt(np.sum((state.U[m] - Ue) ** 2)))
    return num / den if den > 0 else num


def diagnostics(state, wp=None, f=None):
    dx = state.x[1] - state.x[0]
    d = {
        "t": state.t,
        "l2_U": float(np.sqrt(dx * np.sum(state.U**2))),
        "l2_V": float(np.sqrt(dx * np.sum(state.V**2))),
        "min_U": float(state.U.min()), "max_U": float(state.U.max()),
        "min_V": float(state.V.min()), "max_V": float(state.V.max()),
    }
    if wp is not None:
        d["shape_error"] = shape_error(state, wp, f)
    return d


@dataclass
class RunResult:
    state: SimState
    steps: int
    diagnostics: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    wall: float = 0.0


def run(cfg, init, wp=None, f=None, n_out=1, keep_snapshots=False):
    """Advance ``init`` to cfg.t_end; diagnostics at n_out evenly spaced times.

    Output times are hit exactly by shortening the step before each one.
    """
    if n_out < 1:
        raise ConfigError("n_out must be >= 1")
    t0 = time.perf_counter()
    state = init
    outs = [init.t + (cfg.t_end - init.t) * (j + 1) / n_out for j in range(n_out)]
    res = RunResult(state, 0)
    res.diagnostics.append(diagnostics(state, wp, f))
    if keep_snapshots:
        res.snapshots.append(state)
    if cfg.t_end <= init.t:
        res.wall = time.perf_counter() - t0
        return res
    limit = cfg.max_growth * (1.0 + max(float(np.max(np.abs(init.U))), float(np.max(np.abs(init.V)))))
    for t_out in outs:
        while state.t < t_out:
            if res.steps >= cfg.max_steps:
                raise SolverFailure(f"step budget of {cfg.max_steps} exhausted at t={state.t!r}", None, state.t)
            if cfg.max_wall is not None and time.perf_counter() - t0 > cfg.max_wall:
                raise SolverFailure(f"wall-clock budget of {cfg.max_wall}s exhausted at t={state.t!r} after {res.steps} steps", None, state.t)
            dt = min(stable_dt(state, cfg), t_out - state.t)
            state = step(state, cfg, dt)
            big = np.flatnonzero((np.abs(state.U) > limit) | (np.abs(state.V) > limit))
            if big.size:
                i = int(big[0])
                raise SolverFailure(f"solution diverged at cell {i}, t={state.t!r} (|U|, |V| above {limit:.3g})", i, state.t)
            if t_out - state.t <= 1e-14 * max(1.0, abs(t_out)):
                state = SimState(state.x, state.U, state.V, t_out)
            res.steps += 1
        res.diagnostics.append(diagnostics(state, wp, f))
        if keep_snapshots:
            res.snapshots.append(state)
    res.state = state
    res.wall = time.perf_counter() - t0
    return res


def snapshots_csv(states):
    """CSV text ``x,t,U,V`` with one block of rows per snapshot."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "t", "U", "V"])
    for s in states:
        for x, u, v in zip(s.x, s.U, s.V):
            w.writerow([fmt_float(x), fmt_float(s.t), fmt_float(u), fmt_float(v)])
    return buf.getvalue()
