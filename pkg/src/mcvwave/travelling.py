"""Travelling-wave reduction of the dimensionless system.

With xi = k x - w t the system

    alpha Gamma(U) U_t + V_x = 0,     Gamma(U) V_t + V + B(U) U_x = 0

becomes two ODEs in xi. The first integrates to the flux relation

    V = (w alpha / k) G(U) + c1,      G(U) = integral of Gamma,

and the second to the quadrature  integral A(U)/B_q(U) dU = xi + c2  with

    A(U)   = w^2 alpha Gamma(U)^2 - k^2 B(U),
    B_q(U) = w alpha G(U) + k c1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import ConfigError, ConvergenceError, DomainError, NoSolutionError
from .polynomial import Polynomial, real_roots
from .rational import ClosedFormExpr, integrate_rational


@dataclass(frozen=True)
class WaveFrame:
    k: float
    w: float
    c1: float = 0.0
    c2: float = 0.0

    def __post_init__(self):
        if self.k == 0:
            raise ConfigError("wavenumber k must be non-zero")

    @property
    def speed(self):
        return self.w / self.k

    def to_dict(self):
        return {"k": self.k, "w": self.w, "c1": self.c1, "c2": self.c2}


@dataclass(frozen=True)
class QuadratureProblem:
    numerator: Polynomial
    denominator: Polynomial


def build_quadrature(p, f):
    """Numerator and denominator of the travelling-wave quadrature."""
    if f.w == 0:
        raise ConfigError("w = 0 has no quadrature form; use the stationary solution")
    gam = p.gamma_poly()
    num = (gam * gam).scale(f.w**2 * p.alpha) - p.beta_poly().scale(f.k**2)
    den = gam.integ().scale(f.w * p.alpha) + f.k * f.c1
    return QuadratureProblem(num, den)


def flux_from_temperature(U, p, f):
    """V = (w alpha / k) G(U) + c1."""
    G = p.gamma_poly().integ()
    return (f.w * p.alpha / f.k) * G(U) + f.c1


@dataclass(frozen=True)
class ImplicitProfile:
    """Phi(U) = xi + c2 on a root-free interval of the denominator."""

    phi: ClosedFormExpr
    domain: tuple
    monotone: int
    problem: QuadratureProblem | None = None


def _root_free_interval(den, u_seed, num=None):
    """Interval around ``u_seed`` free of denominator roots.

    Roots of ``num`` (folds where U' is infinite) also end a branch when given.
    """
    roots = [r for r, _ in real_roots(den).real_roots] if den.degree > 0 else []
    if any(r == u_seed for r in roots):
        raise DomainError(f"seed U={u_seed!r} is a root of the denominator")
    if num is not None and num.degree > 0:
        roots += [r for r, _ in real_roots(num).real_roots if r != u_seed]
    lo = max((r for r in roots if r < u_seed), default=-math.inf)
    hi = min((r for r in roots if r > u_seed), default=math.inf)
    return (lo, hi)


def _default_seed(den):
    roots = sorted(r for r, _ in real_roots(den).real_roots) if den.degree > 0 else []
    if len(roots) >= 2:
        return 0.5 * (roots[0] + roots[1])
    if len(roots) == 1:
        return roots[0] + 1.0
    return 0.0


def _interior_samples(domain, n=257):
    lo, hi = domain
    if math.isinf(lo) and math.isinf(hi):
        return np.linspace(-50.0, 50.0, n)
    if math.isinf(lo):
        return hi - np.geomspace(1e-6, 1e3, n) * max(1.0, abs(hi))
    if math.isinf(hi):
        return lo + np.geomspace(1e-6, 1e3, n) * max(1.0, abs(lo))
    t = np.linspace(0.0, 1.0, n + 2)[1:-1]
    return lo + (hi - lo) * t


def implicit_profile(p, f, u_seed=None, phi=None):
    """Closed-form Phi = integral of A/B on the root-free branch containing ``u_seed``.

    The branch ends at denominator roots and at zeros of the numerator. Without
    a seed the first bounded interval between denominator roots is used (or
    the right half-line when there is a single root).
    """
    q = build_quadrature(p, f)
    if u_seed is None:
        u_seed = _default_seed(q.denominator)
    domain = _root_free_interval(q.denominator, float(u_seed), q.numerator)
    if not domain[0] < domain[1]:
        raise NoSolutionError("empty profile domain")
    if phi is None:
        phi = integrate_rational(q.numerator, q.denominator)
    us = _interior_samples(domain)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = q.numerator(us) / q.denominator(us)
    ratio = ratio[np.isfinite(ratio)]
    if ratio.size and np.all(ratio > 0):
        mono = 1
    elif ratio.size and np.all(ratio < 0):
        mono = -1
    else:
        mono = 0
    return ImplicitProfile(phi, domain, mono, q)


def _approach(edge, mid, n=80):
    """Points marching from ``mid`` towards ``edge`` (finite or infinite)."""
    if math.isinf(edge):
        step = math.copysign(1.0, edge) * max(1.0, abs(mid))
        # stop before overflowing; 2^1000 is far beyond any useful U
        return [mid + step * 2.0**j for j in range(-4, min(n, 1000) - 4)]
    return [edge + (mid - edge) * 2.0**-j for j in range(1, n)]


def _safe_phi(phi, u):
    try:
        return phi(u)
    except DomainError:
        return math.nan


def invert_profile(ip, xi, f):
    """Solve Phi(U) = xi + c2 on the profile's monotone branch.

    A bracket is found by marching from the middle of the domain towards the
    edge Phi moves to, then Brent's method narrows it to a few ulps and the
    closest double among the final candidates is returned.
    """
    if ip.monotone == 0:
        raise NoSolutionError("profile is not monotone on its domain")
    target = float(xi) + f.c2
    lo, hi = ip.domain
    if math.isinf(lo) and math.isinf(hi):
        mid = 0.0
    elif math.isinf(lo):
        mid = hi - max(1.0, abs(hi))
    elif math.isinf(hi):
        mid = lo + max(1.0, abs(lo))
    else:
        mid = 0.5 * (lo + hi)
    phi = ip.phi
    g_mid = _safe_phi(phi, mid) - target
    if g_mid == 0:
        return mid
    # phi increases towards hi when monotone > 0
    go_hi = (g_mid < 0) == (ip.monotone > 0)
    edge = hi if go_hi else lo
    a, ga = mid, g_mid
    bracket = None
    for u in _approach(edge, mid):
        if not (lo < u < hi):
            break
        gu = _safe_phi(phi, u) - target
        if not math.isfinite(gu):
            break
        if gu == 0:
            return u
        if (gu > 0) != (ga > 0):
            bracket = (a, u)
            break
        a, ga = u, gu
    if bracket is None:
        raise NoSolutionError(f"xi + c2 = {target!r} is outside the range of Phi on {ip.domain}")
    a, b = bracket
    u = optimize.brentq(lambda v: phi(v) - target, min(a, b), max(a, b), xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)
    # brentq stops within a few ulps; keep the best of u and its neighbours
    cands = [u, float(np.nextafter(u, -math.inf)), float(np.nextafter(u, math.inf))]
    cands = [c for c in cands if lo < c < hi]
    best = min(cands, key=lambda c: abs(_safe_phi(phi, c) - target))
    if not math.isfinite(phi(best)):
        raise ConvergenceError("inversion failed to produce a finite Phi")
    return best


@dataclass(frozen=True)
class WaveProfile:
    """A travelling-wave pair U(xi), V(xi) with the xi-interval it is valid on."""

    U_of_xi: Callable
    V_of_xi: Callable
    domain_xi: tuple
    kind: str
    family: str = ""
    constants: dict = field(default_factory=dict)
    soliton: bool | None = None

    def _check(self, xi):
        x = np.asarray(xi, dtype=float)
        lo, hi = self.domain_xi
        inside = (x > lo) & (x < hi)
        if not np.all(inside):
            bad = x[~inside].ravel()[0]
            raise DomainError(f"xi={bad!r} outside the profile domain {self.domain_xi}")
        return x

    def U(self, xi):
        x = self._check(xi)
        out = np.asarray(self.U_of_xi(x), dtype=float)
        return out if np.ndim(xi) else float(out)

    def V(self, xi):
        x = self._check(xi)
        out = np.asarray(self.V_of_xi(x), dtype=float)
        return out if np.ndim(xi) else float(out)

    def sample(self, xi):
        x = np.asarray(xi, dtype=float)
        U, V = self.U(x), self.V(x)
        if not (np.all(np.isfinite(U)) and np.all(np.isfinite(V))):
            raise DomainError("profile is not finite on the requested grid")
        return U, V


def profile_from_implicit(ip, p, f, family="implicit"):
    """Wrap an implicit profile as a WaveProfile by pointwise inversion."""
    lo, hi = ip.domain

    last = {}

    def U_of_xi(xi):
        # one-entry memo: V_of_xi right after U_of_xi on the same grid is free
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        key = (xi.shape, xi.tobytes())
        if last.get("key") != key:
            last["key"] = key
            last["U"] = np.array([invert_profile(ip, float(x), f) for x in xi.ravel()]).reshape(xi.shape)
        return last["U"].copy()

    def V_of_xi(xi):
        return flux_from_temperature(U_of_xi(xi), p, f)

    return WaveProfile(U_of_xi, V_of_xi, _phi_range(ip, f), "implicit-inverted", family)


def _phi_range(ip, f):
    """xi-interval swept by Phi over the profile domain.

    Phi is evaluated as close to each domain edge as marching allows, so the
    result is the range representable in double precision rather than the
    (often infinite) mathematical one.
    """
    lo, hi = ip.domain
    mid = _interior_samples(ip.domain, 3)[1]
    vals = []
    for edge in (lo, hi):
        v = ip.phi(mid)
        for u in _approach(edge, mid, 1100):
            if not (lo < u < hi):
                break
            g = _safe_phi(ip.phi, u)
            if not math.isfinite(g):
                break
            v = g
        vals.append(v)
    a, b = sorted(vals)
    return (a - f.c2, b - f.c2)


def fd_derivative(func, xi, h0=None, levels=40, domain=(-math.inf, math.inf)):
    """Five-point central difference with a per-point adaptive step.

    Steps h_j = h0 2^-j are tried. For each point the level minimising
    |D_j - D_{j+1}| + |D_{j+1} - D_{j+2}| + 1.5 eps max|f| / h_j is kept: the
    differences track the truncation error, the last term bounds the roundoff
    of the stencil. Refinement stops once the roundoff bound alone exceeds
    twice the best score at that point. h0 is rounded down to a power of two
    so the offsets x +- h are exact in floating point and the divided
    difference uses the true step.
    """
    x = np.asarray(xi, dtype=float)
    if h0 is None:
        h0 = 1e-1 * np.maximum(1.0, np.abs(x))
    h0 = np.broadcast_to(np.asarray(h0, dtype=float), x.shape).copy()
    lo, hi = domain
    room = np.minimum(x - lo, hi - x) / 2.5
    h0 = np.minimum(h0, room)
    if np.any(h0 <= 0):
        raise DomainError("finite-difference point on the domain boundary")
    h0 = np.exp2(np.floor(np.log2(h0))).ravel()
    xf = x.ravel()
    eps = np.finfo(float).eps
    n = xf.size
    D = np.full((levels, n), np.nan)
    R = np.full((levels, n), np.inf)
    best = np.full(n, np.inf)
    out = np.zeros(n)
    act = np.arange(n)
    for j in range(levels):
        if act.size == 0:
            break
        xa = xf[act]
        h = h0[act] * 2.0**-j
        fm2, fm1, fp1, fp2 = func(xa - 2 * h), func(xa - h), func(xa + h), func(xa + 2 * h)
        D[j, act] = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
        fmax = np.maximum.reduce([np.abs(fm2), np.abs(fm1), np.abs(fp1), np.abs(fp2)])
        # a stencil that sees no change at all is below the resolution of func
        # (f may carry cancellation error far above eps |f|); never pick it
        flat = (fm2 == fp2) & (fm1 == fp1) & (fm1 == fm2)
        R[j, act] = np.where(flat, np.inf, 1.5 * eps * fmax / h)
        if j >= 2:
            # two consecutive agreements, so a single lucky match at a coarse
            # step (stencil straddling a narrow feature) does not win
            sc = np.abs(D[j - 1, act] - D[j - 2, act]) + np.abs(D[j, act] - D[j - 1, act]) + R[j - 2, act]
            sc = np.where(np.isfinite(sc), sc, np.inf)
            better = sc < best[act]
            best[act] = np.where(better, sc, best[act])
            out[act] = np.where(better, D[j - 2, act], out[act])
            done = np.isfinite(best[act]) & (R[j, act] > 2.0 * best[act])
            act = act[~done]
    # flat everywhere: func is constant at every resolution tried
    out = np.where(np.isinf(best), D[0], out)
    return out.reshape(x.shape) if x.ndim else float(out[0])


def ode_residual(wp, p, f, xi_grid, scaled=False):
    """Max-norm residuals (r1, r2) of the travelling-wave ODEs along a grid.

    r1 = max |-w alpha Gamma(U) U' + k V'|
    r2 = max |-w Gamma(U) V' + V + k B(U) U'|
    with U', V' from adaptive five-point differences of the profile callables;
    the initial step is capped by the local grid spacing. With ``scaled`` each
    residual is divided by max(1, largest |term| of its equation on the grid),
    which is the meaningful measure for steep profiles.
    """
    xi = np.atleast_1d(np.asarray(xi_grid, dtype=float))
    U, V = wp.sample(xi)
    dom = wp.domain_xi
    h0 = 1e-1 * np.maximum(1.0, np.abs(xi))
    if xi.size > 1:
        # never start coarser than the grid: features it resolves stay resolved
        gaps = np.abs(np.diff(xi))
        near = np.minimum(np.append(gaps, np.inf), np.insert(gaps, 0, np.inf))
        h0 = np.where(near > 0, np.minimum(h0, near), h0)
    try:
        dU = fd_derivative(wp.U_of_xi, xi, h0=h0, domain=dom)
        dV = fd_derivative(wp.V_of_xi, xi, h0=h0, domain=dom)
    except DomainError as exc:
        raise DomainError(f"residual grid touches a profile singularity: {exc}") from exc
    if not (np.all(np.isfinite(dU)) and np.all(np.isfinite(dV))):
        raise DomainError("residual grid touches a profile singularity")
    gam = p.gamma_poly()(U)
    bet = p.beta_poly()(U)
    t1 = (-f.w * p.alpha * gam * dU, f.k * dV)
    t2 = (-f.w * gam * dV, V, f.k * bet * dU)
    r1 = float(np.max(np.abs(sum(t1))))
    r2 = float(np.max(np.abs(sum(t2))))
    if scaled:
        r1 /= max(1.0, max(float(np.max(np.abs(t))) for t in t1))
        r2 /= max(1.0, max(float(np.max(np.abs(t))) for t in t2))
    return r1, r2


def fmt_float(v):
    """Shortest round-trip decimal for a double."""
    v = float(v)
    if v == 0:
        return "0.0"
    return repr(v)


def profile_csv(wp, xi):
    """CSV text with header ``xi,U,V``."""
    U, V = wp.sample(xi)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["xi", "U", "V"])
    for a, b, c in zip(np.asarray(xi, dtype=float), U, V):
        w.writerow([fmt_float(a), fmt_float(b), fmt_float(c)])
    return buf.getvalue()
