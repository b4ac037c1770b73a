"""Explicit travelling-wave families of the polynomial-coefficient system.

* (m, n) = (0, 0): exponential profile.
* (m, n) = (1, 1): implicit profile for the special c1, and the stationary
  (w = 0) square-root and constant branches.
* (m, n) = (1, 2): tanh/sech soliton (c~1 > 0) and tan/sec branch (c~1 < 0).
* (m, n) = (3, 6): two-artanh soliton train.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ConstraintViolation, DomainError
from .material import DimensionlessParams
from .polynomial import Polynomial, real_roots
from .rational import ArtanhTerm, ClosedFormExpr, LogTerm
from .travelling import (
    ImplicitProfile,
    WaveFrame,
    WaveProfile,
    _interior_samples,
    _phi_range,
    build_quadrature,
    flux_from_temperature,
    invert_profile,
)

WHOLE_LINE = (-math.inf, math.inf)


def _require_orders(p, m, n):
    if p.m != m or p.n != n:
        raise ConfigError(f"family needs (m, n) = ({m}, {n}), got ({p.m}, {p.n})")


# --------------------------------------------------------------------------
# (0, 0)


def solve_case00(p, f, sign=1):
    """U = [sign*exp(w a g0 (xi+c2)/(w^2 a g0^2 - k^2 b0)) - k c1]/(w a g0)."""
    _require_orders(p, 0, 0)
    if sign not in (1, -1):
        raise ConfigError("sign must be +1 or -1")
    g0, b0, a = p.gamma[0], p.beta[0], p.alpha
    wag = f.w * a * g0
    if wag == 0:
        raise ConstraintViolation("w*alpha*gamma0 vanishes: the quadrature is degenerate")
    den = f.w**2 * a * g0**2 - f.k**2 * b0
    if den == 0:
        raise ConstraintViolation("w^2 alpha gamma0^2 = k^2 beta0: the integrand vanishes identically")
    rate = wag / den

    def U(xi):
        return (sign * np.exp(rate * (np.asarray(xi, dtype=float) + f.c2)) - f.k * f.c1) / wag

    def V(xi):
        return flux_from_temperature(U(xi), p, f)

    consts = {"rate": rate, "sign": sign, "w_alpha_gamma0": wag}
    return WaveProfile(U, V, WHOLE_LINE, "explicit-closed-form", "case00", consts)


# --------------------------------------------------------------------------
# (1, 1)


def c1_case11(p, k, w):
    """The flux constant w alpha gamma0^2/(2 k gamma1) that makes B a perfect square."""
    return w * p.alpha * p.gamma[0] ** 2 / (2.0 * k * p.gamma[1])


def implicit_case11(p, f, u_seed=None):
    """Implicit profile for m = n = 1 with c1 = w alpha gamma0^2/(2 k gamma1).

    Phi(U) = 2 g1 w U - (2 g1 k^2/(w a)) [ (b1/g1^2) ln(g0 + g1 U)
                                          - (b0 g1 - b1 g0)/(g1^2 (g0 + g1 U)) ]

    valid on the side of U = -g0/g1 where g0 + g1 U > 0. The branch is cut at
    zeros of the quadrature numerator; by default the piece adjacent to
    U = -g0/g1 is returned, otherwise the piece containing ``u_seed``.
    """
    _require_orders(p, 1, 1)
    g0, g1 = p.gamma
    b0, b1 = p.beta
    a, k, w = p.alpha, f.k, f.w
    if g1 == 0:
        raise ConstraintViolation("gamma1 must be non-zero")
    if w == 0:
        raise ConfigError("w = 0: use stationary_case11")
    c1 = c1_case11(p, k, w)
    if not math.isclose(f.c1, c1, rel_tol=1e-12, abs_tol=1e-300):
        raise ConstraintViolation(f"this family requires c1 = {c1!r}, got {f.c1!r}", suggestion=f"c1={c1!r}")
    pre = 2.0 * g1 * k**2 / (w * a)
    logs, const = (), 0.0
    log_coef = -pre * b1 / g1**2
    if log_coef != 0.0:
        # ln(g0 + g1 U) = ln|g1| + ln|U + g0/g1|
        logs = (LogTerm(log_coef, -g0 / g1),)
        const = log_coef * math.log(abs(g1))
    rnum = pre * (b0 * g1 - b1 * g0) / g1**2
    rational = (Polynomial([rnum]), Polynomial([g0, g1])) if rnum != 0.0 else None
    phi = ClosedFormExpr(Polynomial([0.0, 2.0 * g1 * w]), logs, (), (), rational, const)
    root = -g0 / g1
    side = (root, math.inf) if g1 > 0 else (-math.inf, root)
    q = build_quadrature(p, f)
    folds = sorted(r for r, _ in real_roots(q.numerator).real_roots if side[0] < r < side[1]) if q.numerator.degree > 0 else []
    cuts = [side[0], *folds, side[1]]
    if u_seed is None:
        i = 0 if g1 > 0 else len(cuts) - 2
    else:
        if not side[0] < u_seed < side[1]:
            raise DomainError(f"seed U={u_seed!r} violates gamma0 + gamma1 U > 0")
        i = max(j for j in range(len(cuts) - 1) if cuts[j] <= u_seed)
        if u_seed in folds:
            raise DomainError(f"seed U={u_seed!r} is a fold of the profile")
    domain = (cuts[i], cuts[i + 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        r = phi.derivative(_interior_samples(domain))
    mono = 1 if np.all(r > 0) else (-1 if np.all(r < 0) else 0)
    return ImplicitProfile(phi, domain, mono, q)


def check_log_domain(ip, U):
    """Raise DomainError when U lies outside an implicit profile's domain."""
    x = np.asarray(U, dtype=float)
    lo, hi = ip.domain
    if not np.all((x > lo) & (x < hi)):
        raise DomainError(f"U outside the profile domain {ip.domain} (log argument not positive)")
    return ip.phi(U)


def stationary_case11(p, k, c3, c4, sign=1, c5=None):
    """w = 0 solutions for m = n = 1.

    c3 = 0 gives constants (U = -b0/b1 by default, or U = c5) with V = 0.
    Otherwise V = c3 and
    U = [-k b0 + sign*sqrt(k^2 b0^2 - 2 k b1 (c3 xi + c4))]/(k b1)
    on the half-line where the radicand is non-negative.
    """
    _require_orders(p, 1, 1)
    b0, b1 = p.beta
    if k == 0:
        raise ConfigError("k must be non-zero")
    if c3 == 0:
        if c5 is None:
            if b1 == 0:
                raise ConstraintViolation("beta1 = 0: no equilibrium at B(U) = 0; pass c5")
            u0 = -b0 / b1
        else:
            u0 = float(c5)

        def Uc(xi):
            return np.full(np.shape(xi), u0, dtype=float)

        def Vc(xi):
            return np.zeros(np.shape(xi), dtype=float)

        return WaveProfile(Uc, Vc, WHOLE_LINE, "stationary", "case11-stationary", {"U": u0, "V": 0.0}, True)
    if b1 == 0:
        raise ConstraintViolation("the square-root branch requires beta1 != 0")
    if sign not in (1, -1):
        raise ConfigError("sign must be +1 or -1")
    # radicand R(xi) = k^2 b0^2 - 2 k b1 c4 - 2 k b1 c3 xi >= 0
    slope = -2.0 * k * b1 * c3
    xi_star = float(k * k * b0 * b0 - 2.0 * k * b1 * c4) / (2.0 * k * b1 * c3)
    if slope > 0:
        domain = (float(np.nextafter(xi_star, -math.inf)), math.inf)
    else:
        domain = (-math.inf, float(np.nextafter(xi_star, math.inf)))

    def U(xi):
        x = np.asarray(xi, dtype=float)
        rad = k * k * b0 * b0 - 2.0 * k * b1 * (c3 * x + c4)
        rad = np.where((rad < 0) & (np.abs(x - xi_star) <= 4 * np.spacing(abs(xi_star) + 1)), 0.0, rad)
        if np.any(rad < 0):
            raise DomainError("stationary branch evaluated where the radicand is negative")
        return (-k * b0 + sign * np.sqrt(rad)) / (k * b1)

    def V(xi):
        return np.full(np.shape(xi), float(c3))

    consts = {"c3": c3, "c4": c4, "sign": sign, "xi_branch_point": xi_star}
    return WaveProfile(U, V, domain, "stationary", "case11-stationary", consts)


# --------------------------------------------------------------------------
# (1, 2)


def soliton_constraints_n2(gamma0, gamma1, alpha, k, w):
    """(beta1, beta2) that reduce the quadrature to a single kernel."""
    if k == 0:
        raise ConfigError("k must be non-zero")
    beta2 = w * w * alpha * gamma1 * gamma1 / (k * k)
    beta1 = 2.0 * w * w * alpha * gamma1 * gamma0 / (k * k)
    return beta1, beta2


def c_tilde(gamma0, gamma1, alpha, k, w, c1):
    """(g0/g1)^2 - 2 k c1/(w alpha g1); its sign picks tanh (>0) or tan (<0)."""
    if gamma1 == 0 or w == 0:
        raise ConfigError("c~1 needs gamma1 != 0 and w != 0")
    return (gamma0 / gamma1) ** 2 - 2.0 * k * c1 / (w * alpha * gamma1)


@dataclass(frozen=True)
class TanhSolitonParams:
    c1_tilde: float
    amp: float
    offset: float
    A_rate: float
    B_amp: float
    c2: float

    def to_dict(self):
        return dict(self.__dict__)


def _n2_check(p, f, strict):
    _require_orders(p, 1, 2)
    g0, g1 = p.gamma
    if g1 == 0:
        raise ConstraintViolation("gamma1 must be non-zero")
    if f.w == 0:
        raise ConfigError("w must be non-zero")
    if strict:
        b1, b2 = soliton_constraints_n2(g0, g1, p.alpha, f.k, f.w)
        for got, want, name in ((p.beta[1], b1, "beta1"), (p.beta[2], b2, "beta2")):
            if not math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-300):
                raise ConstraintViolation(f"{name} = {got!r} violates the soliton constraint ({want!r})")
    K = f.k**2 * p.beta[0] - f.w**2 * p.alpha * g0**2
    if K == 0:
        raise ConstraintViolation("k^2 beta0 = w^2 alpha gamma0^2: degenerate rate")
    return g0, g1, K


def tanh_soliton_params(p, f, strict=True):
    g0, g1, K = _n2_check(p, f, strict)
    ct = c_tilde(g0, g1, p.alpha, f.k, f.w, f.c1)
    if not ct > 0:
        raise ConstraintViolation(f"c~1 = {ct!r} <= 0: no tanh soliton", suggestion="n2-tan")
    amp = math.sqrt(ct)
    A = f.w * p.alpha * g1 * amp / (2.0 * K)
    B = f.w * p.alpha * g1 * ct / (2.0 * f.k)
    return TanhSolitonParams(ct, amp, -g0 / g1, A, B, f.c2)


def build_tanh_soliton(p, f, strict=True):
    """U = sqrt(c~1) tanh(A(xi+c2)) - g0/g1,  V = -B sech^2(A(xi+c2))."""
    tp = tanh_soliton_params(p, f, strict)

    def U(xi):
        return tp.amp * np.tanh(tp.A_rate * (np.asarray(xi, dtype=float) + tp.c2)) + tp.offset

    def V(xi):
        # sech^2 s = 4 e^{-2|s|} / (1 + e^{-2|s|})^2 without overflow
        e = np.exp(-2.0 * np.abs(tp.A_rate * (np.asarray(xi, dtype=float) + tp.c2)))
        return -tp.B_amp * 4.0 * e / (1.0 + e) ** 2

    return WaveProfile(U, V, WHOLE_LINE, "explicit-closed-form", "n2-tanh", tp.to_dict(), True)


def build_tan_solution(p, f, strict=True):
    """U = sqrt(-c~1) tan(A(xi+c2)) - g0/g1,  V = B sec^2(A(xi+c2)) on one period."""
    g0, g1, K = _n2_check(p, f, strict)
    ct = c_tilde(g0, g1, p.alpha, f.k, f.w, f.c1)
    if not ct < 0:
        raise ConstraintViolation(f"c~1 = {ct!r} >= 0: no tan branch", suggestion="n2-tanh")
    amp = math.sqrt(-ct)
    A = f.w * p.alpha * g1 * amp / (2.0 * (f.w**2 * p.alpha * g0**2 - f.k**2 * p.beta[0]))
    B = -ct * f.w * p.alpha * g1 / (2.0 * f.k)
    half = math.pi / (2.0 * abs(A))
    domain = (-half - f.c2, half - f.c2)

    def U(xi):
        return amp * np.tan(A * (np.asarray(xi, dtype=float) + f.c2)) - g0 / g1

    def V(xi):
        return B / np.cos(A * (np.asarray(xi, dtype=float) + f.c2)) ** 2

    consts = {"c1_tilde": ct, "amp": amp, "offset": -g0 / g1, "A_rate": A, "B_amp": B, "c2": f.c2}
    return WaveProfile(U, V, domain, "explicit-closed-form", "n2-tan", consts, False)


# --------------------------------------------------------------------------
# (3, 6)


@dataclass(frozen=True)
class TrainParams:
    """Root structure, coefficients and residues of the two-artanh train.

    Residues are those of N(U)/[U(U-b1)(U-b2)(U-b3)] with y = U - b1/2:
    A0 at y = +B1 (U = b1), A1 at y = -B1 (U = 0),
    A2 at y = +B2 (U = b3), A3 at y = -B2 (U = b2).
    """

    b1: float
    b2: float
    b3: float
    c0: float
    B1: float
    B2: float
    gamma: tuple
    beta: tuple
    A0: float
    A1: float
    A2: float
    A3: float
    y_L: float
    D: tuple
    alpha: float
    k: float
    w: float

    def params(self):
        return DimensionlessParams(self.alpha, self.beta, self.gamma)

    def to_dict(self):
        d = dict(self.__dict__)
        d["gamma"] = list(self.gamma)
        d["beta"] = list(self.beta)
        d["D"] = list(self.D)
        return d


def train_gammas(b1, b2, gamma3):
    c0 = gamma3 / 4.0
    b3 = b1 - b2
    g0 = -c0 * b1 * b2 * b3
    g1 = 2.0 * c0 * (b1 * b2 + b1 * b3 + b2 * b3)
    g2 = -3.0 * c0 * (b1 + b2 + b3)
    return c0, b3, (g0, g1, g2, gamma3)


def train_high_betas(gamma, alpha, k, w):
    _, g1, g2, g3 = gamma
    s = w * w * alpha / (k * k)
    return s * (g2 * g2 + 2.0 * g1 * g3), 2.0 * s * g2 * g3, s * g3 * g3


def _quartic_roots(b1, b2, b3):
    return (b1, 0.0, b3, b2)  # order of A0, A1, A2, A3


def _pi_prime(r, b1, b2, b3):
    roots = (0.0, b1, b2, b3)
    out = 1.0
    hit = False
    for s in roots:
        if s == r and not hit:
            hit = True
            continue
        out *= r - s
    return out


def train_residues(gamma, beta, alpha, k, w, b1, b2, b3):
    """Residues of N/U(U-b1)(U-b2)(U-b3) at (b1, 0, b3, b2) plus N's low coefficients."""
    gam = Polynomial(gamma)
    N = (gam * gam).scale(w * w * alpha) - Polynomial(beta).scale(k * k)
    res = tuple(N(r) / _pi_prime(r, b1, b2, b3) for r in _quartic_roots(b1, b2, b3))
    return res, N


def beta0_from_A0(b1, b2, gamma3, alpha, k, w, A0):
    """beta0 giving residue A0 at U = b1 once A0 + A1 = 0 is imposed."""
    c0, b3, gamma = train_gammas(b1, b2, gamma3)
    # A1 = N(0)/(-b1 b2 b3) = -A0  =>  D0 = A0 b1 b2 b3
    return (w * w * alpha * gamma[0] ** 2 - A0 * b1 * b2 * b3) / (k * k)


def train_closure(b1, b2, gamma3, alpha, k, w, beta0, A2=None):
    """Solve the residue conditions for (beta1, beta2, beta3).

    Conditions: A0 + A1 = 0, A2 + A3 = 0 and A0 = A2 (or A2 = the given
    value). Each residue is affine in (beta1, beta2, beta3), so this is a 3x3
    linear solve.
    """
    c0, b3, gamma = train_gammas(b1, b2, gamma3)
    hi = train_high_betas(gamma, alpha, k, w)

    def residues(b123):
        beta = (beta0, *b123, *hi)
        return np.array(train_residues(gamma, beta, alpha, k, w, b1, b2, b3)[0])

    def conds(b123):
        a = residues(b123)
        third = a[0] - a[2] if A2 is None else a[2] - A2
        return np.array([a[0] + a[1], a[2] + a[3], third])

    base = conds((0.0, 0.0, 0.0))
    M = np.column_stack([conds(e) - base for e in np.eye(3)])
    return tuple(float(v) for v in np.linalg.solve(M, -base))


def alternate_closure(b1, b2, gamma3, alpha, k, w, beta0):
    """A variant closure for (beta1, beta2, beta3): +2 beta0/b2 in beta1 and the
    opposite sign on beta3.

    Kept only for diagnostics: these values do not cancel the residue pairs.
    """
    c0 = gamma3 / 4.0
    s = c0 * c0 * w * w * alpha / (k * k)
    beta1 = -2.0 * s * b1 * b2 * (3 * b1 - 2 * b2) * (b1 * b1 - b2 * b2) + 2.0 * beta0 / b2
    beta2 = 2.0 * s * (2 * b1**4 + 9 * b1**3 * b2 - 6 * b1**2 * b2**2 - 5 * b1 * b2**3 + 2 * b2**4) + 2.0 * beta0 / (b1 * b2)
    beta3 = 8.0 * s * b1 * (3 * b1 - 2 * b2) * (b1 + 2 * b2)
    return beta1, beta2, beta3


def derived_closure(b1, b2, gamma3, alpha, k, w, beta0):
    """Closed-form solution of A0 + A1 = 0, A2 + A3 = 0, A0 = A2 (re-derived)."""
    c0 = gamma3 / 4.0
    s = c0 * c0 * w * w * alpha / (k * k)
    beta1 = -2.0 * s * b1 * b2 * (b1**3 + 2 * b1**2 * b2 - 5 * b1 * b2**2 + 2 * b2**3) - 2.0 * beta0 / b2
    beta2 = 2.0 * s * (2 * b1**4 + 9 * b1**3 * b2 - 6 * b1**2 * b2**2 - 5 * b1 * b2**3 + 2 * b2**4) + 2.0 * beta0 / (b1 * b2)
    beta3 = -8.0 * s * b1 * (3 * b1 - 2 * b2) * (b1 + 2 * b2)
    return beta1, beta2, beta3


def train_constraints_n6(b1, b2, gamma3, alpha, k, w, beta0, A2=None):
    """Full coefficient set of the m = 3, n = 6 soliton train."""
    if k == 0 or w == 0 or gamma3 == 0:
        raise ConfigError("k, w and gamma3 must be non-zero")
    if b1 == 0 or b2 == 0 or b1 == b2:
        raise ConfigError("need b1 != 0, b2 != 0 and b1 != b2")
    c0, b3, gamma = train_gammas(b1, b2, gamma3)
    B1, B2 = b1 / 2.0, b1 / 2.0 - b2
    if B1 * B1 == B2 * B2:
        raise ConstraintViolation("B1^2 = B2^2: coincident symmetric roots")
    if len({0.0, b1, b2, b3}) < 4:
        raise ConstraintViolation("denominator roots must be distinct")
    b123 = train_closure(b1, b2, gamma3, alpha, k, w, beta0, A2)
    beta = (float(beta0), *b123, *train_high_betas(gamma, alpha, k, w))
    res, N = train_residues(gamma, beta, alpha, k, w, b1, b2, b3)
    A0, A1, A2v, A3 = res
    scale = max(abs(A0), abs(A2v), 1e-300)
    if abs(A0 + A1) > 1e-10 * max(1.0, scale) or abs(A2v + A3) > 1e-10 * max(1.0, scale):
        raise ConstraintViolation("residue closure failed to cancel the residue pairs")
    D = tuple(float(N.coeffs[i]) if i < N.coeffs.size else 0.0 for i in range(4))
    y_L = min(abs(b1) / 2.0, abs(b1 - 2 * b2) / 2.0)
    return TrainParams(b1, b2, b3, c0, B1, B2, gamma, beta, A0, A1, A2v, A3, y_L, D, alpha, k, w)


def train_implicit_residual(tp, f, xi, U):
    """(A0/c) ln((b1+2y)/(b1-2y)) + (A2/c) ln((q+2y)/(q-2y)) + xi + c2, c = c0 w alpha."""
    y = np.asarray(U, dtype=float) - tp.b1 / 2.0
    c = tp.c0 * f.w * tp.alpha
    q = tp.b1 - 2.0 * tp.b2
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (tp.A0 / c) * np.log((tp.b1 + 2 * y) / (tp.b1 - 2 * y)) + (tp.A2 / c) * np.log((q + 2 * y) / (q - 2 * y))
    return r + np.asarray(xi, dtype=float) + f.c2


def _train_y_explicit(tp, z, branch):
    """Roots of 4(1-E) y^2 + 4 b3 (1+E) y + p q (1-E) = 0 with E = exp(-z).

    The root that stays finite as E -> 1 is taken from the cancellation-free
    form 2c/(-b - sgn(b) sqrt(b^2 - 4ac)); this is the branch that is
    continuous through z = 0, so no 0/0 limit has to be evaluated. The other
    root follows from Vieta.
    """
    p_, q_ = tp.b1, tp.b1 - 2.0 * tp.b2
    # for z < 0 the equation is multiplied through by e^z so E never overflows
    sig = np.where(z < 0, -1.0, 1.0)
    E = np.exp(-np.abs(z))
    a = 4.0 * sig * (1.0 - E)
    b = 4.0 * tp.b3 * (1.0 + E)
    c = sig * p_ * q_ * (1.0 - E)
    disc = b * b - 4.0 * a * c
    y = 2.0 * c / (-b - np.sign(b) * np.sqrt(disc))
    if branch == "continuous":
        return y
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a != 0, c / (a * y), np.inf)


def build_two_artanh_soliton(tp, p, f, branch=None):
    """Soliton-train profile U(xi), V(xi).

    With A0 = A2 the explicit inverse is used. ``branch`` is +1/-1 for the
    sign in front of the square root of the closed-form inverse; the default
    picks the sign that is continuous through the removable singularity
    (sign(b3)). With A0 != A2 the two-artanh relation is inverted numerically.
    """
    _require_orders(p, 3, 6)
    if f.c1 != 0:
        raise ConstraintViolation("the train requires c1 = 0 (U = 0 is a denominator root)")
    c = tp.c0 * f.w * tp.alpha
    center = tp.b1 / 2.0
    lo, hi = center - tp.y_L, center + tp.y_L
    consts = tp.to_dict()
    consts["c2"] = f.c2
    scale = max(abs(tp.A0), abs(tp.A2))
    if abs(tp.A0 - tp.A2) <= 1e-12 * scale:
        cont_sign = 1 if tp.b3 > 0 else -1
        which = "continuous" if branch in (None, cont_sign) else "other"

        def U(xi):
            z = (c / tp.A0) * (np.asarray(xi, dtype=float) + f.c2)
            y = _train_y_explicit(tp, z, which)
            # the far tails reach the limits +-y_L in floating point
            lim = tp.y_L * (1.0 + 4 * np.finfo(float).eps) if which == "continuous" else tp.y_L
            if np.any(~(np.abs(y) <= lim)) or (which != "continuous" and np.any(np.abs(y) == lim)):
                raise DomainError("train profile y(xi) leaves (-y_L, y_L) on this branch")
            return center + y

        kind = "explicit-closed-form"
        domain = WHOLE_LINE
    else:
        # y/B with a signed B; artanh(y/B) = sign(B) artanh(y/|B|)
        terms = tuple(
            ArtanhTerm(-2.0 * A / c * math.copysign(1.0, B), center, abs(B))
            for A, B in ((tp.A0, tp.B1), (tp.A2, tp.B2))
        )
        phi = ClosedFormExpr(artanh_terms=terms)
        d = phi.derivative(np.linspace(lo, hi, 203)[1:-1])
        mono = 1 if np.all(d > 0) else (-1 if np.all(d < 0) else 0)
        ip = ImplicitProfile(phi, (lo, hi), mono, None)

        def U(xi):
            x = np.atleast_1d(np.asarray(xi, dtype=float))
            out = np.array([invert_profile(ip, float(v), f) for v in x.ravel()]).reshape(x.shape)
            return out if np.ndim(xi) else out[0]

        kind = "implicit-inverted"
        domain = _phi_range(ip, f) if mono else WHOLE_LINE
        consts["monotone"] = mono

    def V(xi):
        return flux_from_temperature(U(xi), p, f)

    return WaveProfile(U, V, domain, kind, "n6-train", consts, True)


# --------------------------------------------------------------------------
# Definition check


def check_soliton_definition(wp, xi_far, tol=1e-8, samples=4001):
    """Operational soliton test on a travelling-wave profile.

    Both fields must be defined on [-2 xi_far, 2 xi_far], bounded there, and
    converge to constants at both ends (|f(xi) - f(2 xi)| < tol). Distinct
    limits classify a field as dark, equal limits as bright.
    """
    lo, hi = wp.domain_xi
    report = {"xi_far": xi_far, "tol": tol}
    if not (lo < -2 * xi_far and hi > 2 * xi_far):
        report.update(defined=False, bounded=False, is_soliton=False,
                      reason=f"profile only defined on {wp.domain_xi}; unbounded towards its singularities")
        return report
    xs = np.linspace(-2 * xi_far, 2 * xi_far, samples)
    U, V = wp.sample(xs)
    bounded = bool(np.all(np.isfinite(U)) and np.all(np.isfinite(V)))
    report.update(defined=True, bounded=bounded)
    ru = _field_limits(wp.U, xi_far, tol)
    rv = _field_limits(wp.V, xi_far, tol)
    report["U"], report["V"] = ru, rv
    ok = bounded and ru["kind"] != "none" and rv["kind"] != "none"
    report["is_soliton"] = ok
    if not ok:
        report["reason"] = "fields do not settle to constants at both ends"
    return report


def _field_limits(g, xi_far, tol):
    v = g(np.array([-xi_far, -2 * xi_far, xi_far, 2 * xi_far]))
    conv_l = abs(v[0] - v[1]) < tol
    conv_r = abs(v[2] - v[3]) < tol
    lim_l, lim_r = float(v[1]), float(v[3])
    if conv_l and conv_r:
        kind = "bright" if abs(lim_l - lim_r) < tol else "dark"
    else:
        kind = "none"
    return {"converges_left": bool(conv_l), "converges_right": bool(conv_r),
            "limit_left": lim_l, "limit_right": lim_r, "kind": kind}
