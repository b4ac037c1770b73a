"""Dimensional material description and its dimensionless reduction.

Conductivity and relaxation time are truncated Taylor series about T0,

    lambda(T) = sum_i a_i (T - T0)^i,      tau(T) = sum_j b_j (T - T0)^j,

and the mass density follows from the entropy constraint
rho(T) = tau(T) / (mbar * lambda(T) * T^2).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DomainError, InadmissibleMaterial
from .polynomial import Polynomial, real_roots

log = logging.getLogger(__name__)


def _horner(coeffs, s):
    acc = np.zeros_like(s) + coeffs[-1]
    for a in coeffs[-2::-1]:
        acc = acc * s + a
    return acc


@dataclass(frozen=True)
class MaterialExpansion:
    T0: float
    lambda_coeffs: tuple
    tau_coeffs: tuple
    c_v: float
    m_bar: float

    def __post_init__(self):
        object.__setattr__(self, "lambda_coeffs", tuple(float(a) for a in self.lambda_coeffs))
        object.__setattr__(self, "tau_coeffs", tuple(float(b) for b in self.tau_coeffs))
        if not self.lambda_coeffs or not self.tau_coeffs:
            raise ConfigError("coefficient lists must be non-empty")
        vals = (self.T0, self.c_v, self.m_bar, *self.lambda_coeffs, *self.tau_coeffs)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("material parameters must be finite")
        for name, v in (("T0", self.T0), ("a_0", self.lambda_coeffs[0]), ("b_0", self.tau_coeffs[0]),
                        ("c_v", self.c_v), ("m_bar", self.m_bar)):
            if not v > 0:
                raise InadmissibleMaterial(f"{name} must be positive, got {v!r}")

    @property
    def n(self):
        return len(self.lambda_coeffs) - 1

    @property
    def m(self):
        return len(self.tau_coeffs) - 1


class FlaggedValue(NamedTuple):
    """Property value plus an admissibility flag (value > 0)."""

    value: object
    admissible: object


def _flagged(coeffs, mat, T, what):
    s = np.asarray(T, dtype=float) - mat.T0
    v = _horner(coeffs, s)
    ok = v > 0
    if not np.all(ok):
        log.warning("%s is non-positive at %d point(s): thermodynamically inadmissible", what, int(np.size(ok) - np.count_nonzero(ok)))
    if np.ndim(T) == 0:
        return FlaggedValue(float(v), bool(ok))
    return FlaggedValue(v, ok)


def eval_lambda(mat, T):
    """Thermal conductivity sum_i a_i (T-T0)^i, flagged when not positive."""
    return _flagged(mat.lambda_coeffs, mat, T, "lambda(T)")


def eval_tau(mat, T):
    """Relaxation time sum_j b_j (T-T0)^j, flagged when not positive."""
    return _flagged(mat.tau_coeffs, mat, T, "tau(T)")


def eval_rho(mat, T):
    """Mass density tau / (mbar * lambda * T^2); hard error where it is undefined."""
    Ta = np.asarray(T, dtype=float)
    s = Ta - mat.T0
    lam = _horner(mat.lambda_coeffs, s)
    if np.any(Ta <= 0):
        raise DomainError("rho(T) requires T > 0")
    if np.any(lam <= 0):
        raise DomainError("rho(T) requires lambda(T) > 0")
    rho = _horner(mat.tau_coeffs, s) / (mat.m_bar * lam * Ta * Ta)
    return float(rho) if np.ndim(T) == 0 else rho


@dataclass(frozen=True)
class ScalingContext:
    L: float
    t_p: float
    q_bar0: float

    def __post_init__(self):
        if not (self.L > 0 and self.t_p > 0):
            raise ConfigError("L and t_p must be positive")
        if not math.isfinite(self.q_bar0) or self.q_bar0 == 0:
            raise ConfigError("q_bar0 must be finite and non-zero (T_end != T0)")

    def rho0(self, mat):
        return mat.tau_coeffs[0] / (mat.m_bar * mat.lambda_coeffs[0] * mat.T0**2)

    def alpha0(self, mat):
        return mat.lambda_coeffs[0] / (self.rho0(mat) * mat.c_v)

    def T_end(self, mat):
        return mat.T0 + self.t_p * self.q_bar0 / (self.rho0(mat) * mat.c_v * self.L)

    def derived(self, mat):
        return {"rho0": self.rho0(mat), "alpha0": self.alpha0(mat), "T_end": self.T_end(mat)}


@dataclass(frozen=True)
class DimensionlessParams:
    """Coefficients (alpha, beta_0..beta_n, gamma_0..gamma_m) of the reduced system."""

    alpha: float
    beta: tuple
    gamma: tuple

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        if not self.beta or not self.gamma:
            raise ConfigError("beta and gamma must be non-empty")
        if not all(math.isfinite(v) for v in (self.alpha, *self.beta, *self.gamma)):
            raise ConfigError("dimensionless parameters must be finite")

    @property
    def n(self):
        return len(self.beta) - 1

    @property
    def m(self):
        return len(self.gamma) - 1

    def is_admissible(self):
        return self.alpha > 0 and self.beta[0] > 0 and self.gamma[0] > 0

    def gamma_poly(self):
        """Gamma(U) = gamma_0 + sum_j gamma_j U^j."""
        return Polynomial(self.gamma)

    def beta_poly(self):
        """B(U) = beta_0 + sum_i beta_i U^i."""
        return Polynomial(self.beta)

    def to_dict(self):
        return {"alpha": self.alpha, "beta": list(self.beta), "gamma": list(self.gamma)}


def nondimensionalize(mat, ctx):
    """Map a material and its scales onto (alpha, beta, gamma).

    beta_i and gamma_j carry (T_end - T0)^i and (T_end - T0)^j respectively,
    the powers that make the reduced coefficients multiply U^i and U^j.
    beta_0 is formed as alpha*gamma_0 so that identity holds bit for bit.
    """
    rho0 = ctx.rho0(mat)
    alpha0 = ctx.alpha0(mat)
    dT = ctx.T_end(mat) - mat.T0
    if dT == 0:
        raise ConfigError("T_end equals T0; temperature scaling undefined")
    L2 = ctx.L**2
    b0 = mat.tau_coeffs[0]
    alpha = ctx.t_p / b0
    gamma = [alpha0 * b0 / L2]
    gamma += [alpha0 * b * dT**j / L2 for j, b in enumerate(mat.tau_coeffs[1:], start=1)]
    beta = [alpha * gamma[0]]
    beta += [a * dT**i * ctx.t_p / (rho0 * mat.c_v * L2) for i, a in enumerate(mat.lambda_coeffs[1:], start=1)]
    return DimensionlessParams(alpha, tuple(beta), tuple(gamma))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool
    hi_open: bool

    def __str__(self):
        return f"{'(' if self.lo_open else '['}{self.lo!r}, {self.hi!r}{')' if self.hi_open else ']'}"


@dataclass(frozen=True)
class AdmissibilityReport:
    T_lo: float
    T_hi: float
    intervals: tuple

    @property
    def whole(self):
        return (
            len(self.intervals) == 1
            and self.intervals[0].lo == self.T_lo
            and self.intervals[0].hi == self.T_hi
            and not self.intervals[0].lo_open
            and not self.intervals[0].hi_open
        )

    def to_dict(self):
        return {
            "T_lo": self.T_lo,
            "T_hi": self.T_hi,
            "whole_range_admissible": self.whole,
            "intervals": [
                {"lo": i.lo, "hi": i.hi, "lo_open": i.lo_open, "hi_open": i.hi_open, "text": str(i)}
                for i in self.intervals
            ],
        }


def check_admissible_range(mat, T_lo, T_hi):
    """Sub-intervals of [T_lo, T_hi] on which lambda > 0 and tau > 0."""
    if not T_lo < T_hi:
        raise ValueError("T_lo must be below T_hi")
    cuts = set()
    for coeffs in (mat.lambda_coeffs, mat.tau_coeffs):
        p = Polynomial(coeffs)
        if p.degree >= 1:
            for r, _ in real_roots(p).real_roots:
                T = mat.T0 + r
                if T_lo <= T <= T_hi:
                    cuts.add(T)
    pts = sorted(cuts | {T_lo, T_hi})

    def positive(T):
        s = T - mat.T0
        return _horner(mat.lambda_coeffs, s) > 0 and _horner(mat.tau_coeffs, s) > 0

    out = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if not positive(0.5 * (lo + hi)):
            continue
        if out and out[-1].hi == lo and positive(lo):
            # a root of even multiplicity touches zero without a sign change
            out[-1] = Interval(out[-1].lo, hi, out[-1].lo_open, not positive(hi))
        else:
            out.append(Interval(lo, hi, not positive(lo), not positive(hi)))
    return AdmissibilityReport(T_lo, T_hi, tuple(out))


MATERIAL_KEYS = ("t0", "cv", "mbar", "lambda_coeffs", "tau_coeffs", "l", "tp", "qbar0")


def parse_material_config(text, source="<config>"):
    """Parse ``key = value`` lines into (MaterialExpansion, ScalingContext).

    Keys are case-insensitive; ``#`` starts a comment; unknown or repeated
    keys are errors reported with their line number.
    """
    vals = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        k = key.lower()
        if k not in MATERIAL_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if k in vals:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            if k.endswith("_coeffs"):
                parsed = tuple(float(v) for v in value.split(","))
            else:
                parsed = float(value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: cannot parse value {value!r} for {key!r}") from None
        vals[k] = (parsed, lineno)
    missing = [k for k in MATERIAL_KEYS if k not in vals]
    if missing:
        raise ConfigError(f"{source}: missing keys: {', '.join(missing)}")
    v = {k: p for k, (p, _) in vals.items()}
    try:
        mat = MaterialExpansion(v["t0"], v["lambda_coeffs"], v["tau_coeffs"], v["cv"], v["mbar"])
        ctx = ScalingContext(v["l"], v["tp"], v["qbar0"])
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return mat, ctx


def load_material_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_material_config(fh.read(), source=str(path))
