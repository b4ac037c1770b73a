"""Hermite reduction and closed-form antiderivatives of real rational functions.

``integrate_rational(A, B)`` returns a :class:`ClosedFormExpr` whose derivative
is A/B. The expression is a sum of

* a polynomial part (integral of the division quotient),
* logarithms ``c*ln|U - center|``,
* inverse hyperbolic tangents ``c*artanh((U - center)/halfwidth)`` built from
  pairs of consecutive simple real roots,
* log/arctan pairs for irreducible quadratic factors,
* a rational remainder ``P*/Q*`` from the Hermite reduction of repeated roots,
* an additive constant.

Outside its window ``|z| < 1`` an artanh term is evaluated as the equivalent
real form ``0.5*ln|(1+z)/(1-z)|`` so the expression stays real on every
root-free interval.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .polynomial import Polynomial, RootSet, poly_divmod, real_roots

RESIDUE_TOL = 1e-12


@dataclass(frozen=True)
class LogTerm:
    coef: float
    center: float


@dataclass(frozen=True)
class ArtanhTerm:
    coef: float
    center: float
    halfwidth: float


@dataclass(frozen=True)
class ArctanTerm:
    """(c_log/2) ln(U^2+hU+d) + c_atan * arctan((2U+h)/sqrt(4d-h^2))."""

    c_log: float
    c_atan: float
    h: float
    d: float


@dataclass(frozen=True)
class HermiteDecomposition:
    """P/Q = sum A_i/(x-b_i) + sum (C x + D)/(x^2+hx+d) + (P*/Q*)'."""

    residues: tuple  # ((b, A), ...)
    quadratic: tuple  # ((h, d, C, D), ...)
    rational_num: Polynomial
    rational_den: Polynomial
    roots: RootSet


def _as_array(U):
    return np.asarray(U, dtype=float)


@dataclass(frozen=True)
class ClosedFormExpr:
    poly_part: Polynomial = field(default_factory=lambda: Polynomial([0.0]))
    log_terms: tuple = ()
    artanh_terms: tuple = ()
    arctan_terms: tuple = ()
    rational_part: tuple | None = None  # (P*, Q*)
    constant: float = 0.0

    def __call__(self, U):
        return evaluate(self, U)

    def derivative(self, U):
        """Analytic derivative of the expression (the integrand it represents)."""
        x = _as_array(U)
        out = self.poly_part.deriv()(x) + np.zeros_like(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            for t in self.log_terms:
                out = out + t.coef / (x - t.center)
            for t in self.artanh_terms:
                z = (x - t.center) / t.halfwidth
                out = out + t.coef / (t.halfwidth * (1.0 - z * z))
            for t in self.arctan_terms:
                q = x * x + t.h * x + t.d
                s = math.sqrt(4.0 * t.d - t.h * t.h)
                out = out + (t.c_log * (2 * x + t.h) / 2.0 + t.c_atan * s / 2.0) / q
            if self.rational_part is not None:
                num, den = self.rational_part
                dv = den(x)
                out = out + (num.deriv()(x) * dv - num(x) * den.deriv()(x)) / (dv * dv)
        return out if np.ndim(U) else float(out)

    def to_dict(self):
        return {
            "poly_part": self.poly_part.tolist(),
            "log_terms": [{"kind": "log", "coef": t.coef, "center": t.center} for t in self.log_terms],
            "artanh_terms": [
                {"kind": "artanh", "coef": t.coef, "center": t.center, "halfwidth": t.halfwidth}
                for t in self.artanh_terms
            ],
            "arctan_terms": [
                {"kind": "arctan", "c_log": t.c_log, "c_atan": t.c_atan, "h": t.h, "d": t.d}
                for t in self.arctan_terms
            ],
            "rational_part": None
            if self.rational_part is None
            else {"num": self.rational_part[0].tolist(), "den": self.rational_part[1].tolist()},
            "constant": self.constant,
        }

    @classmethod
    def from_dict(cls, d):
        rp = d.get("rational_part")
        return cls(
            poly_part=Polynomial(d["poly_part"]),
            log_terms=tuple(LogTerm(t["coef"], t["center"]) for t in d["log_terms"]),
            artanh_terms=tuple(ArtanhTerm(t["coef"], t["center"], t["halfwidth"]) for t in d["artanh_terms"]),
            arctan_terms=tuple(ArctanTerm(t["c_log"], t["c_atan"], t["h"], t["d"]) for t in d["arctan_terms"]),
            rational_part=None if rp is None else (Polynomial(rp["num"]), Polynomial(rp["den"])),
            constant=d.get("constant", 0.0),
        )

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def singular_points(self):
        """Real points where some term is undefined (sorted, deduplicated)."""
        pts = [t.center for t in self.log_terms]
        for t in self.artanh_terms:
            pts += [t.center - t.halfwidth, t.center + t.halfwidth]
        if self.rational_part is not None:
            pts += [r for r, _ in real_roots(self.rational_part[1]).real_roots]
        return sorted(set(pts))


def evaluate(expr, U):
    """Evaluate ``expr`` at scalar or array ``U``.

    Raises DomainError naming the offending term when U hits a log center, an
    artanh window edge or a root of the rational denominator.
    """
    x = _as_array(U)
    out = expr.poly_part(x) + np.zeros_like(x) + expr.constant
    for i, t in enumerate(expr.log_terms):
        dx = np.abs(x - t.center)
        if np.any(dx == 0):
            raise DomainError(f"log term #{i} (center {t.center!r}) is singular at U={t.center!r}")
        out = out + t.coef * np.log(dx)
    for i, t in enumerate(expr.artanh_terms):
        z = (x - t.center) / t.halfwidth
        az = np.abs(z)
        if np.any(az == 1.0):
            raise DomainError(
                f"artanh term #{i} (center {t.center!r}, halfwidth {t.halfwidth!r}) hits its window edge"
            )
        with np.errstate(divide="ignore", invalid="ignore"):
            inside = np.arctanh(np.where(az < 1, z, 0.0))
            outside = 0.5 * np.log(np.abs((1.0 + z) / (1.0 - z)))
        out = out + t.coef * np.where(az < 1, inside, outside)
    for t in expr.arctan_terms:
        s = math.sqrt(4.0 * t.d - t.h * t.h)
        out = out + 0.5 * t.c_log * np.log(x * x + t.h * x + t.d) + t.c_atan * np.arctan((2 * x + t.h) / s)
    if expr.rational_part is not None:
        num, den = expr.rational_part
        dv = den(x)
        if np.any(dv == 0):
            raise DomainError("rational part P*/Q* has a pole at the requested U")
        out = out + num(x) / dv
    if not np.all(np.isfinite(out)):
        raise DomainError("closed-form expression is not finite at the requested U")
    return out if np.ndim(U) else float(out)


def _square_free_part(roots):
    """Product of the distinct factors of ``roots`` times the leading coefficient."""
    p = Polynomial([roots.leading])
    for r, _ in roots.real_roots:
        p = p * Polynomial([-r, 1.0])
    for h, d, _ in roots.quadratic_factors:
        p = p * Polynomial([d, h, 1.0])
    return p


def hermite_decompose(P, Q, roots=None):
    """Ostrogradsky-Hermite split of a proper fraction P/Q.

    Solves the linear system ``P = N Q* + Q1 P*' - P* (Q1 Q*'/Q*)`` where Q1 is
    the square-free part of Q (carrying its leading coefficient) and
    ``Q* = Q/Q1``. The residues of N/Q1 then give the log, artanh and arctan
    coefficients.
    """
    if Q.is_zero():
        raise ZeroDivisionError("denominator is the zero polynomial")
    if P.degree >= Q.degree and not P.is_zero():
        raise ValueError("hermite_decompose expects deg P < deg Q")
    rs = roots if roots is not None else real_roots(Q)
    q1 = _square_free_part(rs)
    qstar = Polynomial([1.0])
    for r, m in rs.real_roots:
        if m > 1:
            qstar = qstar * Polynomial([-r, 1.0]) ** (m - 1)
    for h, d, m in rs.quadratic_factors:
        if m > 1:
            qstar = qstar * Polynomial([d, h, 1.0]) ** (m - 1)
    d1, d2 = q1.degree, qstar.degree
    n = d1 + d2
    if d2 == 0:
        N = P
        pstar = Polynomial([0.0])
    else:
        s, _ = poly_divmod(q1 * qstar.deriv(), qstar)
        cols = []
        for j in range(d1):
            cols.append(Polynomial.monomial(j) * qstar)
        for j in range(d2):
            xj = Polynomial.monomial(j)
            cols.append(xj.deriv() * q1 - xj * s)
        M = np.zeros((n, n))
        for j, c in enumerate(cols):
            cc = c.coeffs[:n]
            M[: cc.size, j] = cc
        rhs = np.zeros(n)
        rhs[: P.coeffs.size] = P.coeffs
        sol = np.linalg.solve(M, rhs)
        N = Polynomial(sol[:d1])
        pstar = Polynomial(sol[d1:])
    dq1 = q1.deriv()
    residues = []
    for r, _ in rs.real_roots:
        residues.append((r, N(r) / dq1(r)))
    quads = []
    for h, d, _ in rs.quadratic_factors:
        z = complex(-h / 2.0, math.sqrt(max(4.0 * d - h * h, 0.0)) / 2.0)
        res = complex(N(z)) / complex(dq1(z))
        quads.append((h, d, 2.0 * res.real, -2.0 * (res * z.conjugate()).real))
    return HermiteDecomposition(tuple(residues), tuple(quads), pstar, qstar, rs)


def _negligible(a, scale):
    return abs(a) <= RESIDUE_TOL * scale


def integrate_rational(A, B):
    """Closed-form antiderivative of A/B.

    Consecutive simple real roots (ascending) are paired. A pair whose
    residues cancel becomes a single artanh term; otherwise a symmetric log
    pair is added as well. An unpaired simple root gives a single log. When B
    is linear the log is written as ``c ln|B(U)|`` (the constant ``c ln|lc|``
    is carried explicitly).
    """
    if B.is_zero():
        raise ZeroDivisionError("denominator is the zero polynomial")
    q, r = poly_divmod(A, B)
    poly_part = q.integ()
    if r.is_zero() or B.degree == 0:
        return ClosedFormExpr(poly_part=poly_part)
    hd = hermite_decompose(r, B)
    logs, atanhs, atans = [], [], []
    # N/Q1 has simple poles only, so every real root takes part in the pairing
    simple = list(hd.residues)
    i = 0
    while i + 1 < len(simple):
        (b0, a0), (b1, a1) = simple[i], simple[i + 1]
        scale = abs(a0) + abs(a1)
        s, dlt = a0 + a1, a0 - a1
        if not _negligible(s, scale):
            logs.append(LogTerm(s / 2.0, b0))
            logs.append(LogTerm(s / 2.0, b1))
        if not _negligible(dlt, scale):
            hw = (b1 - b0) / 2.0
            # -(A_i - A_{i+1}) artanh((U-c)/((b_i-b_{i+1})/2)) with a positive halfwidth
            atanhs.append(ArtanhTerm(dlt, (b0 + b1) / 2.0, hw))
        i += 2
    if i < len(simple):
        b, a = simple[i]
        if a != 0.0:
            logs.append(LogTerm(a, b))
    for h, d, C, D in hd.quadratic:
        s = math.sqrt(4.0 * d - h * h)
        atans.append(ArctanTerm(C, (2.0 * D - C * h) / s, h, d))
    constant = 0.0
    if B.degree == 1 and len(logs) == 1:
        constant = logs[0].coef * math.log(abs(B.lc))
    rational = None
    if not hd.rational_num.is_zero():
        rational = (hd.rational_num, hd.rational_den)
    return ClosedFormExpr(poly_part, tuple(logs), tuple(atanhs), tuple(atans), rational, constant)
