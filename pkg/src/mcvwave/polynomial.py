"""Real polynomials, long division, approximate gcd and real root isolation.

Coefficients are stored in ascending order of degree. All arithmetic is plain
double precision; the root finder combines a square-free (Yun) decomposition
with companion-matrix eigenvalues and a Newton polish on each factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

ROOT_TOL = 1e-9
MAX_DEGREE = 64


class Polynomial:
    """Immutable real polynomial with ascending coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=(0.0,)):
        c = np.array(coeffs, dtype=float).ravel()
        if c.size == 0:
            c = np.zeros(1)
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1)
        c.setflags(write=False)
        self._c = c

    # construction helpers
    @classmethod
    def from_roots(cls, roots, lead=1.0):
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    @classmethod
    def monomial(cls, k, coef=1.0):
        c = np.zeros(k + 1)
        c[k] = coef
        return cls(c)

    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        return self._c.size - 1

    @property
    def lc(self):
        return float(self._c[-1])

    def is_zero(self):
        return self._c.size == 1 and self._c[0] == 0.0

    def norm(self):
        return float(np.max(np.abs(self._c)))

    def tolist(self):
        return [float(v) for v in self._c]

    def __repr__(self):
        return f"Polynomial({self.tolist()})"

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._c.size == other._c.size and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(tuple(self._c))

    def __call__(self, x):
        """Horner evaluation; works for scalars, complex numbers and arrays."""
        c = self._c
        acc = c[-1] * np.ones_like(x) if isinstance(x, np.ndarray) else c[-1]
        for a in c[-2::-1]:
            acc = acc * x + a
        if not isinstance(x, np.ndarray) and not isinstance(x, complex):
            return float(acc) if not np.iscomplexobj(acc) else complex(acc)
        return acc

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if np.isscalar(other):
            return Polynomial([float(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(self._c.size, other._c.size)
        out = np.zeros(n)
        out[: self._c.size] += self._c
        out[: other._c.size] += other._c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Polynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def scale(self, s):
        return Polynomial(self._c * s)

    def deriv(self):
        if self._c.size == 1:
            return Polynomial([0.0])
        return Polynomial(self._c[1:] * np.arange(1, self._c.size))

    def integ(self, constant=0.0):
        out = np.empty(self._c.size + 1)
        out[0] = constant
        out[1:] = self._c / np.arange(1, self._c.size + 1)
        return Polynomial(out)

    def monic(self):
        return Polynomial(self._c / self._c[-1])

    def normalized(self):
        """Scale so the largest coefficient magnitude is one."""
        return Polynomial(self._c / self.norm()) if not self.is_zero() else self

    def trimmed(self, rtol):
        """Drop leading coefficients below rtol times the largest one."""
        c = self._c.copy()
        thr = rtol * np.max(np.abs(c))
        while c.size > 1 and abs(c[-1]) <= thr:
            c = c[:-1]
        return Polynomial(c)


def poly_divmod(a, b):
    """Long division a = q*b + r with deg r < deg b."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    r = np.array(a.coeffs, dtype=float)
    db = b.degree
    if a.degree < db:
        return Polynomial([0.0]), a
    q = np.zeros(a.degree - db + 1)
    bl = b.lc
    bc = b.coeffs
    for k in range(a.degree - db, -1, -1):
        t = r[k + db] / bl
        q[k] = t
        r[k : k + db + 1] -= t * bc
        r[k + db] = 0.0
    return Polynomial(q), Polynomial(r[:db] if db > 0 else [0.0])


def poly_gcd(a, b, tol=ROOT_TOL):
    """Approximate monic gcd via a normalized Euclidean remainder sequence.

    A remainder is treated as zero when its largest coefficient falls below
    ``tol`` relative to the dividend (both scaled to unit max-norm).
    """
    a = a.normalized()
    b = b.normalized()
    if b.is_zero():
        return a.monic()
    if a.degree < b.degree:
        a, b = b, a
    while True:
        if b.degree == 0:
            return Polynomial([1.0])
        _, r = poly_divmod(a, b)
        if r.is_zero() or r.norm() <= tol * a.norm():
            return b.monic()
        a, b = b, r.normalized()


def _square_free_factors(p, tol):
    """Yun's algorithm. Returns [(factor, multiplicity), ...] of monic factors."""
    f = p.monic()
    fp = f.deriv()
    a0 = poly_gcd(f, fp, tol)
    if a0.degree == 0:
        return [(f, 1)]
    b, _ = poly_divmod(f, a0)
    c, _ = poly_divmod(fp, a0)
    d = c - b.deriv()
    out = []
    i = 1
    while b.degree > 0 and i <= p.degree:
        if d.is_zero() or d.norm() <= tol * max(1.0, b.norm()):
            a = b.monic()
        else:
            a = poly_gcd(b, d, tol)
        if a.degree > 0:
            out.append((a, i))
        b, _ = poly_divmod(b, a)
        c, _ = poly_divmod(d, a)
        d = c - b.deriv()
        i += 1
    return out


def _factor_roots(g):
    """All complex roots of a (nominally square-free) real polynomial."""
    n = g.degree
    c = g.monic().coeffs
    if n == 1:
        return np.array([-c[0]], dtype=complex)
    if n == 2:
        bq, cq = c[1], c[0]
        disc = bq * bq - 4.0 * cq
        if disc >= 0:
            s = np.sqrt(disc)
            r1 = -(bq + np.copysign(s, bq)) / 2.0
            r2 = cq / r1 if r1 != 0 else -bq - r1
            return np.array([r1, r2], dtype=complex)
        s = np.sqrt(-disc) / 2.0
        return np.array([complex(-bq / 2, s), complex(-bq / 2, -s)])
    comp = np.zeros((n, n))
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1]
    try:
        return np.linalg.eigvals(comp)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"companion eigenvalue solve failed: {exc}") from exc


def _newton_polish(g, z, iters=8):
    dg = g.deriv()
    best, fbest = z, abs(g(z))
    for _ in range(iters):
        d = dg(z)
        if d == 0:
            break
        z = z - g(z) / d
        fz = abs(g(z))
        if not np.isfinite(fz):
            break
        if fz < fbest:
            best, fbest = z, fz
        if fz == 0:
            break
    return best


@dataclass(frozen=True)
class RootSet:
    """Real roots with multiplicity plus irreducible quadratic factors."""

    real_roots: tuple = ()
    quadratic_factors: tuple = ()
    leading: float = 1.0

    @property
    def degree(self):
        return sum(m for _, m in self.real_roots) + 2 * sum(m for *_, m in self.quadratic_factors)

    def to_polynomial(self):
        p = Polynomial([self.leading])
        for r, m in self.real_roots:
            p = p * Polynomial([-r, 1.0]) ** m
        for h, d, m in self.quadratic_factors:
            p = p * Polynomial([d, h, 1.0]) ** m
        return p

    def simple_real(self):
        return [r for r, m in self.real_roots if m == 1]


def real_roots(p, tol=ROOT_TOL, max_degree=MAX_DEGREE):
    """Factor ``p`` over the reals into a RootSet.

    Multiplicities come from a gcd-based square-free decomposition; a
    decomposition that fails to reproduce ``p`` falls back to treating all
    roots as simple, so a bad gcd guess can never lose roots.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    if p.degree > max_degree:
        raise ValueError(f"degree {p.degree} exceeds cap {max_degree}")
    if p.degree == 0:
        return RootSet((), (), p.lc)

    factors = _square_free_factors(p, tol)
    recon = Polynomial([1.0])
    for g, m in factors:
        recon = recon * g**m
    target = p.monic()
    if recon.degree != target.degree or np.max(np.abs(recon.coeffs - target.coeffs)) > np.sqrt(tol) * max(1.0, target.norm()):
        factors = [(target, 1)]

    reals, quads = [], []
    for g, m in factors:
        zs = _factor_roots(g)
        for z in zs:
            scale = max(1.0, abs(z))
            if abs(z.imag) <= tol * scale:
                x = _newton_polish(g, float(z.real))
                reals.append((float(np.real(x)) + 0.0, m))
            elif z.imag > 0:
                z = complex(_newton_polish(g, complex(z)))
                if abs(z.imag) <= tol * scale:
                    reals.append((z.real, m))
                    reals.append((z.real, m))
                    continue
                quads.append((-2.0 * z.real, z.real**2 + z.imag**2, m))
    reals.sort(key=lambda t: t[0])
    rs = RootSet(tuple(reals), tuple(quads), p.lc)
    if rs.degree != p.degree:
        raise ConvergenceError(f"root isolation recovered degree {rs.degree}, expected {p.degree}")
    return rs
