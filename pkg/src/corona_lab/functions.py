"""Polynomials, rational functions, tuples and finite-zero-set ideals.

These are the concrete, desk-scale stand-ins for bounded analytic functions
on the unit disk.  A polynomial stores its complex coefficients in ascending
degree; the zero polynomial has no coefficients at all.  A rational function
keeps a monic denominator whose roots lie at modulus at least ``pole_margin``
(> 1), so it is bounded on a neighbourhood of the closed disk.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npoly

from .errors import (DuplicatePoint, NotInSubalgebra, PoleTooClose,
                     ZeroOnBoundary)

TRIM_RTOL = 1e-14
DEFAULT_POLE_MARGIN = 1.05
MEMBERSHIP_RTOL = 1e-9
GCD_DROP_RTOL = 1e-12
GCD_ACCEPT_RTOL = 1e-8
GCD_DIVIDES_RTOL = 1e-6

__all__ = [
    "Poly", "RationalFn", "ZeroIdeal", "FnTuple", "SubalgebraTuple",
    "evaluate", "tuple_eval", "gramian_interval", "ideal_from_zeros",
    "decompose", "membership_tol", "poly_gcd", "sup_upper", "taylor",
    "fn_to_json", "fn_from_json", "poly_to_json", "poly_from_json",
]


def _is_scalar(x):
    return isinstance(x, (numbers.Number, np.number))


def _trim(c, rtol=TRIM_RTOL):
    if c.size == 0:
        return c
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        return c[:0]
    last = np.nonzero(mags > rtol * top)[0][-1]
    return c[:last + 1]


class Poly:
    """Complex polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, Poly):
            self.coeffs = coeffs.coeffs
            return
        if _is_scalar(coeffs):
            coeffs = [coeffs]
        c = np.array(coeffs, dtype=complex).ravel()
        self.coeffs = _trim(c)

    @classmethod
    def one(cls):
        return cls([1.0])

    @classmethod
    def z(cls):
        return cls([0.0, 1.0])

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        roots = list(roots)
        if not roots:
            return cls([lead])
        return cls(lead * npoly.polyfromroots(np.asarray(roots, dtype=complex)))

    @property
    def degree(self):
        return self.coeffs.size - 1

    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs.size else 0j

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc[()] if acc.ndim == 0 else acc

    # arithmetic

    def __neg__(self):
        return Poly(-self.coeffs)

    def __add__(self, other):
        if _is_scalar(other):
            other = Poly(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[:b.size] += b
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if _is_scalar(other):
            other = Poly(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return Poly(self.coeffs * complex(other))
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        return Poly(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return Poly(self.coeffs / complex(other))

    def __pow__(self, k):
        out = Poly.one()
        for _ in range(int(k)):
            out = out * self
        return out

    def __divmod__(self, other):
        other = Poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Poly(), self
        rem = self.coeffs.copy()
        d = other.coeffs
        q = np.zeros(self.degree - other.degree + 1, dtype=complex)
        for k in range(q.size - 1, -1, -1):
            t = rem[k + d.size - 1] / d[-1]
            q[k] = t
            rem[k:k + d.size] -= t * d
        return Poly(q), Poly(rem[:d.size - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def deriv(self):
        if self.degree < 1:
            return Poly()
        return Poly(self.coeffs[1:] * np.arange(1, self.coeffs.size))

    def roots(self):
        """Roots via companion-matrix eigenvalues."""
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return npoly.polyroots(self.coeffs)

    def monic(self):
        if self.is_zero():
            return self
        return Poly(self.coeffs / self.coeffs[-1])

    def coeff_sum(self):
        """Sum of coefficient moduli, an upper bound for sup |p| on the closed disk."""
        return float(np.abs(self.coeffs).sum())

    def taylor(self, z0, order):
        """First ``order`` Taylor coefficients of p(z0 + w), by repeated synthetic division."""
        c = list(self.coeffs[::-1])
        out = np.zeros(order, dtype=complex)
        for k in range(order):
            if not c:
                break
            acc = 0j
            q = []
            for a in c:
                acc = acc * z0 + a
                q.append(acc)
            out[k] = q.pop()
            c = q
        return out

    def allclose(self, other, atol=1e-12):
        other = Poly(other)
        m = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(m, dtype=complex)
        b = np.zeros(m, dtype=complex)
        a[:self.coeffs.size] = self.coeffs
        b[:other.coeffs.size] = other.coeffs
        return bool(np.all(np.abs(a - b) <= atol))

    def __repr__(self):
        return f"Poly({np.array2string(self.coeffs, precision=6)})"


class RationalFn:
    """num/den with a monic denominator that has no roots of modulus below ``pole_margin``."""

    __slots__ = ("num", "den", "pole_margin")

    def __init__(self, num, den=1.0, pole_margin=DEFAULT_POLE_MARGIN, check=True):
        num = Poly(num)
        den = Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        lead = den.lead
        self.num = num / lead
        self.den = den / lead
        self.pole_margin = float(pole_margin)
        if check and self.den.degree > 0:
            roots = self.den.roots()
            bad = roots[np.abs(roots) < self.pole_margin]
            if bad.size:
                raise PoleTooClose(
                    f"denominator root(s) {bad} inside modulus {self.pole_margin}")

    @classmethod
    def _coerce(cls, other, margin):
        if isinstance(other, RationalFn):
            return other
        if _is_scalar(other) or isinstance(other, Poly):
            return cls(Poly(other), Poly.one(), pole_margin=margin, check=False)
        return None

    def __call__(self, z):
        d = self.den(z)
        floor = 64 * np.finfo(float).eps * self.den.coeff_sum()
        if np.any(np.abs(d) <= floor):
            raise PoleTooClose(f"denominator below {floor:.3e} at evaluation point")
        return self.num(z) / d

    def _same_den(self, other):
        return self.den.coeffs.shape == other.den.coeffs.shape and \
            np.array_equal(self.den.coeffs, other.den.coeffs)

    def __neg__(self):
        return RationalFn(-self.num, self.den, self.pole_margin, check=False)

    def __add__(self, other):
        other = self._coerce(other, self.pole_margin)
        if other is None:
            return NotImplemented
        margin = min(self.pole_margin, other.pole_margin)
        if self._same_den(other):
            return RationalFn(self.num + other.num, self.den, margin, check=False)
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den, margin, check=False)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other, self.pole_margin)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other, self.pole_margin)
        if other is None:
            return NotImplemented
        return RationalFn(self.num * other.num, self.den * other.den,
                          min(self.pole_margin, other.pole_margin), check=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return RationalFn(self.num / complex(other), self.den, self.pole_margin, check=False)

    def __pow__(self, k):
        out = RationalFn(Poly.one(), Poly.one(), self.pole_margin, check=False)
        for _ in range(int(k)):
            out = out * self
        return out

    def is_zero(self):
        return self.num.is_zero()

    def reduced(self):
        """Cancel common roots of numerator and denominator."""
        if self.den.degree < 1 or self.num.is_zero():
            return RationalFn(self.num, self.den if not self.num.is_zero() else Poly.one(),
                              self.pole_margin, check=False)
        g = poly_gcd(self.num, self.den)
        if g.degree < 1:
            return self
        num, r1 = divmod(self.num, g)
        den, r2 = divmod(self.den, g)
        return RationalFn(num, den, self.pole_margin, check=False)

    def taylor(self, z0, order):
        n = self.num.taylor(z0, order)
        d = self.den.taylor(z0, order)
        if d[0] == 0:
            raise PoleTooClose(f"pole at {z0}")
        q = np.zeros(order, dtype=complex)
        for k in range(order):
            q[k] = (n[k] - np.dot(d[1:k + 1], q[k - 1::-1][:k])) / d[0]
        return q

    def coeff_sum(self):
        return self.num.coeff_sum() + self.den.coeff_sum()

    def den_lower_bound(self):
        """Lower bound for |den| on the closed disk: prod(|root| - 1) over the monic denominator."""
        if self.den.degree < 1:
            return 1.0
        return float(np.prod(np.abs(self.den.roots()) - 1.0))

    def __repr__(self):
        return f"RationalFn(num={self.num!r}, den={self.den!r})"


def evaluate(f, z):
    """Value of a polynomial, rational function or scalar at z."""
    if _is_scalar(f):
        return np.full_like(np.asarray(z, dtype=complex), complex(f))[()]
    return f(z)


def taylor(f, z0, order):
    if _is_scalar(f):
        f = Poly(f)
    return f.taylor(z0, order)


def sup_upper(f):
    """Coefficient-sum upper bound for sup |f| over the closed disk."""
    if _is_scalar(f):
        return abs(complex(f))
    if isinstance(f, RationalFn):
        return f.num.coeff_sum() / f.den_lower_bound()
    return f.coeff_sum()


def membership_tol(f):
    """Scale-aware membership tolerance 1e-9 * (1 + sum |coeffs|)."""
    if _is_scalar(f):
        return MEMBERSHIP_RTOL * (1.0 + abs(complex(f)))
    return MEMBERSHIP_RTOL * (1.0 + f.coeff_sum())


def poly_gcd(p, q, rtol=GCD_DROP_RTOL):
    """Monic gcd by the Euclidean remainder sequence with monic renormalisation.

    A remainder below ``rtol`` times the scale of the current pair is treated
    as zero.  Rounding in the sequence can leave a true zero remainder at
    around 1e-10, so a remainder below GCD_ACCEPT_RTOL is also accepted once
    the candidate is checked to divide both inputs.
    """
    p, q = Poly(p), Poly(q)
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if p.degree < q.degree:
        p, q = q, p
    r0 = p.monic()
    r1 = q.monic()
    while not r1.is_zero():
        if r1.degree == 0:
            return Poly.one()
        rem = (r0 % r1).coeffs
        scale = max(1.0, np.abs(r0.coeffs).max(), np.abs(r1.coeffs).max())
        mags = np.abs(rem)
        if (mags.size == 0 or mags.max() <= GCD_ACCEPT_RTOL * scale) and _divides(r1, p) and _divides(r1, q):
            return r1
        above = np.nonzero(mags > rtol * scale)[0]
        rem = rem[:above[-1] + 1] if above.size else rem[:0]
        r0, r1 = r1, Poly(rem).monic()
    return r0


def _divides(d, p):
    rem = (p.monic() % d).coeffs
    return rem.size == 0 or np.abs(rem).max() <= GCD_DIVIDES_RTOL * max(1.0, p.monic().coeff_sum())


@dataclass(frozen=True)
class ZeroIdeal:
    """Functions vanishing at each ``point`` to the given multiplicity."""

    zeros: tuple
    generator: Poly = field(compare=False)

    @property
    def points(self):
        return [z for z, _ in self.zeros]

    @property
    def degree(self):
        return sum(m for _, m in self.zeros)

    def membership_residual(self, f, c=0.0):
        """Largest Taylor coefficient of f - c of order < multiplicity over all zeros.

        Returns ``(residual, worst_point)``.
        """
        worst, where = 0.0, self.zeros[0][0]
        for z0, m in self.zeros:
            t = taylor(f, z0, m)
            t[0] -= c
            r = float(np.abs(t).max())
            if r > worst:
                worst, where = r, z0
        return worst, where

    def to_json(self):
        return {"zeros": [[[z.real, z.imag], m] for z, m in self.zeros]}

    @classmethod
    def from_json(cls, obj):
        return ideal_from_zeros([(complex(*pt), int(m)) for pt, m in obj["zeros"]])


def ideal_from_zeros(zeros):
    """Build I(Z) from (point, multiplicity) pairs; generator is prod (z - z_k)^m_k."""
    pts = []
    for z, m in zeros:
        z = complex(z)
        m = int(m)
        if m < 1:
            raise ValueError(f"multiplicity must be positive, got {m}")
        if abs(z) >= 1.0:
            raise ZeroOnBoundary(f"ideal zero {z} is not inside the open unit disk")
        if any(z == p for p, _ in pts):
            raise DuplicatePoint(f"ideal zero {z} listed twice")
        pts.append((z, m))
    if not pts:
        raise ValueError("a proper ideal needs at least one zero")
    roots = [z for z, m in pts for _ in range(m)]
    return ZeroIdeal(tuple(pts), Poly.from_roots(roots))


def decompose(f, ideal, tol=None):
    """Split f = c + phi with phi in the ideal; raises NotInSubalgebra otherwise."""
    if _is_scalar(f):
        f = Poly(f)
    c = complex(evaluate(f, ideal.zeros[0][0]))
    phi = f - c
    tol = membership_tol(f) if tol is None else tol
    res, where = ideal.membership_residual(phi)
    if res > tol:
        raise NotInSubalgebra(where, res)
    return c, phi


@dataclass(frozen=True)
class FnTuple:
    """Row tuple (f_1, ..., f_n) with a certified l2 bound on any omitted tail."""

    entries: tuple
    tail_bound: float = 0.0

    def __post_init__(self):
        entries = tuple(Poly(e) if _is_scalar(e) else e for e in self.entries)
        if not entries:
            raise ValueError("a tuple needs at least one entry")
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    @property
    def max_degree(self):
        deg = 0
        for e in self.entries:
            if isinstance(e, RationalFn):
                deg = max(deg, e.num.degree, e.den.degree)
            else:
                deg = max(deg, e.degree)
        return deg

    def values(self, z):
        """Array of shape (n, *z.shape)."""
        return np.array([evaluate(e, z) for e in self.entries], dtype=complex)

    def gramian(self, z):
        v = self.values(z)
        return np.sum(np.abs(v) ** 2, axis=0)

    def to_json(self):
        return {"entries": [fn_to_json(e) for e in self.entries],
                "tail_bound": self.tail_bound}

    @classmethod
    def from_json(cls, obj, pole_margin=DEFAULT_POLE_MARGIN):
        return cls(tuple(fn_from_json(e, pole_margin) for e in obj["entries"]),
                   float(obj.get("tail_bound", 0.0)))


def tuple_eval(F, z):
    """Row vector F(z) and the Gramian sum |f_j(z)|^2."""
    v = F.values(complex(z))
    return v, float(np.sum(np.abs(v) ** 2))


def gramian_interval(F, z):
    """[gramian, gramian + tail_bound^2]: the Gramian of the full (untruncated) tuple lies inside."""
    _, g = tuple_eval(F, z)
    return g, g + F.tail_bound ** 2


@dataclass(frozen=True)
class SubalgebraTuple:
    """A tuple with every entry split as constant + element of the ideal."""

    tuple: FnTuple
    constant_part: np.ndarray = field(compare=False)
    ideal_part: FnTuple
    ideal: ZeroIdeal

    @classmethod
    def from_tuple(cls, F, ideal, tol=None):
        if not isinstance(F, FnTuple):
            F = FnTuple(tuple(F))
        consts, phis = [], []
        for f in F:
            c, phi = decompose(f, ideal, tol)
            consts.append(c)
            phis.append(phi)
        return cls(F, np.array(consts, dtype=complex), FnTuple(tuple(phis)), ideal)

    @property
    def fc_norm(self):
        return float(np.linalg.norm(self.constant_part))

    def __len__(self):
        return len(self.tuple)


def poly_to_json(p):
    return [[float(c.real), float(c.imag)] for c in Poly(p).coeffs]


def poly_from_json(obj):
    return Poly([complex(re, im) for re, im in obj])


def fn_to_json(f):
    if isinstance(f, RationalFn):
        return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}
    return poly_to_json(f)


def fn_from_json(obj, pole_margin=DEFAULT_POLE_MARGIN):
    if isinstance(obj, dict):
        return RationalFn(poly_from_json(obj["num"]), poly_from_json(obj["den"]),
                          pole_margin=pole_margin)
    return poly_from_json(obj)
