"""Constructive corona and ideal solutions for polynomial / rational data.

For a tuple of polynomials with gcd g, Bezout cofactors a_i with
sum a_i f_i = g give the analytic solution G_i = a_i / g of F G^T = 1,
provided g has no roots in the (closed) disk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllZero, CommonZeroInDisk, GramianZero, NotInIdealNumerically
from .functions import (DEFAULT_POLE_MARGIN, FnTuple, Poly, RationalFn,
                        poly_gcd, poly_to_json, tuple_eval)

__all__ = [
    "BezoutCertificate", "extended_euclid", "bezout_tuple", "corona_bezout",
    "ideal_solve", "minimal_pointwise_solution",
]

IDEAL_DIVISION_RTOL = 1e-9


@dataclass(frozen=True)
class BezoutCertificate:
    gcd: Poly
    cofactors: tuple
    residual: float
    scale: float = 1.0

    def to_json(self):
        return {"gcd": poly_to_json(self.gcd),
                "cofactors": [poly_to_json(c) for c in self.cofactors],
                "residual": self.residual}


def extended_euclid(p, q):
    """Return (g, a, b) with a p + b q = g = gcd(p, q), g monic.

    The gcd comes from the remainder sequence; the cofactors are the unique
    solution of the Sylvester system with deg a < deg q - deg g and
    deg b < deg p - deg g, solved by least squares.
    """
    p, q = Poly(p), Poly(q)
    if p.is_zero() and q.is_zero():
        raise AllZero("extended_euclid needs a nonzero argument")
    if q.is_zero():
        return p.monic(), Poly(1.0 / p.lead), Poly()
    if p.is_zero():
        return q.monic(), Poly(), Poly(1.0 / q.lead)
    g = poly_gcd(p, q)
    k = g.degree
    if q.degree == k:
        return g, Poly(), Poly(1.0 / q.lead)
    if p.degree == k:
        return g, Poly(1.0 / p.lead), Poly()

    na, nb = q.degree - k, p.degree - k
    rows = p.degree + q.degree - k
    S = np.zeros((rows, na + nb), dtype=complex)
    for t in range(na):
        S[t:t + p.coeffs.size, t] = p.coeffs
    for t in range(nb):
        S[t:t + q.coeffs.size, na + t] = q.coeffs
    rhs = np.zeros(rows, dtype=complex)
    rhs[:g.coeffs.size] = g.coeffs
    x = np.linalg.lstsq(S, rhs, rcond=None)[0]
    return g, Poly(x[:na]), Poly(x[na:])


def _numerator(f):
    if isinstance(f, RationalFn):
        return f.num
    return Poly(f)


def _denominator(f):
    if isinstance(f, RationalFn):
        return f.den
    return Poly.one()


def bezout_tuple(F):
    """gcd of the (numerators of the) entries with Bezout cofactors."""
    polys = [_numerator(f) for f in F]
    n = len(polys)
    if all(p.is_zero() for p in polys):
        raise AllZero("every entry of the tuple is zero")

    units = [k for k, p in enumerate(polys) if p.degree == 0]
    if units:
        k = units[0]
        cof = [Poly() for _ in range(n)]
        cof[k] = Poly(1.0 / polys[k].lead)
        g = Poly.one()
    else:
        g = None
        cof = []
        for p in polys:
            if g is None:
                if p.is_zero():
                    cof.append(Poly())
                    continue
                g = p.monic()
                cof.append(Poly(1.0 / p.lead))
                continue
            g, a, b = extended_euclid(g, p)
            cof = [a * c for c in cof] + [b]

    combo = Poly()
    for c, p in zip(cof, polys):
        combo = combo + c * p
    diff = (combo - g).coeffs
    residual = float(np.abs(diff).max()) if diff.size else 0.0
    scale = max(1.0, sum(c.coeff_sum() * p.coeff_sum() for c, p in zip(cof, polys)))
    return BezoutCertificate(g, tuple(cof), residual, scale)


def corona_bezout(F, margin=DEFAULT_POLE_MARGIN):
    """Analytic G with F G^T = 1 identically; every pole of G lies at modulus >= margin."""
    cert = bezout_tuple(F)
    roots = cert.gcd.roots()
    inside = roots[np.abs(roots) < margin]
    if inside.size:
        raise CommonZeroInDisk(inside, margin)
    G = [RationalFn(a * _denominator(f), cert.gcd, pole_margin=margin).reduced()
         for a, f in zip(cert.cofactors, F)]
    return FnTuple(tuple(G))


def ideal_solve(F, h, margin=DEFAULT_POLE_MARGIN):
    """Analytic G with F G^T = h, when the gcd's roots near the disk divide h."""
    h = Poly(h)
    n = len(F)
    if h.is_zero():
        return FnTuple(tuple(RationalFn(Poly(), 1.0, margin) for _ in range(n)))
    cert = bezout_tuple(F)
    roots = cert.gcd.roots()
    near = np.abs(roots) < margin
    inner = Poly.from_roots(roots[near])
    outer = Poly.from_roots(roots[~near])
    quot, rem = divmod(h, inner)
    tol = IDEAL_DIVISION_RTOL * (1.0 + h.coeff_sum())
    worst = float(np.abs(rem.coeffs).max()) if rem.coeffs.size else 0.0
    if worst > tol:
        raise NotInIdealNumerically(
            f"gcd factor {inner!r} does not divide h: remainder {worst:.3e} > {tol:.3e}")
    G = [RationalFn(quot * a * _denominator(f), outer, pole_margin=margin).reduced()
         for a, f in zip(cert.cofactors, F)]
    return FnTuple(tuple(G))


def minimal_pointwise_solution(F, z):
    """conj(F(z)) / (F(z) F(z)^*): the least-norm vector v with F(z) v = 1 (not analytic in z)."""
    v, gram = tuple_eval(F, z)
    if gram <= np.finfo(float).tiny:
        raise GramianZero(f"F(z)F(z)^* vanishes at z={z}")
    return np.conj(v) / gram
