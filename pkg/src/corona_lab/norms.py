"""Sup/inf estimation on the unit disk and the bound functions used in the checks.

Every sup-norm is reported as an interval: a sampled lower estimate (maximum
modulus over boundary samples, valid because the entries are analytic) and a
coefficient-sum upper bound.  Bound checks compare against the sound side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, NonMonotone
from .functions import FnTuple, Poly, RationalFn, evaluate, sup_upper

__all__ = [
    "DiskGrid", "NormInterval", "sup_norm", "inf_gramian", "uchiyama_bound",
    "treil_psi", "psi_integral_check", "PsiIntegral", "check_treil_hypothesis",
    "check_wolff_hypothesis", "random_disk_points",
]

DEFAULT_RADII = (0.0, 0.25, 0.5, 0.75, 0.9, 0.99)
COMPARE_RTOL = 1e-12


@dataclass(frozen=True)
class DiskGrid:
    angular_count: int = 512
    radial_levels: tuple = DEFAULT_RADII
    boundary_count: int = 512

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radial_levels)
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radial levels must be strictly increasing")
        if radii and (radii[0] < 0 or radii[-1] >= 1):
            raise ValueError("radial levels must lie in [0, 1)")
        if self.angular_count < 8 or self.boundary_count < 8:
            raise ValueError("angular and boundary counts must be at least 8")
        object.__setattr__(self, "radial_levels", radii)

    def boundary_points(self, degree=0):
        m = max(self.boundary_count, 8 * int(degree))
        return np.exp(2j * np.pi * np.arange(m) / m)

    def interior_points(self):
        circle = np.exp(2j * np.pi * np.arange(self.angular_count) / self.angular_count)
        parts = [np.zeros(1, dtype=complex) if r == 0.0 else r * circle
                 for r in self.radial_levels]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def points(self, degree=0):
        return np.concatenate([self.interior_points(), self.boundary_points(degree)])

    def to_json(self):
        return {"angular_count": self.angular_count,
                "radial_levels": list(self.radial_levels),
                "boundary_count": self.boundary_count}

    @classmethod
    def from_json(cls, obj):
        obj = obj or {}
        return cls(int(obj.get("angular_count", 512)),
                   tuple(obj.get("radial_levels", DEFAULT_RADII)),
                   int(obj.get("boundary_count", 512)))


class NormInterval(NamedTuple):
    lower: float
    upper: float


def random_disk_points(rng, count, radius=1.0):
    """Uniformly distributed points in the disk of the given radius."""
    r = radius * np.sqrt(rng.random(count))
    return r * np.exp(2j * np.pi * rng.random(count))


def _degree(f):
    if isinstance(f, FnTuple):
        return f.max_degree
    if isinstance(f, RationalFn):
        return max(f.num.degree, f.den.degree)
    if isinstance(f, Poly):
        return max(f.degree, 0)
    return 0


def sup_norm(f, grid=None):
    """Interval enclosing sup over the disk of |f| (or of ||F(z)|| for a tuple)."""
    grid = grid or DiskGrid()
    pts = grid.boundary_points(_degree(f))
    if isinstance(f, FnTuple):
        lower = float(np.sqrt(f.gramian(pts).max()))
        upper = math.sqrt(sum(sup_upper(e) ** 2 for e in f) + f.tail_bound ** 2)
    else:
        lower = float(np.abs(evaluate(f, pts)).max())
        upper = float(sup_upper(f))
    assert lower <= upper * (1 + COMPARE_RTOL) + 1e-300, (lower, upper)
    return NormInterval(lower, upper)


def inf_gramian(F, grid=None):
    """Minimum of F(z)F(z)^* over the full 2-D grid.

    This over-estimates the true infimum and is for reporting only.
    """
    grid = grid or DiskGrid()
    return float(F.gramian(grid.points(F.max_degree)).min())


def uchiyama_bound(eps_sq):
    """(9 / eps^2) ln(1 / eps^2), defined for 0 < eps^2 < 1/e."""
    if not 0.0 < eps_sq < math.exp(-1.0):
        raise DomainError(f"eps^2 = {eps_sq} outside (0, 1/e)")
    return 9.0 / eps_sq * math.log(1.0 / eps_sq)


def treil_psi(t, n=0, eps_exp=1.0):
    """Iterated-logarithm weight 1 / (L_1 L_2 ... L_{n+1} L_{n+2}^(1+eps_exp)).

    L_1 = ln(t^-2) and L_{k+1} = ln L_k.  Every L_k used must be positive.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"t = {t} outside (0, 1)", )
    logs = []
    val = -2.0 * math.log(t)
    for k in range(1, n + 3):
        if k > 1:
            val = math.log(val)
        if val <= 0.0:
            raise DomainError(f"iterated log L_{k}(t^-2) = {val} is not positive at t = {t}")
        logs.append(val)
    prod = math.prod(logs[:n + 1]) * logs[n + 1] ** (1.0 + eps_exp)
    return 1.0 / prod


class PsiIntegral(NamedTuple):
    value: float
    partials: tuple


def psi_integral_check(psi: Callable[[float], float], quad_points=32, t_max=1.0,
                       t_mins=(1e-2, 1e-4, 1e-8, 1e-16)):
    """Partial integrals of psi(t)/t over [t_min, t_max] for shrinking t_min.

    Integrates psi(e^u) du with composite Gauss-Legendre, one panel per
    decade of t.  ``value`` is the partial integral at the smallest t_min;
    the sequence of partials shows the trend (a diagnostic, not a proof).
    """
    x, w = np.polynomial.legendre.leggauss(quad_points)
    ub = math.log(t_max)
    partials = []
    samples = []
    for t_min in sorted(t_mins, reverse=True):
        ua = math.log(t_min)
        panels = max(1, math.ceil((ub - ua) / math.log(10.0)))
        edges = np.linspace(ua, ub, panels + 1)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            u = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
            vals = np.array([psi(math.exp(v)) for v in u], dtype=float)
            samples.append(np.column_stack([u, vals]))
            total += 0.5 * (hi - lo) * float(np.dot(w, vals))
        partials.append((t_min, total))

    pts = np.concatenate(samples)
    pts = pts[np.argsort(pts[:, 0], kind="stable")]
    if np.any(pts[:, 1] < 0):
        raise ValueError("psi must be nonnegative")
    drops = pts[:-1, 1] - pts[1:, 1]
    if np.any(drops > COMPARE_RTOL * np.maximum(np.abs(pts[:-1, 1]), 1e-300)):
        k = int(np.argmax(drops))
        raise NonMonotone(f"psi decreases near t = {math.exp(pts[k, 0]):.6g}")
    return PsiIntegral(partials[-1][1], tuple(partials))


def _witness(z, habs, gram, bound):
    return {"z": [float(z.real), float(z.imag)], "h_abs": float(habs),
            "gramian": float(gram), "bound": float(bound)}


def _check_pointwise(F, h, grid, bound_of_gramian):
    grid = grid or DiskGrid()
    pts = grid.points(max(F.max_degree, _degree(h)))
    gram = F.gramian(pts)
    bound = bound_of_gramian(gram)
    habs = np.abs(np.broadcast_to(evaluate(h, pts), pts.shape))
    slack = COMPARE_RTOL * np.maximum(bound, 1.0)
    excess = np.maximum(habs - bound - slack, bound - 1.0 - slack)
    k = int(np.argmax(excess))
    if excess[k] > 0:
        return False, _witness(pts[k], habs[k], gram[k], bound[k])
    return True, None


def check_treil_hypothesis(F, h, psi, grid=None):
    """Check |h| <= FF^* psi(FF^*) <= 1 on the grid; witness is the worst offending point."""
    def bound(gram):
        return gram * np.array([psi(float(g)) for g in gram])
    return _check_pointwise(F, h, grid, bound)


def check_wolff_hypothesis(F, h, grid=None):
    """Check |h| <= sqrt(FF^*) <= 1 on the grid; witness is the worst offending point."""
    return _check_pointwise(F, h, grid, np.sqrt)
