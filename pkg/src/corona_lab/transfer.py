"""Turn an H-infinity solution G of F G^T = h into a solution in the subalgebra.

With x = conj(F_c) / ||F_c||^2 the corrected tuple

    U^T = G^T + Q_F Q_G^T x

still solves F U^T = h (the columns of Q_F lie in ker F), and
U^T = h_c x + (phi_h - G^T phi_F) x, so U - h_c x has every entry in the
ideal.  The correction is expanded in exact polynomial/rational arithmetic,
so membership is checked on coefficients rather than on samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bezout import ideal_solve
from .errors import (DimensionMismatch, FcZero, HypothesisViolated,
                     NotASolution, SupExceedsOne)
from .functions import (FnTuple, Poly, SubalgebraTuple, decompose, evaluate,
                        fn_to_json, membership_tol, sup_upper)
from .kernel import build_q
from .norms import (COMPARE_RTOL, DiskGrid, NormInterval, check_wolff_hypothesis,
                    sup_norm)

__all__ = [
    "TransferResult", "Lemma22Report", "correction_term", "transfer_corona",
    "transfer_ideal", "wolff_pipeline", "lemma22_check", "eq4_residual",
    "correction_orthogonality",
]

PRECONDITION_RTOL = 1e-9
FC_FLOOR = 1e-14
ZERO_GRAMIAN_ATOL = 1e-12


@dataclass
class TransferResult:
    solution: FnTuple
    constant_part: np.ndarray
    expected_constant: np.ndarray
    residual_sup: float
    residual_scale: float
    membership_max: float
    membership_tol: float
    norm_sampled: float
    norm_bound_rhs: float
    g_norm: NormInterval = field(default=None)
    fc_norm: float = 0.0

    @property
    def constant_error(self):
        return float(np.abs(self.constant_part - self.expected_constant).max())

    def to_json(self):
        def cvec(v):
            return [[float(c.real), float(c.imag)] for c in v]
        return {
            "solution": [fn_to_json(u) for u in self.solution],
            "constant_part": cvec(self.constant_part),
            "expected_constant": cvec(self.expected_constant),
            "residual_sup": self.residual_sup,
            "residual_scale": self.residual_scale,
            "membership_max": self.membership_max,
            "membership_tol": self.membership_tol,
            "norm_sampled": self.norm_sampled,
            "norm_bound_rhs": self.norm_bound_rhs,
            "g_norm": list(self.g_norm) if self.g_norm is not None else None,
            "fc_norm": self.fc_norm,
        }


def correction_term(F, G, x):
    """Q_F Q_G^T x, entrywise, for ring-valued F, G and a constant vector x."""
    if len(F) != len(G) or len(F) != len(x):
        raise DimensionMismatch("F, G and x must have equal length")
    qf = build_q(tuple(F))
    qg = build_q(tuple(G))
    return qf.apply(qg.apply_transpose([complex(c) for c in x]))


def _degree(u):
    return FnTuple((u,)).max_degree if not isinstance(u, FnTuple) else u.max_degree


def _pairing(F, G, z):
    return np.sum(F.values(z) * G.values(z), axis=0)


def _transfer(F, G, target, target_const, grid, pre_rtol):
    if len(G) != len(F):
        raise DimensionMismatch(f"F has {len(F)} entries, G has {len(G)}")
    grid = grid or DiskGrid()
    fc = F.constant_part
    fcn = F.fc_norm
    if fcn <= FC_FLOOR:
        raise FcZero("constant part F_c vanishes")

    ftup = F.tuple
    deg = max(ftup.max_degree, G.max_degree, _degree(target))
    bpts = grid.boundary_points(deg)
    pre_scale = 1.0 + sum(sup_upper(f) * sup_upper(g) for f, g in zip(ftup, G))
    pre = float(np.abs(_pairing(ftup, G, bpts) - evaluate(target, bpts)).max())
    if pre > pre_rtol * pre_scale:
        raise NotASolution(f"|F G^T - h| = {pre:.3e} on the boundary exceeds "
                           f"{pre_rtol:.1e} x scale {pre_scale:.3e}")

    x = np.conj(fc) / fcn ** 2
    corr = correction_term(ftup, G, x)
    U = FnTuple(tuple(g + c for g, c in zip(G, corr)))

    pts = grid.points(max(deg, U.max_degree))
    residual = float(np.abs(_pairing(ftup, U, pts) - evaluate(target, pts)).max())
    scale = 1.0 + sum(sup_upper(f) * sup_upper(u) for f, u in zip(ftup, U))

    expected = target_const * x
    z1 = F.ideal.zeros[0][0]
    consts = np.array([complex(evaluate(u, z1)) for u in U])
    memb = max(F.ideal.membership_residual(u, c)[0] for u, c in zip(U, expected))
    mtol = max(membership_tol(u) for u in U)

    norm_sampled = float(np.sqrt(U.gramian(pts).max()))
    gn = sup_norm(G, grid)
    rhs = (1.0 + 1.0 / fcn) * gn.upper
    return TransferResult(U, consts, expected, residual, scale, memb, mtol,
                          norm_sampled, rhs, gn, fcn)


def _check_ideal(F, ideal):
    if ideal is not None and ideal != F.ideal:
        raise ValueError("ideal does not match the one F was decomposed over")


def transfer_corona(F: SubalgebraTuple, G: FnTuple, ideal=None, grid=None,
                    pre_rtol=PRECONDITION_RTOL):
    """Subalgebra solution U of F U^T = 1 from an H-infinity solution G."""
    _check_ideal(F, ideal)
    return _transfer(F, G, Poly.one(), 1.0, grid, pre_rtol)


def transfer_ideal(F: SubalgebraTuple, G: FnTuple, h, ideal=None, grid=None,
                   pre_rtol=PRECONDITION_RTOL):
    """Subalgebra solution V of F V^T = h; h must itself lie in the subalgebra."""
    _check_ideal(F, ideal)
    h_c, _ = decompose(h, F.ideal)
    return _transfer(F, G, h, h_c, grid, pre_rtol)


def wolff_pipeline(F: SubalgebraTuple, h, ideal=None, grid=None, margin=1.05,
                   pre_rtol=PRECONDITION_RTOL):
    """Solve F V^T = h^3 in the subalgebra, after checking |h| <= sqrt(FF^*) <= 1 on the grid."""
    _check_ideal(F, ideal)
    h = Poly(h)
    decompose(h, F.ideal)
    holds, witness = check_wolff_hypothesis(F.tuple, h, grid)
    if not holds:
        raise HypothesisViolated(
            f"|h| <= sqrt(FF^*) <= 1 fails at z = {complex(*witness['z']):.6g}", witness)
    h3 = h ** 3
    G = ideal_solve(F.tuple, h3, margin)
    return transfer_ideal(F, G, h3, grid=grid, pre_rtol=pre_rtol)


@dataclass
class Lemma22Report:
    sup_gramian_upper: float
    fc_norm_sq: float
    gramian_at_zeros: list
    zero_deviation: float
    phi_norm: NormInterval
    eps_sq: float = None

    @property
    def passed(self):
        ok = (self.zero_deviation <= ZERO_GRAMIAN_ATOL
              and self.fc_norm_sq <= 1.0 + COMPARE_RTOL
              and self.phi_norm.lower <= 2.0 + 1e-8)
        if self.eps_sq is not None:
            ok = ok and self.eps_sq <= self.fc_norm_sq * (1 + COMPARE_RTOL)
        return ok

    def to_json(self):
        return {"sup_gramian_upper": self.sup_gramian_upper,
                "fc_norm_sq": self.fc_norm_sq,
                "gramian_at_zeros": self.gramian_at_zeros,
                "zero_deviation": self.zero_deviation,
                "phi_norm": list(self.phi_norm),
                "eps_sq": self.eps_sq}


def lemma22_check(F: SubalgebraTuple, grid=None, eps=None):
    """Constant-part and ideal-part bounds for normalised subalgebra data.

    At every ideal zero the ideal part vanishes, so FF^* there equals
    ||F_c||^2; hence any valid lower corona bound eps obeys eps^2 <= ||F_c||^2.
    """
    upper = sup_norm(F.tuple, grid).upper ** 2
    if upper > 1.0 + COMPARE_RTOL:
        raise SupExceedsOne(f"coefficient bound on sup FF^* is {upper:.6g} > 1")
    fc2 = F.fc_norm ** 2
    at_zeros = [float(F.tuple.gramian(z)) for z in F.ideal.points]
    dev = max(abs(g - fc2) for g in at_zeros)
    return Lemma22Report(upper, fc2, at_zeros, dev, sup_norm(F.ideal_part, grid),
                         None if eps is None else float(eps) ** 2)


def eq4_residual(F: SubalgebraTuple, G: FnTuple, z):
    """Spectral norm of I - (G^T F_c + Q_F Q_G^T + G^T phi_F) at z, and its scale."""
    fz = F.tuple.values(complex(z))
    gz = G.values(complex(z))
    pz = F.ideal_part.values(complex(z))
    qq = build_q(fz).dense() @ build_q(gz).dense().T
    m = np.outer(gz, F.constant_part) + qq + np.outer(gz, pz)
    res = float(np.linalg.norm(np.eye(len(fz)) - m, 2))
    ng = float(np.linalg.norm(gz))
    scale = 1.0 + ng * (np.linalg.norm(fz) + F.fc_norm + np.linalg.norm(pz))
    return res, float(scale)


def correction_orthogonality(F: FnTuple, G: FnTuple, x, z):
    """|F(z) Q_F(z) Q_G(z)^T x|: zero because Q_F maps into ker F(z)."""
    fz = F.values(complex(z))
    gz = G.values(complex(z))
    v = build_q(fz).dense() @ (build_q(gz).dense().T @ np.asarray(x, dtype=complex))
    return float(abs(fz @ v))

