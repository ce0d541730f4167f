"""The pair kernel matrix Q_A of a row vector A = (a_1, ..., a_n).

Q_A has one column per index pair (i, j), i < j, in lexicographic order.
Column (i, j) carries +a_j in row i and -a_i in row j.  Every column is
annihilated by A, the columns span ker A when A != 0, and

    Q_A Q_A^* = (A A^*) I - A^* A,      Q_A Q_D^T = (A D^T) I - D^T A.

Entries may be numbers or any ring elements (polynomials, rational
functions); the dense/numeric helpers require numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch

__all__ = [
    "KernelMatrix", "build_q", "q_identity_self", "q_identity_pair",
    "q_kernel_check", "q_norm", "build_q_truncated", "dense_to_json",
]


@lru_cache(maxsize=None)
def _pairs(n):
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def _pair_index(n):
    p = _pairs(n)
    rows_i = np.array([i for i, _ in p], dtype=int)
    rows_j = np.array([j for _, j in p], dtype=int)
    return rows_i, rows_j


@dataclass(frozen=True)
class KernelMatrix:
    coefficients: tuple

    @property
    def n(self):
        return len(self.coefficients)

    @property
    def columns(self):
        return _pairs(self.n)

    @property
    def ncols(self):
        return self.n * (self.n - 1) // 2

    @property
    def shape(self):
        return self.n, self.ncols

    def column(self, c):
        """The two nonzero entries of column c as ((row, value), (row, value))."""
        i, j = self.columns[c]
        a = self.coefficients
        return (i, a[j]), (j, -a[i])

    def pattern(self):
        """Signed 1-based index pattern: +k for a_k, -k for -a_k, 0 for an empty slot."""
        out = np.zeros(self.shape, dtype=int)
        for c, (i, j) in enumerate(self.columns):
            out[i, c] = j + 1
            out[j, c] = -(i + 1)
        return out

    def dense(self):
        a = np.asarray(self.coefficients, dtype=complex)
        out = np.zeros(self.shape, dtype=complex)
        if self.ncols:
            ri, rj = _pair_index(self.n)
            cols = np.arange(self.ncols)
            out[ri, cols] = a[rj]
            out[rj, cols] = -a[ri]
        return out

    def apply(self, x):
        """Q x for a length-C(n,2) sequence x of ring elements."""
        if len(x) != self.ncols:
            raise DimensionMismatch(f"expected {self.ncols} entries, got {len(x)}")
        a = self.coefficients
        out = [0] * self.n
        for c, (i, j) in enumerate(self.columns):
            out[i] = out[i] + a[j] * x[c]
            out[j] = out[j] - a[i] * x[c]
        return out

    def apply_transpose(self, y):
        """Q^T y (plain transpose, no conjugation) for a length-n sequence y."""
        if len(y) != self.n:
            raise DimensionMismatch(f"expected {self.n} entries, got {len(y)}")
        a = self.coefficients
        return [a[j] * y[i] - a[i] * y[j] for i, j in self.columns]

    def _matvec(self, x):
        a = np.asarray(self.coefficients, dtype=complex)
        ri, rj = _pair_index(self.n)
        out = np.zeros(self.n, dtype=complex)
        np.add.at(out, ri, a[rj] * x)
        np.add.at(out, rj, -a[ri] * x)
        return out

    def _rmatvec_adjoint(self, y):
        a = np.asarray(self.coefficients, dtype=complex)
        ri, rj = _pair_index(self.n)
        return np.conj(a[rj]) * y[ri] - np.conj(a[ri]) * y[rj]


def build_q(a):
    return KernelMatrix(tuple(a))


def _vec(a):
    return np.asarray(a, dtype=complex).ravel()


def q_identity_self(a):
    """Frobenius residual of Q_A Q_A^* against (A A^*) I - A^* A."""
    a = _vec(a)
    q = build_q(a).dense()
    lhs = q @ q.conj().T
    rhs = np.vdot(a, a).real * np.eye(a.size) - np.outer(a.conj(), a)
    return float(np.linalg.norm(lhs - rhs))


def q_identity_pair(a, d):
    """Frobenius residual of Q_A Q_D^T against (A D^T) I - D^T A."""
    a, d = _vec(a), _vec(d)
    if a.size != d.size:
        raise DimensionMismatch(f"lengths {a.size} and {d.size} differ")
    lhs = build_q(a).dense() @ build_q(d).dense().T
    rhs = np.dot(a, d) * np.eye(a.size) - np.outer(d, a)
    return float(np.linalg.norm(lhs - rhs))


def q_kernel_check(a):
    """(||A Q_A||, numerical rank of Q_A)."""
    a = _vec(a)
    q = build_q(a).dense()
    if q.shape[1] == 0:
        return 0.0, 0
    residual = float(np.linalg.norm(a @ q))
    return residual, int(np.linalg.matrix_rank(q))


def q_norm(a, maxiter=500, rtol=1e-15, seed=0):
    """Largest singular value of Q_A by power iteration on Q_A Q_A^*."""
    a = _vec(a)
    Q = build_q(a)
    if Q.ncols == 0 or not np.any(a):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.size) + 1j * rng.standard_normal(a.size)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(maxiter):
        w = Q._matvec(Q._rmatvec_adjoint(v))
        new = float(np.vdot(v, w).real)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(new - lam) <= rtol * new:
            lam = new
            break
        lam = new
    return float(np.sqrt(max(lam, 0.0)))


def build_q_truncated(prefix, tail_bound):
    """Q of a finite prefix, plus the bound 2 t (||prefix|| + t) on the identity
    residual against the operator built from the full sequence (t = tail l2 norm)."""
    if tail_bound < 0:
        raise ValueError("tail_bound must be nonnegative")
    a = _vec(prefix)
    t = float(tail_bound)
    return build_q(a), 2.0 * t * (float(np.linalg.norm(a)) + t)


def dense_to_json(Q):
    m = Q.dense()
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]
