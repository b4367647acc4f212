"""Core mask/symbol types, polyphase packing, and moment diagnostics.

A mask is a finitely supported sequence of M x M complex matrices
p_0 ... p_n.  Masks are stored QMF-normalized: the symbol of a valid
low-pass mask satisfies p(1) v = sqrt(2) v on its sum-rule vectors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RT2 = np.sqrt(2.0)

__all__ = [
    "RT2",
    "MatrixMask",
    "MaskPair",
    "SumRuleVectors",
    "PolyphaseMatrix",
    "symbol_eval",
    "sum_rule_residual",
    "spectral_condition_holds",
    "vanishing_moment_residual",
    "polyphase_assemble",
    "polyphase_split",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class MatrixMask:
    """Sequence of n+1 complex M x M matrices indexed alpha = 0..n.

    Scalar masks may be given as a flat sequence of numbers; they are
    stored with M = 1.  Support is *not* forced to be tight (leading or
    trailing zero matrices are legal); use ``trimmed`` to drop trailing
    zeros when a tight upper end is wanted.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim == 1:
            c = c.reshape(-1, 1, 1)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] == 0:
            raise ValueError("mask coefficients must be an (n+1, M, M) array")
        object.__setattr__(self, "coeffs", _freeze(c))

    @property
    def M(self) -> int:
        return self.coeffs.shape[1]

    @property
    def n(self) -> int:
        """Support end: the mask lives on alpha = 0..n."""
        return self.coeffs.shape[0] - 1

    def padded(self, n: int) -> "MatrixMask":
        """Zero-pad the support up to alpha = n."""
        if n < self.n:
            raise ValueError("cannot pad to a shorter support")
        if n == self.n:
            return self
        extra = np.zeros((n - self.n, self.M, self.M), dtype=complex)
        return MatrixMask(np.concatenate([self.coeffs, extra]))

    def trimmed(self) -> "MatrixMask":
        """Drop trailing all-zero coefficient matrices (keep at least one)."""
        end = self.n
        while end > 0 and not self.coeffs[end].any():
            end -= 1
        return MatrixMask(self.coeffs[: end + 1])


@dataclass(frozen=True)
class MaskPair:
    """A (p, q) mask pair; the shorter mask is zero-padded on construction."""

    p: MatrixMask
    q: MatrixMask

    def __post_init__(self):
        if self.p.M != self.q.M:
            raise ValueError("p and q must have the same matrix dimension")
        n = max(self.p.n, self.q.n)
        object.__setattr__(self, "p", self.p.padded(n))
        object.__setattr__(self, "q", self.q.padded(n))

    @property
    def M(self) -> int:
        return self.p.M

    @property
    def n(self) -> int:
        return self.p.n


@dataclass(frozen=True)
class SumRuleVectors:
    """M-tilde linearly independent nonzero vectors, stored as rows."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[0] > v.shape[1]:
            raise ValueError("need 1 <= M-tilde <= M row vectors")
        if np.linalg.matrix_rank(v) != v.shape[0]:
            raise ValueError("sum-rule vectors must be linearly independent")
        object.__setattr__(self, "vectors", _freeze(v))

    @property
    def M(self) -> int:
        return self.vectors.shape[1]

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def full_rank(self) -> bool:
        return self.count == self.M


@dataclass(frozen=True)
class PolyphaseMatrix:
    """Polynomial F(xi) = sum_j F_j xi^j with 2M x 2M complex coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[1] % 2:
            raise ValueError("polyphase coefficients must be (N+1, 2M, 2M)")
        object.__setattr__(self, "coeffs", _freeze(c))

    @property
    def M(self) -> int:
        return self.coeffs.shape[1] // 2

    @property
    def N(self) -> int:
        return self.coeffs.shape[0] - 1

    def at(self, xi: complex) -> np.ndarray:
        """Evaluate F(xi) by Horner's scheme."""
        out = np.zeros_like(self.coeffs[0])
        for c in self.coeffs[::-1]:
            out = out * xi + c
        return out


def symbol_eval(mask: MatrixMask, z: complex) -> np.ndarray:
    """Evaluate the symbol p(z) = sum_alpha p_alpha z^alpha."""
    out = np.zeros_like(mask.coeffs[0])
    for c in mask.coeffs[::-1]:
        out = out * z + c
    return out


def _moment(mask: MatrixMask, m: int, alternating: bool) -> np.ndarray:
    """sum_alpha (+-1)^alpha alpha^m p_alpha as an M x M matrix."""
    alpha = np.arange(mask.n + 1)
    w = alpha.astype(float) ** m
    if alternating:
        w = w * (-1.0) ** alpha
    return np.tensordot(w, mask.coeffs, axes=1)


def sum_rule_residual(p: MatrixMask, v: SumRuleVectors, order: int) -> float:
    """Residual of the sum rules of the given order.

    Order 1 checks p(1) v_j = sqrt(2) v_j and p(-1) v_j = 0 for every
    sum-rule vector.  Higher orders additionally require the alternating
    moments sum_alpha (-1)^alpha alpha^m p_alpha, m = 1..order-1, to
    vanish; those matrix conditions are only meaningful in the scalar /
    full rank case.
    """
    if p.M != v.M:
        raise ValueError("mask and sum-rule vectors have mismatched dimension")
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > 1 and not v.full_rank:
        raise ValueError("unsupported order for rank-1 sum rules")
    p1 = symbol_eval(p, 1.0)
    pm1 = symbol_eval(p, -1.0)
    r = 0.0
    for vec in v.vectors:
        r = max(r, np.linalg.norm(p1 @ vec - RT2 * vec))
        r = max(r, np.linalg.norm(pm1 @ vec))
    for m in range(1, order):
        r = max(r, np.linalg.norm(_moment(p, m, alternating=True)))
    return float(r)


def spectral_condition_holds(p: MatrixMask, v: SumRuleVectors, tol: float = 1e-8) -> bool:
    """True when every eigenvalue of p(1) off span{v_j} has modulus < sqrt(2)."""
    lam, vec = np.linalg.eig(symbol_eval(p, 1.0))
    basis, _ = np.linalg.qr(v.vectors.conj().T)
    for i in range(len(lam)):
        w = vec[:, i]
        off = w - basis @ (basis.conj().T @ w)
        if np.linalg.norm(off) > tol and abs(lam[i]) >= RT2 - tol:
            return False
    return True


def vanishing_moment_residual(q: MatrixMask, v: SumRuleVectors, order: int) -> float:
    """Residual of the discrete vanishing moments of the given order.

    Order 1 checks q(1)* v_j = 0; higher orders add the plain moments
    sum_alpha alpha^m q_alpha, m = 1..order-1 (full rank only).
    """
    if q.M != v.M:
        raise ValueError("mask and sum-rule vectors have mismatched dimension")
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > 1 and not v.full_rank:
        raise ValueError("unsupported order for rank-1 vanishing moments")
    q1s = symbol_eval(q, 1.0).conj().T
    r = 0.0
    for vec in v.vectors:
        r = max(r, np.linalg.norm(q1s @ vec))
    for m in range(1, order):
        r = max(r, np.linalg.norm(_moment(q, m, alternating=False)))
    return float(r)


def polyphase_assemble(pair: MaskPair) -> PolyphaseMatrix:
    """Pack (p, q) into F_j = [[p_2j, q_2j], [p_2j+1, q_2j+1]], j = 0..N.

    N = floor(n/2); masks with even support end are zero-padded so the
    odd phase of the top coefficient exists.
    """
    N = pair.n // 2
    p = pair.p.padded(2 * N + 1).coeffs
    q = pair.q.padded(2 * N + 1).coeffs
    M = pair.M
    F = np.zeros((N + 1, 2 * M, 2 * M), dtype=complex)
    for j in range(N + 1):
        F[j, :M, :M] = p[2 * j]
        F[j, :M, M:] = q[2 * j]
        F[j, M:, :M] = p[2 * j + 1]
        F[j, M:, M:] = q[2 * j + 1]
    return PolyphaseMatrix(F)


def polyphase_split(F: PolyphaseMatrix) -> MaskPair:
    """Inverse of polyphase_assemble (round-trips up to zero padding)."""
    M, N = F.M, F.N
    p = np.zeros((2 * N + 2, M, M), dtype=complex)
    q = np.zeros((2 * N + 2, M, M), dtype=complex)
    for j in range(N + 1):
        p[2 * j] = F.coeffs[j, :M, :M]
        q[2 * j] = F.coeffs[j, :M, M:]
        p[2 * j + 1] = F.coeffs[j, M:, :M]
        q[2 * j + 1] = F.coeffs[j, M:, M:]
    return MaskPair(MatrixMask(p), MatrixMask(q))
