"""Unitary ABCD system realizations of paraunitary polynomial transfer functions.

A degree-N polyphase matrix F is realized as F(xi) = A + B xi (I - D xi)^{-1} C
with [[A, B], [C, D]] unitary whenever F satisfies the QMF condition.  The
blocks come from the block circulant of F_0..F_N multiplied by diag(I, U),
where U is the block circulant with first block row
(F_0* + F_N*, F_1*, ..., F_{N-1}*).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .masks import PolyphaseMatrix
from .qmf import build_ell, ell_eval, disk_samples

__all__ = [
    "Realization",
    "build_abcd",
    "unitarity_residual",
    "transfer_eval",
    "taylor_masks",
    "nilpotency_residual",
    "state_equation_residual",
]


@dataclass(frozen=True)
class Realization:
    M: int
    N: int
    A: np.ndarray  # 2M x 2M
    B: np.ndarray  # 2M x 2MN
    C: np.ndarray  # 2MN x 2M
    D: np.ndarray  # 2MN x 2MN
    U: np.ndarray  # 2MN x 2MN

    @property
    def block_matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])


def build_abcd(F: PolyphaseMatrix) -> Realization:
    """Assemble the ABCD blocks from the polyphase coefficients.

    No QMF validation is performed here; certification is a separate
    step so the residuals of non-QMF inputs stay observable.
    """
    if F.N == 0:
        raise ValueError("degenerate realization: F constant, A = F0")
    M, N = F.M, F.N
    dim = 2 * M
    Fc = F.coeffs

    first_row = [Fc[0].conj().T + Fc[N].conj().T] + [Fc[k].conj().T for k in range(1, N)]
    U = np.zeros((dim * N, dim * N), dtype=complex)
    for r in range(N):
        for c in range(N):
            U[r * dim:(r + 1) * dim, c * dim:(c + 1) * dim] = first_row[(c - r) % N]

    A = Fc[0].copy()
    C = np.vstack([Fc[j] for j in range(1, N + 1)])
    B = np.hstack([Fc[N - c] for c in range(N)]) @ U
    Dtilde = np.block([[Fc[(r - c) % (N + 1)] for c in range(1, N + 1)]
                       for r in range(1, N + 1)])
    D = Dtilde @ U
    return Realization(M, N, A, B, C, D, U)


def unitarity_residual(X: np.ndarray) -> float:
    """|| X*X - I ||_F."""
    X = np.asarray(X, dtype=complex)
    return float(np.linalg.norm(X.conj().T @ X - np.eye(X.shape[1])))


def transfer_eval(R: Realization, xi: complex) -> np.ndarray:
    """Evaluate A + B xi (I - D xi)^{-1} C.

    Inside the open unit disk the resolvent is computed by a linear
    solve; elsewhere the terminating power series A + sum_j B D^{j-1} C xi^j
    is used (valid because B D^N = 0 for realizations of QMF inputs).
    """
    if abs(xi) < 1.0:
        eye = np.eye(R.D.shape[0])
        try:
            X = np.linalg.solve(eye - xi * R.D, R.C)
        except np.linalg.LinAlgError as exc:
            raise ValueError(
                "resolvent solve failed: D is not contractive "
                "(realization was not built from a QMF polyphase matrix)"
            ) from exc
        return R.A + xi * (R.B @ X)
    out = R.A.astype(complex).copy()
    BDj = R.B.copy()
    for j in range(1, R.N + 1):
        out = out + (xi ** j) * (BDj @ R.C)
        BDj = BDj @ R.D
    return out


def nilpotency_residual(R: Realization) -> float:
    """|| B D^N ||_F (zero for realizations of QMF inputs)."""
    return float(np.linalg.norm(R.B @ np.linalg.matrix_power(R.D, R.N)))


def taylor_masks(R: Realization, tol: float = 1e-10) -> PolyphaseMatrix:
    """Read the polynomial coefficients F_0 = A, F_j = B D^{j-1} C off R.

    Requires the series to terminate: || B D^N || must be below tol.
    """
    if nilpotency_residual(R) > tol:
        raise ValueError("nilpotency violation: B D^N != 0, series does not terminate")
    coeffs = [R.A]
    BDj = R.B
    for _ in range(1, R.N + 1):
        coeffs.append(BDj @ R.C)
        BDj = BDj @ R.D
    return PolyphaseMatrix(np.array(coeffs))


def state_equation_residual(R: Realization, F: PolyphaseMatrix,
                            samples: int = 64, seed: int = 0) -> float:
    """Max sampled residual of F = A + xi B ell and ell = C + xi D ell."""
    if F.N == 0:
        raise ValueError("state equation undefined for constant F")
    ell = build_ell(F)
    r = 0.0
    for xi in disk_samples(samples, seed):
        lx = ell_eval(ell, xi)
        r = max(r, np.linalg.norm(F.at(xi) - (R.A + xi * (R.B @ lx))))
        r = max(r, np.linalg.norm(lx - (R.C + xi * (R.D @ lx))))
    return float(r)
