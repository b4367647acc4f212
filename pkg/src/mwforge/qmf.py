"""QMF/UEP verification on polyphase coefficients and the displacement identity.

Everything here works exactly on the finite coefficient sequences (no
circle sampling): F is paraunitary on the unit circle iff the Gram
coefficients G_k = sum_i F_i* F_{i+k} equal delta_{k0} I.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .masks import PolyphaseMatrix

__all__ = [
    "GramCoefficients",
    "EllMap",
    "gram_coefficients",
    "qmf_residual",
    "uep_residual",
    "build_ell",
    "ell_eval",
    "displacement_residual",
    "disk_samples",
]


@dataclass(frozen=True)
class GramCoefficients:
    """Laurent Gram sequence G_k, k = -N..N, with G_{-k} = G_k*."""

    coeffs: np.ndarray  # (2N+1, 2M, 2M), entry [k + N] holds G_k

    @property
    def N(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    def k(self, k: int) -> np.ndarray:
        return self.coeffs[k + self.N]


@dataclass(frozen=True)
class EllMap:
    """Block-Hankel coefficient matrix of the ell_N map.

    Block (r, c) equals F_{r+c+1} when r+c+1 <= N, else zero; the matrix
    acts on the stacked powers (I, xi I, ..., xi^{N-1} I).
    """

    matrix: np.ndarray  # 2MN x 2MN
    M: int
    N: int


def gram_coefficients(F: PolyphaseMatrix) -> GramCoefficients:
    """G_k = sum_{j-i=k} F_i* F_j by finite coefficient convolution."""
    N = F.N
    dim = 2 * F.M
    G = np.zeros((2 * N + 1, dim, dim), dtype=complex)
    for k in range(N + 1):
        acc = np.zeros((dim, dim), dtype=complex)
        for i in range(N + 1 - k):
            acc += F.coeffs[i].conj().T @ F.coeffs[i + k]
        G[k + N] = acc
        G[N - k] = acc.conj().T
    return GramCoefficients(G)


def qmf_residual(F: PolyphaseMatrix) -> float:
    """max_k || G_k - delta_{k0} I ||_F; zero iff F is paraunitary."""
    G = gram_coefficients(F)
    eye = np.eye(2 * F.M)
    r = 0.0
    for k in range(-F.N, F.N + 1):
        tgt = eye if k == 0 else 0.0
        r = max(r, np.linalg.norm(G.k(k) - tgt))
    return float(r)


def uep_residual(F: PolyphaseMatrix) -> float:
    """Co-isometry version: convolve F_i F_j* instead of F_i* F_j."""
    N = F.N
    eye = np.eye(2 * F.M)
    r = 0.0
    for k in range(N + 1):
        acc = np.zeros_like(F.coeffs[0])
        for i in range(N + 1 - k):
            acc += F.coeffs[i] @ F.coeffs[i + k].conj().T
        tgt = eye if k == 0 else 0.0
        r = max(r, np.linalg.norm(acc - tgt))
    return float(r)


def build_ell(F: PolyphaseMatrix) -> EllMap:
    """Assemble the block-Hankel ell_N coefficient matrix (N >= 1)."""
    if F.N == 0:
        raise ValueError("ell undefined for constant F")
    M, N = F.M, F.N
    dim = 2 * M
    H = np.zeros((dim * N, dim * N), dtype=complex)
    for r in range(N):
        for c in range(N):
            if r + c + 1 <= N:
                H[r * dim:(r + 1) * dim, c * dim:(c + 1) * dim] = F.coeffs[r + c + 1]
    return EllMap(H, M, N)


def ell_eval(ell: EllMap, xi: complex) -> np.ndarray:
    """ell_N(xi) as a 2MN x 2M matrix."""
    dim = 2 * ell.M
    powers = np.concatenate([xi ** c * np.eye(dim) for c in range(ell.N)])
    return ell.matrix @ powers


def disk_samples(samples: int, seed: int, radius: float = 0.9) -> np.ndarray:
    """Deterministic pseudo-random points, uniform on the disk of given radius."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(size=samples))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=samples)
    return r * np.exp(1j * theta)


def displacement_residual(F: PolyphaseMatrix, samples: int = 32, seed: int = 0) -> float:
    """Residual of I - F*(eta) F(xi) = (1 - xi conj(eta)) ell*(eta) ell(xi).

    Sampled at pseudo-random (xi, eta) pairs from the disk of radius 0.9.
    For constant F the identity degenerates to I - F0* F0 = 0 and that
    norm is returned directly.
    """
    eye = np.eye(2 * F.M)
    if F.N == 0:
        return float(np.linalg.norm(eye - F.coeffs[0].conj().T @ F.coeffs[0]))
    ell = build_ell(F)
    xis = disk_samples(samples, seed)
    etas = disk_samples(samples, seed + 1)
    r = 0.0
    for xi, eta in zip(xis, etas):
        lhs = eye - F.at(eta).conj().T @ F.at(xi)
        le = ell_eval(ell, eta)
        lx = ell_eval(ell, xi)
        rhs = (1.0 - xi * np.conj(eta)) * (le.conj().T @ lx)
        r = max(r, np.linalg.norm(lhs - rhs))
    return float(r)
