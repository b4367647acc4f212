"""Periodic analysis/synthesis transforms and cascade rendering of the
refinable function pair.

Signals are rows of dimension M with periodic boundary; downsampling by 2
requires even length.  The transform pair is the canonical adjoint pair
induced by the QMF condition, so perfect reconstruction is exact (up to
round-off) whenever the mask pair is orthogonal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .masks import RT2, MaskPair, SumRuleVectors, sum_rule_residual

__all__ = [
    "Signal",
    "SubbandPair",
    "CascadeResult",
    "analyze",
    "synthesize",
    "cascade",
    "l2_norm_residual",
]


@dataclass(frozen=True)
class Signal:
    """L periodic samples, each a row vector of dimension M.

    The analysis transform requires L even; subband halves may be odd.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2:
            raise ValueError("signal values must be an (L, M) array")
        if v.shape[0] == 0:
            raise ValueError("signal must have at least one sample")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def L(self) -> int:
        return self.values.shape[0]

    @property
    def M(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SubbandPair:
    low: Signal
    high: Signal

    def __post_init__(self):
        if self.low.L != self.high.L or self.low.M != self.high.M:
            raise ValueError("subband dimensions differ")

    @property
    def M(self) -> int:
        return self.low.M


@dataclass(frozen=True)
class CascadeResult:
    """Piecewise-constant samples of phi and psi on the dyadic grid over
    [0, n+1); one row (K = 1) of the matrix-valued solution, selected by
    the sum-rule vector.  `diffs` records the sup-difference between
    consecutive iterates, one entry per refinement step."""

    level: int
    step: float
    x: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    diffs: tuple


def analyze(c: Signal, pair: MaskPair) -> SubbandPair:
    """low[k] = sum_a (p_{a-2k})* c[a], high likewise, indices mod L.

    Samples transform as column vectors (left multiplication by the
    conjugate-transposed mask); with row-side multiplication the QMF
    orthogonality relations would not give back the identity.
    """
    if c.M != pair.M:
        raise ValueError("mask and signal dimensions differ")
    if c.L % 2 != 0:
        raise ValueError("downsampling by 2 requires even signal length")
    if c.L < pair.n:
        raise ValueError("signal shorter than the mask support")
    L, K = c.L, c.L // 2
    beta = np.arange(pair.n + 1)
    idx = (2 * np.arange(K)[:, None] + beta[None, :]) % L
    gathered = c.values[idx]  # (K, n+1, M)
    low = np.einsum("kbm,bmj->kj", gathered, pair.p.coeffs.conj())
    high = np.einsum("kbm,bmj->kj", gathered, pair.q.coeffs.conj())
    return SubbandPair(Signal(low), Signal(high))


def synthesize(s: SubbandPair, pair: MaskPair) -> Signal:
    """c[a] = sum_k (p_{a-2k} low[k] + q_{a-2k} high[k]), indices mod L;
    exact inverse of analyze whenever the pair is orthogonal."""
    if s.M != pair.M:
        raise ValueError("mask and subband dimensions differ")
    K = s.low.L
    L = 2 * K
    beta = np.arange(pair.n + 1)
    idx = (2 * np.arange(K)[:, None] + beta[None, :]) % L
    contrib = np.einsum("kj,bmj->kbm", s.low.values, pair.p.coeffs)
    contrib += np.einsum("kj,bmj->kbm", s.high.values, pair.q.coeffs)
    out = np.zeros((L, s.M), dtype=complex)
    np.add.at(out, idx, contrib)
    return Signal(out)


def _refine(cells: np.ndarray, coeffs: np.ndarray, n: int) -> np.ndarray:
    """One cascade step: halve the grid step on [0, n+1).

    cells has (n+1)*2^m rows; the result has twice as many, with
    new[j] = sqrt2 * sum_a cells[j - a*2^m] coeff_a (rows off-grid read 0).
    """
    C = cells.shape[0]
    scale = C // (n + 1)  # 2^m
    new = np.zeros((2 * C, cells.shape[1]), dtype=complex)
    for a in range(coeffs.shape[0]):
        shift = a * scale
        new[shift:shift + C] += RT2 * cells @ coeffs[a]
    return new


def cascade(pair: MaskPair, v: SumRuleVectors, levels: int,
            tol: float = 1e-8) -> CascadeResult:
    """Iterate phi_{m+1}(x) = sqrt2 sum_a phi_m(2x - a) p_a from the
    indicator of [0, 1) in the v1 direction; psi by one q-step from the
    final iterate.  The sum-rule precondition keeps the iteration bounded.
    """
    if levels < 1:
        raise ValueError("levels must be positive")
    if sum_rule_residual(pair.p, v, 1) >= tol:
        raise ValueError(
            "sum rule precondition violated: cascade iteration would diverge")
    n = pair.n
    cells = np.zeros((n + 1, pair.M), dtype=complex)
    cells[0] = v.vectors[0]
    diffs = []
    for _ in range(levels):
        new = _refine(cells, pair.p.coeffs, n)
        diffs.append(float(np.max(np.abs(new - np.repeat(cells, 2, axis=0)))))
        cells = new
    psi = _refine(cells, pair.q.coeffs, n)[::2]
    step = 2.0 ** -levels
    x = np.arange(cells.shape[0]) * step
    return CascadeResult(level=levels, step=step, x=x, phi=cells, psi=psi,
                         diffs=tuple(diffs))


def l2_norm_residual(result: CascadeResult) -> float:
    """|Riemann sum of sum-of-components |phi|^2 minus 1|."""
    total = np.sum(np.abs(result.phi) ** 2) * result.step
    return float(abs(total - 1.0))
