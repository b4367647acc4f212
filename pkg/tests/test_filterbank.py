"""Periodic analysis/synthesis transforms and the cascade renderer."""
import numpy as np
import pytest

from mwforge import (
    MaskPair,
    MatrixMask,
    Signal,
    SubbandPair,
    SumRuleVectors,
    analyze,
    build_family,
    cascade,
    designated_vectors,
    l2_norm_residual,
    synthesize,
)
from mwforge.synthesis import FAMILY_NAMES

RT2 = np.sqrt(2.0)

HAAR = MaskPair(MatrixMask(np.array([RT2 / 2, RT2 / 2])),
                MatrixMask(np.array([RT2 / 2, -RT2 / 2])))
ONE = SumRuleVectors(np.array([1.0]))


def all_families():
    for name in FAMILY_NAMES:
        if name == "scalar":
            yield name, build_family(name, b=0.35)
        else:
            yield name, build_family(name)


def analyze_oracle(values, pair):
    """Reference analysis by explicit loops (no einsum, no vectorization)."""
    L = values.shape[0]
    K = L // 2
    low = np.zeros((K, pair.M), dtype=complex)
    high = np.zeros((K, pair.M), dtype=complex)
    for k in range(K):
        for beta in range(pair.n + 1):
            idx = (2 * k + beta) % L
            low[k] += values[idx] @ np.conj(pair.p.coeffs[beta])
            high[k] += values[idx] @ np.conj(pair.q.coeffs[beta])
    return low, high


def test_signal_validation():
    s = Signal(np.array([1.0, 2.0, 3.0]))
    assert s.M == 1 and s.L == 3  # odd lengths are legal containers
    with pytest.raises(ValueError):
        Signal(np.zeros((0, 2)))


def test_subband_pair_validation():
    with pytest.raises(ValueError):
        SubbandPair(Signal(np.zeros((4, 1))), Signal(np.zeros((4, 2))))


def test_analyze_haar_constant():
    sub = analyze(Signal(np.ones(4)), HAAR)
    np.testing.assert_allclose(sub.low.values.ravel(), [RT2, RT2], atol=1e-15)
    np.testing.assert_allclose(sub.high.values.ravel(), 0, atol=1e-15)


def test_analyze_zero_signal():
    sub = analyze(Signal(np.zeros(8)), HAAR)
    assert not sub.low.values.any() and not sub.high.values.any()


def test_analyze_alternating_matches_oracle():
    c = np.array([1.0, -1.0, 1.0, -1.0])
    sub = analyze(Signal(c), HAAR)
    low, high = analyze_oracle(c.reshape(-1, 1), HAAR)
    np.testing.assert_allclose(sub.low.values, low, atol=1e-15)
    np.testing.assert_allclose(sub.high.values, high, atol=1e-15)
    np.testing.assert_allclose(sub.low.values.ravel(), 0, atol=1e-15)
    np.testing.assert_allclose(sub.high.values.ravel(), [RT2, RT2], atol=1e-15)


def test_analyze_matches_oracle_multiwavelet():
    rng = np.random.default_rng(12)
    pair = build_family("chui-lian")
    c = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
    sub = analyze(Signal(c), pair)
    low, high = analyze_oracle(c, pair)
    assert np.abs(sub.low.values - low).max() < 1e-13
    assert np.abs(sub.high.values - high).max() < 1e-13


def test_analyze_errors():
    with pytest.raises(ValueError, match="dimensions differ"):
        analyze(Signal(np.zeros((8, 2))), HAAR)
    with pytest.raises(ValueError, match="even signal length"):
        analyze(Signal(np.zeros(5)), HAAR)
    with pytest.raises(ValueError, match="shorter than the mask support"):
        analyze(Signal(np.zeros(2)), build_family("d6"))


def test_synthesize_delta_subband_emits_mask_rows():
    pair = build_family("d4")
    low = np.zeros((4, 1))
    low[0, 0] = 1.0
    sig = synthesize(SubbandPair(Signal(low), Signal(np.zeros((4, 1)))), pair)
    expected = np.zeros(8, dtype=complex)
    expected[: pair.n + 1] = pair.p.coeffs[:, 0, 0]
    np.testing.assert_allclose(sig.values.ravel(), expected, atol=1e-15)


def test_round_trip_examples():
    for c in (np.ones(4), np.zeros(8), np.array([1.0, -1.0, 1.0, -1.0])):
        sig = Signal(c)
        back = synthesize(analyze(sig, HAAR), HAAR)
        assert np.abs(back.values - sig.values).max() < 1e-12


def test_round_trip_all_families():
    rng = np.random.default_rng(13)
    for name, pair in all_families():
        c = rng.standard_normal((64, pair.M)) + 1j * rng.standard_normal((64, pair.M))
        sig = Signal(c)
        back = synthesize(analyze(sig, pair), pair)
        assert np.abs(back.values - c).max() < 1e-10, name


def test_energy_preservation():
    rng = np.random.default_rng(14)
    for name, pair in all_families():
        c = rng.standard_normal((32, pair.M))
        sub = analyze(Signal(c), pair)
        e_in = np.sum(np.abs(c) ** 2)
        e_out = np.sum(np.abs(sub.low.values) ** 2) + np.sum(np.abs(sub.high.values) ** 2)
        assert abs(e_in - e_out) < 1e-10, name


def test_cascade_haar_fixed_point():
    res = cascade(HAAR, ONE, 5)
    assert res.level == 5 and res.step == 2.0 ** -5
    half = res.phi.shape[0] // 2
    np.testing.assert_allclose(res.phi[:half].real.ravel(), 1.0, atol=1e-12)
    np.testing.assert_allclose(res.phi[half:].real.ravel(), 0.0, atol=1e-12)
    # psi is +1 on [0, 1/2), -1 on [1/2, 1)
    quarter = half // 2
    np.testing.assert_allclose(res.psi[:quarter].real.ravel(), 1.0, atol=1e-12)
    np.testing.assert_allclose(res.psi[quarter:half].real.ravel(), -1.0, atol=1e-12)
    assert max(res.diffs[1:]) < 1e-12


def test_cascade_grid_metadata():
    res = cascade(build_family("d4"), ONE, 3)
    # grid covers [0, n+1) with (n+1) 2^m cells
    assert res.x.shape[0] == 4 * 2 ** 3
    assert res.x[0] == 0.0
    assert res.x[-1] == pytest.approx(4.0 - res.step)


def test_cascade_d4_contraction():
    res = cascade(build_family("d4"), ONE, 12)
    diffs = np.array(res.diffs)
    # frozen regression value for the 12th sup-difference
    assert diffs[-1] == pytest.approx(3.512792837603951e-2, rel=1e-9)
    assert np.all(np.diff(diffs[3:]) <= 1e-12)
    assert l2_norm_residual(res) < 1e-2


def test_cascade_chui_lian_symmetry():
    pair = build_family("chui-lian")
    res = cascade(pair, designated_vectors("chui-lian"), 10)
    # restrict to the cells actually inside the support [0, 2]: odd count,
    # so reversal reflects about the midpoint x = 1
    count = 2 ** 11 - 1
    phi = res.phi[:count]
    assert np.abs(res.phi[count:]).max() == 0.0
    assert np.abs(phi[:, 0] - phi[::-1, 0]).max() < 1e-6   # symmetric component
    assert np.abs(phi[:, 1] + phi[::-1, 1]).max() < 1e-6   # antisymmetric component
    psi = res.psi[: 2 ** 11]
    assert np.abs(psi[:, 0] - psi[::-1, 0]).max() < 1e-6
    assert np.abs(psi[:, 1] + psi[::-1, 1]).max() < 1e-6


def test_cascade_contraction_named_families():
    # the free-parameter scalar family is excluded: an order-1 sum rule alone
    # does not make the refinement iteration contractive (b = 0.35 diverges)
    names = ("haar", "d4", "d6", "d6-potapov", "chui-lian",
             "lebrun-vetterli", "fullrank-a3", "fullrank-a4")
    for name in names:
        res = cascade(build_family(name), designated_vectors(name), 8)
        diffs = np.array(res.diffs)
        assert np.all(np.diff(diffs[3:]) <= 1e-12), name


def test_cascade_rejects_bad_inputs():
    with pytest.raises(ValueError, match="levels must be positive"):
        cascade(HAAR, ONE, 0)
    doubled = MaskPair(MatrixMask(2.0 * HAAR.p.coeffs), MatrixMask(2.0 * HAAR.q.coeffs))
    with pytest.raises(ValueError, match="sum rule precondition violated"):
        cascade(doubled, ONE, 4)


def test_l2_norm_residual():
    assert l2_norm_residual(cascade(HAAR, ONE, 6)) < 1e-12
    # un-normalized mask: mass doubles every level once the gate is bypassed
    doubled = MaskPair(MatrixMask(2.0 * HAAR.p.coeffs), MatrixMask(2.0 * HAAR.q.coeffs))
    res = cascade(doubled, ONE, 5, tol=10.0)
    assert l2_norm_residual(res) > 0.5
