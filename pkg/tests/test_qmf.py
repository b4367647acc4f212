"""Gram coefficients, QMF/UEP residuals, the ell map, displacement identity."""
import numpy as np
import pytest

from mwforge import (
    BlaschkeFactor,
    MaskPair,
    MatrixMask,
    PolyphaseMatrix,
    Projection,
    blaschke_product,
    build_ell,
    build_family,
    disk_samples,
    displacement_residual,
    ell_eval,
    gram_coefficients,
    polyphase_assemble,
    qmf_residual,
    uep_residual,
)

RT2 = np.sqrt(2.0)


def haar_polyphase():
    p = MatrixMask(np.array([RT2 / 2, RT2 / 2]))
    q = MatrixMask(np.array([RT2 / 2, -RT2 / 2]))
    return polyphase_assemble(MaskPair(p, q))


def shifted_haar_polyphase():
    p = MatrixMask(np.array([0.0, RT2 / 2, RT2 / 2, 0.0]))
    q = MatrixMask(np.array([0.0, -RT2 / 2, RT2 / 2, 0.0]))
    return polyphase_assemble(MaskPair(p, q))


def random_projection(rng, dim):
    """Hermitian idempotent via eigenprojection of a random Hermitian matrix."""
    H = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = H + H.conj().T
    _, vec = np.linalg.eigh(H)
    k = int(rng.integers(1, dim))
    V = vec[:, :k]
    return Projection(V @ V.conj().T)


def random_unitary(rng, dim):
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def test_gram_haar_constant():
    G = gram_coefficients(haar_polyphase())
    assert G.N == 0
    np.testing.assert_allclose(G.k(0), np.eye(2), atol=1e-15)


def test_gram_shifted_haar():
    G = gram_coefficients(shifted_haar_polyphase())
    np.testing.assert_allclose(G.k(0), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(G.k(1), 0, atol=1e-15)
    np.testing.assert_allclose(G.k(-1), 0, atol=1e-15)


def test_gram_identity_pair():
    F = PolyphaseMatrix(np.array([np.eye(2), np.eye(2)]))
    G = gram_coefficients(F)
    np.testing.assert_allclose(G.k(0), 2 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(G.k(1), np.eye(2), atol=1e-15)


def test_gram_hermitian_symmetry_bit_level():
    rng = np.random.default_rng(0)
    F = PolyphaseMatrix(rng.standard_normal((4, 4, 4)) + 1j * rng.standard_normal((4, 4, 4)))
    G = gram_coefficients(F)
    for k in range(G.N + 1):
        assert np.array_equal(G.k(-k), G.k(k).conj().T)


def test_qmf_residual_haar():
    assert qmf_residual(haar_polyphase()) < 1e-15


def test_qmf_residual_identity_pair_exact_value():
    F = PolyphaseMatrix(np.array([np.eye(2), np.eye(2)]))
    # max(||2I - I||, ||I||) = sqrt(2M) with M = 1
    assert qmf_residual(F) == pytest.approx(np.sqrt(2.0), abs=1e-15)


def test_qmf_residual_d4():
    assert qmf_residual(polyphase_assemble(build_family("d4"))) < 1e-12


def test_uep_mirrors_qmf_examples():
    assert uep_residual(haar_polyphase()) < 1e-15
    assert uep_residual(shifted_haar_polyphase()) < 1e-15
    F = PolyphaseMatrix(np.array([np.eye(2), np.eye(2)]))
    assert uep_residual(F) == pytest.approx(np.sqrt(2.0), abs=1e-15)


def test_qmf_iff_uep_on_random_inputs():
    # paraunitary products: both residuals vanish; generic inputs: both positive
    rng = np.random.default_rng(42)
    for _ in range(100):
        dim = int(rng.choice([2, 4]))
        factors = [BlaschkeFactor(random_projection(rng, dim), random_unitary(rng, dim))]
        F = blaschke_product(factors, random_unitary(rng, dim))
        assert qmf_residual(F) < 1e-12
        assert uep_residual(F) < 1e-12
    for _ in range(100):
        dim = int(rng.choice([2, 4]))
        F = PolyphaseMatrix(rng.standard_normal((3, dim, dim)))
        q, u = qmf_residual(F), uep_residual(F)
        assert q > 1e-6 and u > 1e-6


def test_build_ell_constant_rejected():
    with pytest.raises(ValueError, match="ell undefined for constant F"):
        build_ell(haar_polyphase())


def test_build_ell_degree1_is_f1():
    F = shifted_haar_polyphase()
    ell = build_ell(F)
    # ell_1(xi) = F_1 independent of xi
    for xi in (0.0, 0.5, -0.3 + 0.4j):
        np.testing.assert_allclose(ell_eval(ell, xi), F.coeffs[1], atol=1e-15)
    np.testing.assert_allclose(F.coeffs[1], np.array([[RT2 / 2, RT2 / 2], [0, 0]]), atol=1e-15)


def test_build_ell_degree2_hankel_layout():
    rng = np.random.default_rng(5)
    F = PolyphaseMatrix(rng.standard_normal((3, 2, 2)))
    H = build_ell(F).matrix
    assert np.array_equal(H[:2, :2], F.coeffs[1])
    assert np.array_equal(H[:2, 2:], F.coeffs[2])
    assert np.array_equal(H[2:, :2], F.coeffs[2])
    assert not H[2:, 2:].any()


def test_build_ell_zero_input():
    F = PolyphaseMatrix(np.zeros((3, 2, 2)))
    assert not build_ell(F).matrix.any()


def test_disk_samples_deterministic_and_bounded():
    a = disk_samples(64, seed=3)
    b = disk_samples(64, seed=3)
    assert np.array_equal(a, b)
    assert np.abs(a).max() <= 0.9


def test_displacement_shifted_haar():
    assert displacement_residual(shifted_haar_polyphase(), samples=32, seed=0) < 1e-13


def test_displacement_d6():
    F = polyphase_assemble(build_family("d6"))
    assert displacement_residual(F, samples=32, seed=0) < 1e-12


def test_displacement_constant_degenerates():
    assert displacement_residual(haar_polyphase()) < 1e-15


def test_displacement_non_qmf_large():
    F = PolyphaseMatrix(np.array([np.eye(2), np.eye(2)]))
    assert displacement_residual(F, samples=8, seed=0) > 0.1


@pytest.mark.parametrize("name", ["haar", "d4", "d6", "chui-lian", "lebrun-vetterli"])
def test_qmf_implies_displacement(name):
    F = polyphase_assemble(build_family(name))
    eps = qmf_residual(F)
    assert eps < 1e-12
    assert displacement_residual(F, samples=32, seed=1) < 100 * max(eps, 1e-12)
