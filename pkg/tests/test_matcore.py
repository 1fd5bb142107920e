import math

import numpy as np
import pytest

from effectalg import matcore
from effectalg.matcore import (
    DEFAULT_TOL,
    Tolerances,
    adjoint,
    apply_borel_function,
    commutator_norm,
    frobenius_distance,
    hermitian_eigendecomposition,
    is_effect,
    is_hermitian,
    is_normal,
)

from conftest import proj_p, proj_q


def eig2x2_hermitian(m: np.ndarray) -> tuple[list[float], list[np.ndarray]]:
    """Independent 2x2 Hermitian eigenproblem oracle: quadratic formula plus
    Cayley-Hamilton projectors."""
    a, c = m[0, 0].real, m[1, 1].real
    b = m[0, 1]
    half_tr = 0.5 * (a + c)
    disc = math.sqrt(max(half_tr * half_tr - (a * c - abs(b) ** 2), 0.0))
    lo, hi = half_tr - disc, half_tr + disc
    eye = np.eye(2, dtype=complex)
    if disc < 1e-14:
        return [lo], [eye]
    e_hi = (m - lo * eye) / (hi - lo)
    e_lo = (hi * eye - m) / (hi - lo)
    return [lo, hi], [e_lo, e_hi]


# ---------------------------------------------------------------------------
# adjoint / distance
# ---------------------------------------------------------------------------

def test_adjoint_identity():
    eye = np.eye(3, dtype=complex)
    np.testing.assert_array_equal(adjoint(eye), eye)


def test_adjoint_single_entry():
    m = np.array([[0, 1j], [0, 0]], dtype=complex)
    np.testing.assert_array_equal(adjoint(m), np.array([[0, 0], [-1j, 0]]))


def test_adjoint_hermitian_fixed_point():
    m = np.array([[1.0, 2 + 1j], [2 - 1j, -3.0]], dtype=complex)
    np.testing.assert_array_equal(adjoint(m), m)


def test_frobenius_distance_examples():
    m = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    assert frobenius_distance(m, m) == 0.0
    assert frobenius_distance(np.eye(2, dtype=complex), np.zeros((2, 2))) == pytest.approx(math.sqrt(2))
    assert frobenius_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(math.sqrt(2))


def test_frobenius_distance_dim_mismatch():
    with pytest.raises(ValueError):
        frobenius_distance(np.eye(2), np.eye(3))


# ---------------------------------------------------------------------------
# eigendecomposition
# ---------------------------------------------------------------------------

def test_eigendecomposition_scalar_matrix_single_cluster():
    sd = hermitian_eigendecomposition(np.diag([0.5, 0.5]).astype(complex))
    np.testing.assert_allclose(sd.eigenvalues, [0.5])
    np.testing.assert_allclose(sd.projectors[0], np.eye(2), atol=1e-14)


def test_eigendecomposition_diagonal():
    sd = hermitian_eigendecomposition(np.diag([0.0, 1.0]).astype(complex))
    np.testing.assert_allclose(sd.eigenvalues, [0.0, 1.0])
    np.testing.assert_allclose(sd.projectors[0], np.diag([1.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(sd.projectors[1], np.diag([0.0, 1.0]), atol=1e-14)


def test_eigendecomposition_matches_2x2_oracle():
    q = proj_q()
    vals, projs = eig2x2_hermitian(q)
    np.testing.assert_allclose(vals, [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(projs[0], 0.5 * np.array([[1, -1], [-1, 1]]), atol=1e-15)
    np.testing.assert_allclose(projs[1], 0.5 * np.array([[1, 1], [1, 1]]), atol=1e-15)

    sd = hermitian_eigendecomposition(q)
    np.testing.assert_allclose(sd.eigenvalues, vals, atol=1e-12)
    np.testing.assert_allclose(sd.projectors[0], projs[0], atol=1e-12)
    np.testing.assert_allclose(sd.projectors[1], projs[1], atol=1e-12)


def test_eigendecomposition_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigendecomposition(np.array([[0.0, 1.0], [0.0, 0.0]]))


def _random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


@pytest.mark.parametrize("dim", [2, 3, 4, 6])
def test_reconstruction_and_projector_algebra(dim):
    rng = np.random.default_rng(dim)
    for _ in range(50):
        h = _random_hermitian(rng, dim)
        sd = hermitian_eigendecomposition(h)
        atol = matcore.matrix_tolerance(DEFAULT_TOL, h)
        assert frobenius_distance(sd.matrix(), h) <= atol
        total = np.zeros((dim, dim), dtype=complex)
        for i, e in enumerate(sd.projectors):
            assert frobenius_distance(e @ e, e) <= atol
            assert frobenius_distance(e, e.conj().T) <= atol
            for j in range(i + 1, len(sd.projectors)):
                assert np.linalg.norm(e @ sd.projectors[j]) <= atol
            total += e
        assert frobenius_distance(total, np.eye(dim)) <= atol


def test_functional_calculus_homomorphism():
    rng = np.random.default_rng(7)
    for _ in range(25):
        h = _random_hermitian(rng, 4)
        sd = hermitian_eigendecomposition(h)
        cf = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        cg = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        f = lambda t: complex(np.polyval(cf, t))
        g = lambda t: complex(np.polyval(cg, t))
        fg = apply_borel_function(sd, lambda t: f(t) * g(t))
        prod = apply_borel_function(sd, f) @ apply_borel_function(sd, g)
        assert frobenius_distance(fg, prod) <= matcore.matrix_tolerance(DEFAULT_TOL, fg, prod)


def test_clustering_stability_under_small_perturbation():
    rng = np.random.default_rng(13)
    base = np.diag([0.25, 0.25, 0.25, 0.9]).astype(complex)
    u = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0]
    degenerate = u @ base @ u.conj().T
    reference = hermitian_eigendecomposition(degenerate)
    assert len(reference.eigenvalues) == 2
    for trial in range(20):
        noise = _random_hermitian(rng, 4)
        noise *= (DEFAULT_TOL.eig_cluster / 10.0) / np.linalg.norm(noise) / 2.0
        perturbed = hermitian_eigendecomposition(degenerate + noise)
        assert len(perturbed.eigenvalues) == len(reference.eigenvalues)


# ---------------------------------------------------------------------------
# borel functions
# ---------------------------------------------------------------------------

def test_apply_borel_identity_reconstructs():
    rng = np.random.default_rng(3)
    h = _random_hermitian(rng, 3)
    sd = hermitian_eigendecomposition(h)
    np.testing.assert_allclose(apply_borel_function(sd, lambda t: t), h, atol=1e-12)


def test_apply_borel_constant_is_identity():
    sd = hermitian_eigendecomposition(np.diag([0.1, 0.4, 0.8]).astype(complex))
    np.testing.assert_allclose(apply_borel_function(sd, lambda t: 1.0), np.eye(3), atol=1e-13)


def test_apply_borel_sqrt_on_diagonal():
    sd = hermitian_eigendecomposition(np.diag([0.0, 0.25, 1.0]).astype(complex))
    np.testing.assert_allclose(
        apply_borel_function(sd, lambda t: math.sqrt(t)),
        np.diag([0.0, 0.5, 1.0]), atol=1e-13,
    )


def test_apply_borel_rejects_undefined_values():
    sd = hermitian_eigendecomposition(np.diag([0.0, 1.0]).astype(complex))
    with pytest.raises(ValueError):
        apply_borel_function(sd, lambda t: float("nan"))


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def test_hermitian_normal_on_real_diagonal():
    m = np.diag([1.0, -2.0, 0.5]).astype(complex)
    assert is_hermitian(m) and is_normal(m)


def test_nilpotent_block_neither_hermitian_nor_normal():
    m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    assert not is_hermitian(m) and not is_normal(m)


def test_unitary_diag_normal_not_hermitian():
    m = np.diag([np.exp(1j * 0.7), 1.0])
    assert not is_hermitian(m)
    assert is_normal(m)


def test_is_effect_examples():
    assert is_effect(np.diag([0.3, 0.7]).astype(complex))
    assert not is_effect(np.diag([1.5, 0.0]).astype(complex))
    assert is_effect(proj_q())  # eigenvalues {0, 1} by the 2x2 oracle


def test_commutator_norm_examples():
    assert commutator_norm(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])) == 0.0
    # oracle: PQ - QP = [[0, 1/2], [-1/2, 0]], Frobenius norm sqrt(1/2)
    assert commutator_norm(proj_p(), proj_q()) == pytest.approx(math.sqrt(0.5))
    a = np.array([[1.0, 2.0], [2.0, 5.0]], dtype=complex)
    assert commutator_norm(a, np.eye(2, dtype=complex)) <= 1e-15
    with pytest.raises(ValueError):
        commutator_norm(np.eye(2), np.eye(3))


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def test_tolerances_must_be_positive():
    with pytest.raises(ValueError):
        Tolerances(eig_cluster=0.0)
    with pytest.raises(ValueError):
        Tolerances(mat_eq=-1e-9)


def test_dimension_cap_enforced():
    with pytest.raises(ValueError):
        matcore.as_operator(np.eye(matcore.DIM_CAP + 1))
    with pytest.raises(ValueError):
        matcore.as_operator(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        matcore.as_operator(np.array([[np.nan, 0], [0, 1]]))
