import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effectalg import (
    PhaseFamily,
    ZeroProbabilityError,
    conditional_probability,
    exact_joint_grid,
    heisenberg_image,
    luders_channel_state,
    phase_apply,
    post_state,
    probability,
    sample_sequential,
    sequential_product,
    two_step_conditional,
    validate_density,
    validate_effect,
    validate_povm,
    verify_axioms,
    verify_functional_calculus,
)
from effectalg import matcore, quantum

from conftest import FAMS, proj_p, proj_q


# ---------------------------------------------------------------------------
# the scalar profile
# ---------------------------------------------------------------------------

def test_prefactor_must_be_unimodular():
    with pytest.raises(ValueError):
        PhaseFamily(0.0, 2.0)
    PhaseFamily.from_phase(1.0, 2.5)  # structurally unimodular


def test_scalar_profile_against_cmath_oracle():
    fam = PhaseFamily.from_phase(c=1.0, xi0_arg=0.0)
    oracle = cmath.exp((0.5 + 1.0j) * cmath.log(0.25))
    assert oracle == pytest.approx(0.09172848737165086 - 0.4915138702056219j)
    assert fam.scalar(0.25) == pytest.approx(oracle, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    s=st.floats(min_value=0.0, max_value=1.0),
    t=st.floats(min_value=0.0, max_value=1.0),
    c=st.floats(min_value=-3.0, max_value=3.0),
    arg=st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_scalar_profile_modulus_and_multiplicativity(s, t, c, arg):
    fam = PhaseFamily.from_phase(c, arg)
    assert abs(abs(fam.scalar(t)) - math.sqrt(t)) <= 1e-12
    assert abs(fam.scalar(s) * fam.scalar(t) - fam.xi0 * fam.scalar(s * t)) <= 1e-12


def test_scalar_vanishes_at_zero(fam):
    assert fam.scalar(0.0) == 0.0
    np.testing.assert_array_equal(fam.values(np.array([0.0, 0.0])), [0.0, 0.0])


# ---------------------------------------------------------------------------
# phase_apply
# ---------------------------------------------------------------------------

def test_phase_apply_plain_square_root():
    fam = PhaseFamily()
    a = validate_effect(np.diag([0.0, 0.25, 1.0]).astype(complex))
    np.testing.assert_allclose(phase_apply(fam, a), np.diag([0.0, 0.5, 1.0]), atol=1e-13)


def test_phase_apply_scalar_effect():
    fam = PhaseFamily.from_phase(c=1.0)
    a = validate_effect(np.array([[0.25]], dtype=complex))
    np.testing.assert_allclose(
        phase_apply(fam, a), [[0.09172848737165086 - 0.4915138702056219j]], atol=1e-14)


def test_phase_apply_projection_scales_by_prefactor(fam):
    e = validate_effect(np.diag([1.0, 1.0, 0.0]).astype(complex))
    np.testing.assert_allclose(phase_apply(fam, e), fam.xi0 * e.matrix, atol=1e-13)


def test_phase_apply_polar_factorization(fam):
    for i in range(25):
        a = quantum.random_effect(3, (50, i))
        f = phase_apply(fam, a)
        np.testing.assert_allclose(f @ f.conj().T, a.matrix, atol=1e-12)
        np.testing.assert_allclose(f.conj().T @ f, a.matrix, atol=1e-12)


# ---------------------------------------------------------------------------
# sequential product
# ---------------------------------------------------------------------------

def test_identity_is_left_neutral(fam):
    eye = validate_effect(np.eye(3, dtype=complex))
    a = quantum.random_effect(3, 77)
    out = sequential_product(fam, eye, a)
    np.testing.assert_allclose(out.matrix, a.matrix, atol=1e-13)


def test_scalar_effect_scales(fam):
    half = validate_effect(0.5 * np.eye(2, dtype=complex))
    b = quantum.random_effect(2, 78)
    out = sequential_product(fam, half, b)
    np.testing.assert_allclose(out.matrix, 0.5 * b.matrix, atol=1e-13)


def test_projection_pair_reduces_to_instantaneous(fam):
    """For sharp P, Q the product is P Q P regardless of the profile."""
    p = validate_effect(proj_p())
    q = validate_effect(proj_q())
    out = sequential_product(fam, p, q)
    np.testing.assert_allclose(out.matrix, [[0.5, 0.0], [0.0, 0.0]], atol=1e-13)
    np.testing.assert_allclose(out.matrix, proj_p() @ proj_q() @ proj_p(), atol=1e-13)


def test_commuting_pair_multiplies(fam):
    """Commuting effects: the product collapses to the plain operator product."""
    u = quantum.random_unitary(3, 31)
    a = quantum.effect_in_basis(u, [0.1, 0.6, 0.9])
    b = quantum.effect_in_basis(u, [0.7, 0.2, 0.5])
    out = sequential_product(fam, a, b)
    np.testing.assert_allclose(out.matrix, a.matrix @ b.matrix, atol=1e-12)
    rev = sequential_product(fam, b, a)
    np.testing.assert_allclose(rev.matrix, out.matrix, atol=1e-12)


def test_sequential_product_dim_mismatch():
    with pytest.raises(ValueError):
        sequential_product(PhaseFamily(), quantum.random_effect(2, 1),
                           quantum.random_effect(3, 1))


# ---------------------------------------------------------------------------
# channel, probability, conditionals
# ---------------------------------------------------------------------------

def test_channel_identity_keeps_state(fam):
    w = quantum.random_density(3, 5)
    eye = validate_effect(np.eye(3, dtype=complex))
    np.testing.assert_allclose(luders_channel_state(fam, eye, w), w.matrix, atol=1e-13)


def test_channel_projector_on_mixed_state(fam):
    p = validate_effect(proj_p())
    w = validate_density(0.5 * np.eye(2, dtype=complex))
    np.testing.assert_allclose(luders_channel_state(fam, p, w),
                               np.diag([0.5, 0.0]), atol=1e-13)


def test_channel_trace_equals_probability(fam):
    for i in range(50):
        a = quantum.random_effect(4, (90, i))
        w = quantum.random_density(4, (91, i))
        routed = float(np.trace(luders_channel_state(fam, a, w)).real)
        assert abs(routed - probability(fam, w, a)) < 1e-12


def test_probability_examples(fam):
    w = validate_density(0.5 * np.eye(2, dtype=complex))
    a = validate_effect(np.diag([0.3, 0.7]).astype(complex))
    assert probability(fam, w, a) == pytest.approx(0.5)
    eye = validate_effect(np.eye(2, dtype=complex))
    assert probability(fam, quantum.random_density(2, 4), eye) == pytest.approx(1.0)
    plus = validate_density(proj_q())
    assert probability(fam, plus, validate_effect(proj_p())) == pytest.approx(0.5)


def test_post_state_examples(fam):
    w = quantum.random_density(3, 6)
    eye = validate_effect(np.eye(3, dtype=complex))
    np.testing.assert_allclose(post_state(fam, w, eye).matrix, w.matrix, atol=1e-12)

    p = validate_effect(proj_p())
    mixed = validate_density(0.5 * np.eye(2, dtype=complex))
    np.testing.assert_allclose(post_state(fam, mixed, p).matrix,
                               np.diag([1.0, 0.0]), atol=1e-13)

    bottom = validate_effect(np.diag([0.0, 1.0]).astype(complex))
    top_state = validate_density(np.diag([1.0, 0.0]).astype(complex))
    with pytest.raises(ZeroProbabilityError):
        post_state(fam, top_state, bottom)


def test_conditional_probability_examples(fam):
    w = validate_density(0.5 * np.eye(2, dtype=complex))
    a = quantum.random_effect(2, 8)
    eye = validate_effect(np.eye(2, dtype=complex))
    assert conditional_probability(fam, w, eye, a) == pytest.approx(1.0)

    p = validate_effect(proj_p())
    q = validate_effect(proj_q())
    # tr(PQP W)/tr(P W) = 0.25 / 0.5
    assert conditional_probability(fam, w, q, p) == pytest.approx(0.5)

    p_perp = validate_effect(np.diag([0.0, 1.0]).astype(complex))
    assert conditional_probability(fam, w, p_perp, p) == pytest.approx(0.0, abs=1e-13)


def test_conditional_matches_post_state_route(fam):
    for i in range(25):
        w = quantum.random_density(3, (60, i))
        a = quantum.random_effect(3, (61, i))
        b = quantum.random_effect(3, (62, i))
        direct = conditional_probability(fam, w, b, a)
        nested = probability(fam, post_state(fam, w, a), b)
        assert abs(direct - nested) < 1e-11


def test_two_step_conditional_certain_outcome(fam):
    w = quantum.random_density(3, 9)
    a = quantum.random_effect(3, 10)
    b = quantum.random_effect(3, 11)
    eye = validate_effect(np.eye(3, dtype=complex))
    assert two_step_conditional(fam, w, eye, a, b) == pytest.approx(1.0)


def test_two_step_conditional_diagonal_oracle(fam):
    """All-diagonal closed form: sum_i c a b w / sum_i a b w."""
    a = validate_effect(np.diag([1.0, 0.5]).astype(complex))
    b = validate_effect(np.diag([0.5, 0.5]).astype(complex))
    c = validate_effect(np.diag([1.0, 0.0]).astype(complex))
    w = validate_density(0.5 * np.eye(2, dtype=complex))
    av, bv, cv, wv = [np.diag(m.matrix).real for m in (a, b, c, w)]
    oracle = float(np.sum(cv * av * bv * wv) / np.sum(av * bv * wv))
    assert oracle == pytest.approx(2.0 / 3.0)
    assert two_step_conditional(fam, w, c, a, b) == pytest.approx(oracle, abs=1e-12)


def test_two_step_sharp_repeat_is_certain(fam):
    """Observing a sharp commuting outcome first makes its recurrence certain."""
    u = quantum.random_unitary(3, 12)
    bj = quantum.effect_in_basis(u, [1.0, 1.0, 0.0])
    ak = quantum.effect_in_basis(u, [0.3, 0.8, 0.6])
    w = quantum.random_density(3, 13)
    assert two_step_conditional(fam, w, bj, bj, ak) == pytest.approx(1.0, abs=1e-12)


def test_two_step_matches_nested_route(fam):
    for i in range(25):
        w = quantum.random_density(3, (70, i))
        a = quantum.random_effect(3, (71, i))
        b = quantum.random_effect(3, (72, i))
        c = quantum.random_effect(3, (73, i))
        direct = two_step_conditional(fam, w, c, a, b)
        nested = conditional_probability(fam, post_state(fam, w, a), c, b)
        assert abs(direct - nested) < 1e-11


def test_two_step_zero_probability(fam):
    w = validate_density(np.diag([1.0, 0.0]).astype(complex))
    a = validate_effect(np.diag([0.0, 1.0]).astype(complex))
    b = quantum.random_effect(2, 14)
    c = quantum.random_effect(2, 15)
    with pytest.raises(ZeroProbabilityError):
        two_step_conditional(fam, w, c, a, b)


# ---------------------------------------------------------------------------
# heisenberg image
# ---------------------------------------------------------------------------

def test_heisenberg_image_trivial_views(fam):
    b = quantum.random_effect(3, 16)
    trivial = validate_povm([np.eye(3, dtype=complex)])
    np.testing.assert_allclose(heisenberg_image(fam, trivial, b).matrix,
                               b.matrix, atol=1e-13)
    x = quantum.random_povm(3, 3, 17)
    eye = validate_effect(np.eye(3, dtype=complex))
    np.testing.assert_allclose(heisenberg_image(fam, x, eye).matrix,
                               np.eye(3), atol=1e-12)


def test_heisenberg_image_diagonal_closed_form(fam):
    x = validate_povm([np.diag([0.2, 0.7]), np.diag([0.8, 0.3])])
    b = validate_effect(np.diag([0.4, 0.9]).astype(complex))
    expected = sum(a.matrix @ b.matrix for a in x)
    np.testing.assert_allclose(heisenberg_image(fam, x, b).matrix, expected, atol=1e-13)
    np.testing.assert_allclose(expected, b.matrix, atol=1e-13)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_exact_grid_marginals_and_total(fam):
    w = quantum.random_density(3, 18)
    x = quantum.random_povm(3, 2, 19)
    y = quantum.random_povm(3, 3, 20)
    grid = exact_joint_grid(fam, w, x, y)
    assert grid.sum() == pytest.approx(1.0, abs=1e-12)
    for k, a in enumerate(x):
        assert grid[k].sum() == pytest.approx(probability(fam, w, a), abs=1e-12)


def test_exact_grid_diagonal_oracle(fam):
    """Diagonal everything: p(k, j) = sum_i a_k(i) b_j(i) w(i)."""
    x = validate_povm([np.diag([0.2, 0.7]), np.diag([0.8, 0.3])])
    y = validate_povm([np.diag([0.5, 0.1]), np.diag([0.5, 0.9])])
    w = validate_density(np.diag([0.25, 0.75]).astype(complex))
    av = np.stack([np.diag(a.matrix).real for a in x])
    bv = np.stack([np.diag(b.matrix).real for b in y])
    wv = np.diag(w.matrix).real
    oracle = np.einsum("ki,ji,i->kj", av, bv, wv)
    np.testing.assert_allclose(exact_joint_grid(fam, w, x, y), oracle, atol=1e-13)


def test_sampler_deterministic_and_counted(fam):
    w = quantum.random_density(2, 21)
    x = quantum.random_povm(2, 2, 22)
    y = quantum.random_povm(2, 2, 23)
    t1 = sample_sequential(fam, w, x, y, 5000, seed=99)
    t2 = sample_sequential(fam, w, x, y, 5000, seed=99)
    np.testing.assert_array_equal(t1.counts, t2.counts)
    assert t1.total == 5000 and t1.counts.sum() == 5000
    single = sample_sequential(fam, w, x, y, 1, seed=7)
    assert single.counts.sum() == 1


def test_sampler_frequencies_near_exact():
    fam = FAMS[1]
    w = quantum.random_density(3, 24)
    x = quantum.random_povm(3, 2, 25)
    y = quantum.random_povm(3, 2, 26)
    table = sample_sequential(fam, w, x, y, 100000, seed=4)
    guard = 5.0 * np.sqrt(table.exact * (1 - table.exact) / table.total) + 1e-3
    assert np.all(np.abs(table.frequencies() - table.exact) < guard)


# ---------------------------------------------------------------------------
# law suites
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("dim", [2, 3])
def test_axiom_suite_residuals_small(fam, dim):
    report = verify_axioms(fam, dim, trials=60, seed=1234)
    assert report.passed, report.residuals()
    assert set(report.residuals()) == {
        "additivity_in_second_argument",
        "identity_is_neutral",
        "vanishing_products_symmetric",
        "complement_stays_commuting",
        "product_associates_when_commuting",
        "commutant_closed_under_product",
        "commutant_closed_under_sum",
    }
    assert max(report.residuals().values()) < 1e-9


def test_axiom_suite_empty_when_no_trials():
    report = verify_axioms(PhaseFamily(), 3, trials=0, seed=0)
    assert report.properties == () and report.passed


@pytest.mark.parametrize("dim", [2, 4])
def test_calculus_suite_residuals_small(fam, dim):
    report = verify_functional_calculus(fam, dim, trials=60, seed=4321)
    assert report.passed, report.residuals()
    assert max(report.residuals().values()) < 1e-9


def test_suite_report_serializes():
    report = verify_axioms(PhaseFamily(), 2, trials=5, seed=3)
    doc = report.to_dict()
    assert doc["passed"] is True
    assert len(doc["properties"]) == 7
