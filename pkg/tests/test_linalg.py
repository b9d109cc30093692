import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certichan.errors import DimensionLimitError, PreconditionError, ShapeMismatchError
from certichan.linalg import (Subspace, Tolerance, column_space, kron, nu_distance,
                              orthogonal_complement, projector_onto, span_of, subspace_contains)
from certichan.sampling import haar_unitary

from oracles import sampled_min_abs_expectation, vec_rank

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_kron_identity():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))


def test_kron_diagonal():
    np.testing.assert_array_equal(kron(np.diag([1, 2]), np.diag([3])), np.diag([3, 6]))


def test_kron_xx_flips_both_qubits():
    ket00 = np.array([1, 0, 0, 0])
    np.testing.assert_array_equal(kron(X, X) @ ket00, [0, 0, 0, 1])


def test_kron_left_factor_is_slow_index():
    a = np.array([[1, 2], [3, 4]])
    b = np.array([[0, 1], [1, 0]])
    k = kron(a, b)
    assert k[0, 1] == 1 and k[2, 1] == 3 and k[0, 3] == 2


def test_kron_dimension_limit():
    with pytest.raises(DimensionLimitError):
        kron(np.eye(4), np.eye(4), max_dim=8)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rel_rank_cut=0)
    with pytest.raises(ValueError):
        Tolerance(abs_floor=1.5)


def test_span_duplicates_collapse():
    assert span_of([I2, I2]).dim == 1


def test_span_independent_pair():
    assert span_of([I2, X]).dim == 2


def test_span_dependent_triple_matches_elimination():
    ops = [I2, X, I2 + X]
    assert vec_rank(ops) == 2
    assert span_of(ops).dim == 2


def test_span_rejects_mixed_shapes():
    with pytest.raises(ShapeMismatchError):
        span_of([I2, np.eye(3)])


def test_span_is_deterministic_with_phase_convention():
    s1 = span_of([1j * X, I2 + X])
    s2 = span_of([1j * X, I2 + X])
    np.testing.assert_array_equal(s1.basis, s2.basis)
    for v in s1.basis:
        lead = v[np.argmax(np.abs(v))]
        assert abs(lead.imag) < 1e-15 and lead.real > 0


def test_contains_examples():
    assert subspace_contains(span_of([I2, X]), span_of([X]))
    assert not subspace_contains(span_of([X]), span_of([I2, X]))
    assert subspace_contains(span_of([I2, X]), span_of([I2 + X]))


def test_contains_dimension_mismatch():
    with pytest.raises(ShapeMismatchError):
        subspace_contains(span_of([I2]), span_of([np.eye(3)]))


def test_projector_examples():
    e1 = Subspace(2, np.array([[1, 0]]))
    np.testing.assert_allclose(projector_onto(e1), np.diag([1, 0]))
    full = Subspace(3, np.eye(3))
    np.testing.assert_allclose(projector_onto(full), np.eye(3))
    plus = Subspace(2, np.array([[1, 1]]) / math.sqrt(2))
    np.testing.assert_allclose(projector_onto(plus), 0.5 * np.ones((2, 2)), atol=1e-15)


def test_orthogonal_complement_is_orthogonal(rng):
    a = rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5))
    s = column_space(a.T)
    comp = orthogonal_complement(s)
    assert comp.dim == 3
    np.testing.assert_allclose(comp.basis.conj() @ s.basis.T, 0, atol=1e-12)
    np.testing.assert_allclose(projector_onto(s) + projector_onto(comp), np.eye(5), atol=1e-12)


def test_subspace_rejects_non_orthonormal_basis():
    with pytest.raises(PreconditionError):
        Subspace(2, np.array([[1, 0], [1, 1]]))


def test_nu_distance_examples():
    assert nu_distance(I2) == pytest.approx(1.0, abs=1e-12)
    assert nu_distance(np.diag([1, -1])) == 0.0
    # frozen from sampled_min_abs_expectation(diag(1, i)) = 0.70711 (1e5 states)
    assert nu_distance(np.diag([1, 1j])) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)


def test_nu_distance_agrees_with_state_sampling():
    u = np.diag([1, 1j])
    assert sampled_min_abs_expectation(u) == pytest.approx(nu_distance(u), abs=1e-4)


def test_nu_distance_rejects_non_unitary():
    with pytest.raises(PreconditionError):
        nu_distance(np.diag([1, 0.5]))


def test_nu_distance_three_eigenvalues_in_arc():
    # eigenphases 0, pi/3, 2pi/3: hull edge is the chord between the extremes
    u = np.diag(np.exp(1j * np.array([0, np.pi / 3, 2 * np.pi / 3])))
    assert nu_distance(u) == pytest.approx(math.cos(np.pi / 3), abs=1e-12)


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, count=st.integers(1, 5))
def test_combination_lies_in_span(seed, count):
    rng = np.random.default_rng(seed)
    ops = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(count)]
    coeffs = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    combo = sum(c * op for c, op in zip(coeffs, ops))
    assert subspace_contains(span_of(ops), span_of([combo]))


@settings(max_examples=60, deadline=None)
@given(seed=seeds, count=st.integers(1, 8), rows=st.integers(1, 3), cols=st.integers(1, 3))
def test_span_dimension_bounds_and_idempotent_projector(seed, count, rows, cols):
    rng = np.random.default_rng(seed)
    ops = [rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
           for _ in range(count)]
    s = span_of(ops)
    assert s.dim <= min(count, rows * cols)
    p = projector_onto(s)
    assert np.max(np.abs(p @ p - p)) <= 100 * s.tol
    assert abs(np.trace(p).real - s.dim) <= 10 * s.tol
    np.testing.assert_allclose(p, p.conj().T, atol=1e-14)
    for v in s.basis:
        np.testing.assert_allclose(p @ v, v, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, d=st.integers(2, 4))
def test_nu_distance_invariant_under_unitary_similarity(seed, d):
    rng = np.random.default_rng(seed)
    u = haar_unitary(d, rng)
    v = haar_unitary(d, rng)
    assert nu_distance(u) == pytest.approx(nu_distance(v @ u @ v.conj().T), abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(t1=st.floats(-np.pi, np.pi), gap=st.floats(0, np.pi))
def test_nu_distance_qubit_chord_formula(t1, gap):
    u = np.diag(np.exp(1j * np.array([t1, t1 + gap])))
    assert nu_distance(u) == pytest.approx(math.cos(gap / 2), abs=1e-9)


@pytest.mark.parametrize("gap", [0.3, 1.2, 2.5])
def test_nu_distance_chord_matches_sampling(gap):
    u = np.diag([1, np.exp(1j * gap)])
    assert sampled_min_abs_expectation(u, samples=50_000) == pytest.approx(math.cos(gap / 2), abs=2e-3)
