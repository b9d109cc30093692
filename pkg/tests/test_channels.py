import numpy as np
import pytest

from certichan.channels import (DensityMatrix, PureState, QuantumChannel, apply,
                                depolarizing_channel, extend_by_identity, identity_channel,
                                joint_support, max_entangled, mixed_unitary_channel,
                                output_state, support, tensor_power, unitary_channel)
from certichan.errors import DimensionLimitError, PreconditionError, ShapeMismatchError
from certichan.linalg import column_space, projector_onto, subspace_contains
from certichan.povm import computational_basis_povm, povm_to_channel
from certichan.sampling import haar_state, random_channel

from builders import certifiable_pair, nested_pair, schmidt_state
from oracles import dense_output_state, vec_rank


def ket(*amps):
    return np.array(amps, dtype=complex)


def test_unitary_channel_identity(paulis):
    c = unitary_channel(paulis["I"])
    rho = np.array([[0.7, 0.2j], [-0.2j, 0.3]])
    np.testing.assert_allclose(apply(c, rho).matrix, rho)


def test_unitary_channel_x_flips(paulis):
    out = apply(unitary_channel(paulis["X"]), np.diag([1, 0]))
    np.testing.assert_allclose(out.matrix, np.diag([0, 1]))


def test_unitary_channel_support_is_a_line(paulis):
    assert support(unitary_channel(paulis["Y"])).dim == 1


def test_unitary_channel_rejects_non_unitary():
    with pytest.raises(PreconditionError):
        unitary_channel(np.diag([1, 0.5]))


def test_mixed_unitary_trivial_mixture(paulis):
    c = mixed_unitary_channel([1.0], [paulis["I"]])
    assert len(c) == 1
    np.testing.assert_allclose(c.kraus[0], np.eye(2))


def test_mixed_unitary_support_and_action(mixed_vs_x):
    null, _ = mixed_vs_x
    assert support(null).dim == 2
    np.testing.assert_allclose(apply(null, np.diag([1, 0])).matrix, np.eye(2) / 2)


@pytest.mark.parametrize("probs", [[1.0, 0.0], [1.2, -0.2], [0.4, 0.4]])
def test_mixed_unitary_rejects_bad_weights(paulis, probs):
    with pytest.raises(PreconditionError):
        mixed_unitary_channel(probs, [paulis["I"], paulis["X"]])


def test_channel_requires_trace_preservation():
    with pytest.raises(PreconditionError):
        QuantumChannel((0.5 * np.eye(2),))


def test_channel_requires_common_shape():
    with pytest.raises(ShapeMismatchError):
        QuantumChannel((np.eye(2) / np.sqrt(2), np.eye(3) / np.sqrt(2)))


def test_apply_identity_and_dimension_check():
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    np.testing.assert_allclose(apply(identity_channel(2), rho).matrix, rho.matrix)
    with pytest.raises(ShapeMismatchError):
        apply(identity_channel(3), rho)


def test_apply_measurement_channel_on_plus():
    plus = ket(1, 1) / np.sqrt(2)
    qc = povm_to_channel(computational_basis_povm(2))
    out = apply(qc, np.outer(plus, plus.conj()))
    np.testing.assert_allclose(out.matrix, np.diag([0.5, 0.5]), atol=1e-15)


def test_extend_identity_by_identity():
    c = extend_by_identity(identity_channel(2), 2)
    np.testing.assert_allclose(c.kraus[0], np.eye(4))


def test_extend_x_on_bell_state(paulis):
    bell = max_entangled(2)
    c = extend_by_identity(unitary_channel(paulis["X"]), 2)
    out = apply(c, bell.projector()).matrix
    # (X (x) I)(|00> + |11>)/sqrt2 = (|10> + |01>)/sqrt2, by hand
    target = ket(0, 1, 1, 0) / np.sqrt(2)
    np.testing.assert_allclose(out, np.outer(target, target.conj()), atol=1e-15)
    assert len(c) == 1


def test_extend_dimension_limit(paulis):
    with pytest.raises(DimensionLimitError):
        extend_by_identity(unitary_channel(paulis["X"]), 8, max_dim=8)


def test_tensor_power_examples(paulis, mixed_vs_x):
    x = unitary_channel(paulis["X"])
    assert tensor_power(x, 1) is x
    np.testing.assert_allclose(tensor_power(x, 2).kraus[0], np.kron(paulis["X"], paulis["X"]))
    null, _ = mixed_vs_x
    sq = tensor_power(null, 2)
    assert len(sq) == 4
    assert vec_rank(sq.kraus) == 4
    assert support(sq).dim == 4


def test_tensor_power_dimension_limit(paulis):
    with pytest.raises(DimensionLimitError):
        tensor_power(unitary_channel(paulis["X"]), 5, max_dim=16)


def test_depolarizing_support_is_full():
    c = depolarizing_channel(0.75)
    assert vec_rank(c.kraus) == 4
    assert support(c).dim == 4


def test_joint_support_examples(paulis, mixed_vs_x):
    null, _ = mixed_vs_x
    assert joint_support([null]).dim == support(null).dim
    ident, x = unitary_channel(paulis["I"]), unitary_channel(paulis["X"])
    assert joint_support([ident, x]).dim == 2
    assert joint_support([ident, null]).dim == 2
    with pytest.raises(ShapeMismatchError):
        joint_support([ident, identity_channel(3)])


def test_output_state_examples(paulis):
    rng = np.random.default_rng(3)
    psi = haar_state(4, rng)
    np.testing.assert_allclose(output_state(identity_channel(2), psi).matrix, psi.projector(),
                               atol=1e-15)
    out = output_state(unitary_channel(paulis["X"]), PureState(ket(1, 0)), ref_dim=1)
    np.testing.assert_allclose(out.matrix, np.diag([0, 1]))
    dephase = mixed_unitary_channel([0.5, 0.5], [paulis["I"], paulis["Z"]])
    w = np.linalg.eigvalsh(output_state(dephase, max_entangled(2)).matrix)
    np.testing.assert_allclose(w, [0, 0, 0.5, 0.5], atol=1e-15)


def test_output_state_dimension_mismatch(paulis):
    with pytest.raises(ShapeMismatchError):
        output_state(unitary_channel(paulis["X"]), max_entangled(2), ref_dim=3)


def test_max_entangled_examples():
    np.testing.assert_allclose(max_entangled(1).amplitudes, [1])
    np.testing.assert_allclose(max_entangled(2).amplitudes, ket(1, 0, 0, 1) / np.sqrt(2))
    for d in (2, 3, 4):
        psi = max_entangled(d)
        m = psi.amplitudes.reshape(d, d)
        np.testing.assert_allclose(m @ m.conj().T, np.eye(d) / d, atol=1e-15)
        np.testing.assert_allclose(psi.schmidt_coefficients(d), np.full(d, d ** -0.5))


def test_pure_state_requires_unit_norm():
    with pytest.raises(PreconditionError):
        PureState(ket(1, 1))


def test_density_matrix_invariants():
    with pytest.raises(PreconditionError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(PreconditionError):
        DensityMatrix(np.array([[0.5, 0.1], [0.3, 0.5]]))


@pytest.mark.parametrize("seed", range(20))
def test_apply_preserves_trace_and_positivity(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 4))
    c = random_channel(d, int(rng.integers(1, d * d + 1)), rng)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T
    out = apply(c, rho / np.trace(rho)).matrix
    assert abs(np.trace(out) - 1) <= 1e-9
    assert np.linalg.eigvalsh(out)[0] >= -1e-9


def test_output_state_matches_dense_oracle():
    rng = np.random.default_rng(8)
    c = random_channel(3, 4, rng)
    psi = haar_state(9, rng)
    np.testing.assert_allclose(output_state(c, psi).matrix,
                               dense_output_state(c.kraus, psi.amplitudes, 3), atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_tensor_power_support_dimension(seed):
    rng = np.random.default_rng(100 + seed)
    r = int(rng.integers(1, 4))
    c = random_channel(2, r, rng)
    s1 = support(c).dim
    s2 = support(tensor_power(c, 2)).dim
    assert s1 == r
    assert s2 == s1 ** 2


def state_support(rho):
    return column_space(rho)


def weight_outside(rho_big, rho_small):
    """tr((I - P) rho_small) with P the support projector of rho_big.

    Stable even when rho_big has tiny nonzero eigenvalues, unlike comparing
    two separately computed bases.
    """
    p = projector_onto(state_support(rho_big))
    return float(np.real(np.trace(rho_small) - np.trace(p @ rho_small)))


@pytest.mark.parametrize("n", [1, 2])
def test_support_inclusion_propagates_to_outputs(n):
    # nested channel supports give nested output supports, for any input
    rng = np.random.default_rng(2024 + n)
    d = 2
    for _ in range(50):
        null, alt = nested_pair(d, rng)
        assert subspace_contains(support(alt), support(null))
        psi = haar_state(d ** (2 * n), rng)
        s0 = output_state(tensor_power(null, n), psi).matrix
        s1 = output_state(tensor_power(alt, n), psi).matrix
        assert abs(weight_outside(s1, s0)) <= 1e-9


@pytest.mark.parametrize("n", [1, 2])
def test_support_non_inclusion_survives_full_schmidt_input(n):
    rng = np.random.default_rng(77 + n)
    d = 2
    for _ in range(50):
        null, alt = certifiable_pair(d, rng)
        assert not subspace_contains(support(alt), support(null))
        psi = schmidt_state(d ** n, rng)
        rho0 = output_state(tensor_power(null, n), psi).matrix
        rho1 = output_state(tensor_power(alt, n), psi).matrix
        assert not subspace_contains(state_support(rho1), state_support(rho0))
        assert weight_outside(rho1, rho0) > 1e-6


def test_non_inclusion_at_qutrit_maximally_entangled_input():
    rng = np.random.default_rng(80)
    for _ in range(50):
        null, alt = certifiable_pair(3, rng)
        rho0 = output_state(null, max_entangled(3)).matrix
        rho1 = output_state(alt, max_entangled(3)).matrix
        assert weight_outside(rho1, rho0) > 1e-6
