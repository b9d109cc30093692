import numpy as np
import pytest

from certichan.channels import mixed_unitary_channel, pauli_matrices, unitary_channel


@pytest.fixture
def paulis():
    return pauli_matrices()


@pytest.fixture
def mixed_vs_x(paulis):
    """Mixed-unitary {1/2 I, 1/2 X} as null, unitary X as alternative."""
    null = mixed_unitary_channel([0.5, 0.5], [paulis["I"], paulis["X"]])
    return null, unitary_channel(paulis["X"])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
