"""Seeded random states, unitaries, channels and POVMs.

All generators take a ``numpy.random.Generator`` so callers control
reproducibility.
"""
from __future__ import annotations

import numpy as np

from .channels import PureState, QuantumChannel
from .errors import PreconditionError


def _ginibre(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_state(dim: int, rng: np.random.Generator) -> PureState:
    return PureState.normalized(_ginibre(rng, dim))


def haar_states(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random unit vectors as rows.

    Draws are laid out so that a longer batch from the same seed extends a
    shorter one (prefix stable).
    """
    raw = rng.standard_normal((count, dim, 2))
    v = raw[..., 0] + 1j * raw[..., 1]
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(_ginibre(rng, rows, cols))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return haar_isometry(d, d, rng)


def random_channel(d: int, kraus_rank: int, rng: np.random.Generator,
                   out_dim: int | None = None) -> QuantumChannel:
    """Channel whose Kraus operators are blocks of a Haar isometry."""
    out_dim = d if out_dim is None else out_dim
    if kraus_rank * out_dim < d:
        raise ValueError("kraus_rank * out_dim must be at least the input dimension")
    v = haar_isometry(kraus_rank * out_dim, d, rng)
    return QuantumChannel(tuple(v.reshape(kraus_rank, out_dim, d)))


def random_probabilities(m: int, rng: np.random.Generator) -> np.ndarray:
    p = rng.dirichlet(np.ones(m))
    p = np.maximum(p, 1e-3)
    return p / p.sum()


def _normalize_effects(gs: list[np.ndarray]) -> list[np.ndarray]:
    total = sum(gs)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    effects = [inv_sqrt @ g @ inv_sqrt for g in gs]
    return [(e + e.conj().T) / 2 for e in effects]


def random_povm_effects(d: int, m: int, rng: np.random.Generator,
                        ranks: list[int] | None = None) -> list[np.ndarray]:
    """Random POVM with ``m`` effects of the given ranks (random if omitted)."""
    if ranks is None:
        ranks = list(rng.integers(1, d + 1, size=m))
        # effects must jointly span the space or the normalization is singular
        while sum(ranks) < d:
            i = int(rng.integers(m))
            ranks[i] = min(ranks[i] + 1, d)
    elif sum(ranks) < d:
        raise PreconditionError(f"effect ranks {ranks} cannot sum to the identity in dimension {d}")
    gs = []
    for r in ranks:
        a = _ginibre(rng, d, int(r))
        gs.append(a @ a.conj().T)
    return _normalize_effects(gs)


def random_rank_one_vectors(d: int, m: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors ``x_i`` and weights ``a_i`` with ``sum_i a_i |x_i><x_i| = I``."""
    v = _ginibre(rng, m, d)
    total = v.T @ v.conj()
    w, u = np.linalg.eigh(total)
    inv_sqrt = (u / np.sqrt(w)) @ u.conj().T
    x = v @ inv_sqrt.T
    weights = np.linalg.norm(x, axis=1) ** 2
    return x / np.sqrt(weights)[:, None], weights
