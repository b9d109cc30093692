"""Quantum channels in Kraus form, pure and mixed states, and the channel
constructions used throughout certification."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .errors import DimensionLimitError, PreconditionError, ShapeMismatchError
from .linalg import (DEFAULT_TOL, MAX_DIM, Subspace, Tolerance, is_unitary, kron,
                     kron_all, span_of)

TP_ATOL = 1e-9


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map ``X -> sum_i E_i X E_i^dag``.

    The Kraus list is kept exactly as given; rank reduction happens only in
    :func:`support`.
    """

    kraus: tuple = field(repr=False)

    def __post_init__(self):
        ops = tuple(_frozen(k) for k in self.kraus)
        if not ops:
            raise PreconditionError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise ShapeMismatchError("all Kraus operators must be matrices of one shape")
        gram = sum(k.conj().T @ k for k in ops)
        err = np.max(np.abs(gram - np.eye(shape[1])))
        if err > TP_ATOL:
            raise PreconditionError(f"Kraus operators are not trace preserving (deviation {err:.3g})")
        object.__setattr__(self, "kraus", ops)

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def shape(self) -> tuple:
        return self.kraus[0].shape

    def __len__(self):
        return len(self.kraus)

    def __call__(self, rho):
        return apply(self, rho)

    def __repr__(self):
        return f"QuantumChannel(in_dim={self.in_dim}, out_dim={self.out_dim}, kraus_count={len(self)})"


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size == 0:
            raise PreconditionError("empty state vector")
        if abs(np.linalg.norm(amps) - 1) > 1e-12:
            raise PreconditionError(f"state vector has norm {np.linalg.norm(amps):.15g}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, v) -> "PureState":
        v = np.asarray(v, dtype=complex).ravel()
        return cls(v / np.linalg.norm(v))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def schmidt_coefficients(self, first_dim: int) -> np.ndarray:
        """Schmidt coefficients across the cut ``first_dim x rest``."""
        if self.dim % first_dim:
            raise ShapeMismatchError(f"state of dim {self.dim} does not split as {first_dim} x ?")
        return np.linalg.svd(self.amplitudes.reshape(first_dim, -1), compute_uv=False)

    def __repr__(self):
        return f"PureState(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatchError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise PreconditionError("density matrix is not Hermitian")
        m = _frozen((m + m.conj().T) / 2)
        if abs(np.trace(m).real - 1) > 1e-9:
            raise PreconditionError(f"density matrix has trace {np.trace(m).real:.12g}")
        if np.linalg.eigvalsh(m)[0] < -1e-9:
            raise PreconditionError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        return cls(psi.projector())

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def unitary_channel(u) -> QuantumChannel:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, 1e-9):
        raise PreconditionError("unitary_channel requires a unitary matrix")
    return QuantumChannel((u,))


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel((np.eye(d),))


def mixed_unitary_channel(probs: Sequence[float], unitaries: Sequence) -> QuantumChannel:
    """Channel ``rho -> sum_i p_i U_i rho U_i^dag`` with Kraus ops ``sqrt(p_i) U_i``.

    Zero weights are rejected because they silently drop a unitary from the
    channel's support.
    """
    probs = np.asarray(probs, dtype=float)
    if len(probs) != len(unitaries) or len(probs) == 0:
        raise ShapeMismatchError("need one probability per unitary")
    if np.any(probs <= 0):
        raise PreconditionError("mixed-unitary weights must be strictly positive")
    if abs(probs.sum() - 1) > 1e-12:
        raise PreconditionError(f"mixed-unitary weights sum to {probs.sum():.15g}, expected 1")
    us = [np.asarray(u, dtype=complex) for u in unitaries]
    for u in us:
        if not is_unitary(u, 1e-9):
            raise PreconditionError("mixed_unitary_channel requires unitary matrices")
    return QuantumChannel(tuple(np.sqrt(p) * u for p, u in zip(probs, us)))


def pauli_matrices() -> dict:
    return {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }


def depolarizing_channel(p: float = 0.75) -> QuantumChannel:
    """Qubit channel ``(1 - p) rho + p/3 (X rho X + Y rho Y + Z rho Z)``."""
    if not 0 <= p <= 1:
        raise PreconditionError("depolarizing parameter must lie in [0, 1]")
    pm = pauli_matrices()
    weights = [1 - p, p / 3, p / 3, p / 3]
    return QuantumChannel(tuple(np.sqrt(w) * pm[k] for w, k in zip(weights, "IXYZ") if w > 0))


def apply(c: QuantumChannel, rho) -> DensityMatrix:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (c.in_dim, c.in_dim):
        raise ShapeMismatchError(f"channel expects a {c.in_dim}-dim state, got {m.shape}")
    out = sum(k @ m @ k.conj().T for k in c.kraus)
    return DensityMatrix(out)


def extend_by_identity(c: QuantumChannel, ref_dim: int, max_dim: int = MAX_DIM) -> QuantumChannel:
    """Kraus operators ``E_i (x) I_ref``."""
    if ref_dim < 1:
        raise PreconditionError("reference dimension must be positive")
    eye = np.eye(ref_dim)
    return QuantumChannel(tuple(kron(k, eye, max_dim) for k in c.kraus))


def tensor_power(c: QuantumChannel, n: int, max_dim: int = MAX_DIM) -> QuantumChannel:
    """The n-fold parallel use ``c^{(x) n}`` with Kraus set of size ``len(c)**n``."""
    if n < 1:
        raise PreconditionError("tensor power needs n >= 1")
    if n == 1:
        return c
    if max(c.in_dim, c.out_dim) ** n > max_dim:
        raise DimensionLimitError(f"{n}-fold tensor power exceeds dimension limit {max_dim}")
    ops = tuple(kron_all(combo, max_dim) for combo in product(c.kraus, repeat=n))
    return QuantumChannel(ops)


def support(c: QuantumChannel, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """span{E_i}: the support of the channel."""
    return span_of(c.kraus, tol)


def _check_same_shape(channels: Sequence[QuantumChannel]):
    shape = channels[0].shape
    for ch in channels[1:]:
        if ch.shape != shape:
            raise ShapeMismatchError(f"channel shapes differ: {shape} vs {ch.shape}")


def joint_support(channels: Sequence[QuantumChannel], tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Span of the union of all Kraus lists."""
    if not channels:
        raise PreconditionError("joint_support needs at least one channel")
    _check_same_shape(channels)
    return span_of([k for ch in channels for k in ch.kraus], tol)


def max_entangled(d: int) -> PureState:
    """``sum_t |t>|t> / sqrt(d)`` on C^d (x) C^d."""
    if d < 1:
        raise PreconditionError("dimension must be positive")
    return PureState(np.eye(d).reshape(-1) / np.sqrt(d))


def output_vectors(c: QuantumChannel, psi: PureState, ref_dim: int | None = None) -> np.ndarray:
    """Rows ``(E_i (x) I)|psi>``; the output state is the sum of their projectors."""
    ref_dim = _ref_dim(c, psi, ref_dim)
    amps = psi.amplitudes.reshape(c.in_dim, ref_dim)
    # (E (x) I) vec(A) = vec(E A) in row-major order
    return np.stack([(k @ amps).reshape(-1) for k in c.kraus])


def _ref_dim(c: QuantumChannel, psi: PureState, ref_dim: int | None) -> int:
    if ref_dim is None:
        if psi.dim % c.in_dim:
            raise ShapeMismatchError(f"state of dim {psi.dim} does not fit channel input {c.in_dim}")
        return psi.dim // c.in_dim
    if psi.dim != c.in_dim * ref_dim:
        raise ShapeMismatchError(
            f"state of dim {psi.dim} does not match {c.in_dim} x {ref_dim}")
    return ref_dim


def output_state(c: QuantumChannel, psi: PureState, ref_dim: int | None = None) -> DensityMatrix:
    """``(c (x) id)(|psi><psi|)``; ``ref_dim`` defaults to ``psi.dim // c.in_dim``."""
    ref_dim = _ref_dim(c, psi, ref_dim)
    return apply(extend_by_identity(c, ref_dim), psi.projector())
