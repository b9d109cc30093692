"""Dense complex linear algebra: Kronecker products, operator spans, subspace
inclusion, projectors and the distance from zero to the numerical range.

Operators are plain ``numpy`` arrays. Vectorization is row-major
(``A.reshape(-1)``) everywhere in the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DimensionLimitError, PreconditionError, ShapeMismatchError

#: Largest row/column count any constructed operator may have.
MAX_DIM = 2 ** 20


@dataclass(frozen=True)
class Tolerance:
    """Numerical rank decision thresholds.

    Singular values below ``rel_rank_cut * s_max`` or below ``abs_floor`` are
    treated as zero.
    """

    rel_rank_cut: float = 1e-10
    abs_floor: float = 1e-12

    def __post_init__(self):
        if not 0 < self.rel_rank_cut < 1:
            raise ValueError(f"rel_rank_cut must lie in (0, 1), got {self.rel_rank_cut}")
        if not 0 < self.abs_floor < 1:
            raise ValueError(f"abs_floor must lie in (0, 1), got {self.abs_floor}")

    def threshold(self, s_max: float) -> float:
        return max(self.rel_rank_cut * s_max, self.abs_floor)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis (rows of ``basis``) of a subspace of C^ambient_dim.

    ``tol`` is the relative rank threshold that produced the basis; inclusion
    tests allow projection residuals up to ``10 * tol``.
    """

    ambient_dim: int
    basis: np.ndarray = field(repr=False)
    tol: float = DEFAULT_TOL.rel_rank_cut

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex).reshape(-1, self.ambient_dim)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        gram = basis.conj() @ basis.T
        if basis.shape[0] and np.max(np.abs(gram - np.eye(basis.shape[0]))) > max(10 * self.tol, 1e-12):
            raise PreconditionError("subspace basis is not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim}, tol={self.tol:g})"


def is_unitary(u: np.ndarray, atol: float = 1e-9) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


def kron(a: np.ndarray, b: np.ndarray, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product with the left factor as the slow index."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionLimitError(f"kron result {rows}x{cols} exceeds dimension limit {max_dim}")
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray], max_dim: int = MAX_DIM) -> np.ndarray:
    return reduce(lambda x, y: kron(x, y, max_dim), factors)


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each row made real positive
    idx = np.argmax(np.abs(vectors), axis=1)
    lead = vectors[np.arange(vectors.shape[0]), idx]
    return vectors * (np.abs(lead) / lead)[:, None]


def span_of(operators: Sequence[np.ndarray], tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of span{vec(A) : A in operators}.

    Basis vectors are right singular vectors of the stacked vectorizations,
    in descending singular-value order, with a fixed phase convention.
    """
    ops = [np.asarray(op, dtype=complex) for op in operators]
    if not ops:
        raise PreconditionError("span_of needs at least one operator")
    shape = ops[0].shape
    if any(op.shape != shape for op in ops):
        raise ShapeMismatchError("all operators passed to span_of must share one shape")
    stack = np.stack([op.reshape(-1) for op in ops])
    return row_span(stack, tol)


def row_span(stack: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Subspace spanned by the rows of a 2-D array."""
    stack = np.asarray(stack, dtype=complex)
    ambient = stack.shape[1]
    _, s, vh = np.linalg.svd(stack, full_matrices=False)
    s_max = float(s[0]) if s.size else 0.0
    cut = tol.threshold(s_max)
    rank = int(np.sum(s > cut))
    rel = cut / s_max if s_max > 0 else tol.abs_floor
    basis = _fix_phase(vh[:rank]) if rank else np.zeros((0, ambient), dtype=complex)
    return Subspace(ambient, basis, max(rel, tol.rel_rank_cut))


def column_space(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Range of a matrix, e.g. the support of a positive semidefinite operator."""
    return row_span(np.asarray(m, dtype=complex).T, tol)


def orthogonal_complement(s: Subspace) -> Subspace:
    if s.dim == 0:
        return Subspace(s.ambient_dim, np.eye(s.ambient_dim), s.tol)
    # null space of the basis rows via a full SVD
    _, _, vh = np.linalg.svd(s.basis.conj(), full_matrices=True)
    comp = vh[s.dim:].conj()
    if comp.shape[0] == 0:
        return Subspace(s.ambient_dim, np.zeros((0, s.ambient_dim)), s.tol)
    return Subspace(s.ambient_dim, _fix_phase(comp), s.tol)


def projection_residual(big: Subspace, vectors: np.ndarray) -> np.ndarray:
    """Norms ``||v - P_big v||`` for each row ``v`` of ``vectors``."""
    vectors = np.atleast_2d(vectors)
    if big.dim == 0:
        return np.linalg.norm(vectors, axis=1)
    coeffs = vectors @ big.basis.conj().T
    return np.linalg.norm(vectors - coeffs @ big.basis, axis=1)


def subspace_contains(big: Subspace, small: Subspace) -> bool:
    """True iff ``small`` lies inside ``big`` up to the rank tolerance."""
    if big.ambient_dim != small.ambient_dim:
        raise ShapeMismatchError(
            f"ambient dimensions differ: {big.ambient_dim} vs {small.ambient_dim}")
    if small.dim == 0:
        return True
    slack = 10 * max(big.tol, small.tol)
    return bool(np.all(projection_residual(big, small.basis) <= slack))


def projector_onto(s: Subspace) -> np.ndarray:
    """Orthogonal projector ``sum_k |b_k><b_k|`` onto ``s``."""
    b = s.basis
    p = b.T @ b.conj()
    return (p + p.conj().T) / 2


def nu_distance(u: np.ndarray, atol: float = 1e-9) -> float:
    """Distance from the origin to the numerical range of a unitary.

    For normal matrices the numerical range is the convex hull of the
    eigenvalues, so this is a planar point-to-polygon distance.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, atol):
        raise PreconditionError("nu_distance requires a unitary matrix")
    eig = np.linalg.eigvals(u)
    return hull_distance(eig)


def hull_distance(points: np.ndarray) -> float:
    """Distance from 0 to the convex hull of complex points."""
    pts = np.asarray(points, dtype=complex).ravel()
    mags = np.abs(pts)
    if np.min(mags) <= 1e-15:
        return 0.0
    if pts.size == 1:
        return float(mags[0])
    angles = np.sort(np.angle(pts))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
    # origin is outside the hull iff every point sits in an open half-plane
    if np.max(gaps) <= math.pi + 1e-12:
        return 0.0
    best = float(np.min(mags))
    for i in range(pts.size):
        for j in range(i + 1, pts.size):
            best = min(best, _segment_distance(pts[i], pts[j]))
    return best


def _segment_distance(a: complex, b: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(a)
    t = min(1.0, max(0.0, -(a.conjugate() * ab).real / denom))
    return abs(a + t * ab)
