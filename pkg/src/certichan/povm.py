"""Certification of measurements.

A POVM ``{M_i}`` is treated as the quantum-classical channel
``rho -> sum_i tr(M_i rho) |i><i|``. SIC POVMs for d = 2 and d = 3 are built
from fixed analytic fiducials; the SIC bounds are evaluated both in closed
form and by explicit construction of the block-diagonal accepting effect.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .certify import MAX_DENSE_DIM, CertificationCertificate, _as_probability, can_certify
from .channels import QuantumChannel, max_entangled, output_state, tensor_power
from .errors import DimensionLimitError, PreconditionError, ShapeMismatchError
from .linalg import DEFAULT_TOL, Tolerance, column_space, kron_all, row_span, subspace_contains

POVM_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class Povm:
    effects: tuple = field(repr=False)

    def __post_init__(self):
        effects = []
        for e in self.effects:
            e = np.array(e, dtype=complex)
            if e.ndim != 2 or e.shape[0] != e.shape[1]:
                raise ShapeMismatchError("POVM effects must be square matrices")
            if np.max(np.abs(e - e.conj().T)) > POVM_ATOL:
                raise PreconditionError("POVM effect is not Hermitian")
            e = (e + e.conj().T) / 2
            if np.linalg.eigvalsh(e)[0] < -POVM_ATOL:
                raise PreconditionError("POVM effect is not positive semidefinite")
            e.setflags(write=False)
            effects.append(e)
        if not effects:
            raise PreconditionError("a POVM needs at least one effect")
        d = effects[0].shape[0]
        if any(e.shape != (d, d) for e in effects):
            raise ShapeMismatchError("POVM effects must share one shape")
        err = np.max(np.abs(sum(effects) - np.eye(d)))
        if err > POVM_ATOL:
            raise PreconditionError(f"POVM effects do not sum to identity (deviation {err:.3g})")
        object.__setattr__(self, "effects", tuple(effects))

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self):
        return len(self.effects)

    def __repr__(self):
        return f"Povm(dim={self.dim}, effects={len(self)})"


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``{0, ..., size-1}``; ``mapping[i]`` is the image of ``i``.

    Cycle notation in :meth:`parse` and :meth:`cycle_notation` is 1-based.
    """

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(i) for i in self.mapping)
        if sorted(m) != list(range(len(m))):
            raise PreconditionError(f"{m} is not a permutation of 0..{len(m) - 1}")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(size)))

    @classmethod
    def parse(cls, text: str, size: int) -> "Permutation":
        """Parse cycle notation such as ``"(1 2)(3 4)"`` or ``"(1,2,3)"``."""
        text = text.strip()
        if text in ("", "()", "id", "e"):
            return cls.identity(size)
        if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", text):
            raise PreconditionError(f"invalid cycle notation {text!r}")
        mapping = list(range(size))
        seen = set()
        for cycle in re.findall(r"\(([^)]*)\)", text):
            elems = [int(x) - 1 for x in re.split(r"[\s,]+", cycle.strip())]
            for e in elems:
                if not 0 <= e < size:
                    raise PreconditionError(f"element {e + 1} outside 1..{size} in {text!r}")
                if e in seen:
                    raise PreconditionError(f"element {e + 1} repeated in {text!r}")
                seen.add(e)
            for a, b in zip(elems, elems[1:] + elems[:1]):
                mapping[a] = b
        return cls(tuple(mapping))

    @property
    def size(self) -> int:
        return len(self.mapping)

    @property
    def fixed_point_count(self) -> int:
        return sum(1 for i, j in enumerate(self.mapping) if i == j)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def cycle_notation(self) -> str:
        seen, parts = set(), []
        for start in range(self.size):
            if start in seen or self.mapping[start] == start:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(str(i + 1))
                i = self.mapping[i]
            parts.append("(" + " ".join(cyc) + ")")
        return "".join(parts) or "()"


def fixed_points(pi: Permutation) -> int:
    return pi.fixed_point_count


@dataclass(frozen=True, eq=False)
class SicPovm:
    """SIC POVM with effects ``|phi_i><phi_i| / d``."""

    dim: int
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = self.dim
        v = np.array(self.vectors, dtype=complex).reshape(d * d, d)
        if np.max(np.abs(np.linalg.norm(v, axis=1) - 1)) > 1e-12:
            raise PreconditionError("SIC vectors must be unit vectors")
        overlaps = np.abs(v.conj() @ v.T) ** 2
        off = overlaps[~np.eye(d * d, dtype=bool)]
        if np.max(np.abs(off - 1 / (d + 1))) > 1e-9:
            raise PreconditionError("vectors do not satisfy the SIC overlap condition")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def effects(self) -> list:
        return [np.outer(x, x.conj()) / self.dim for x in self.vectors]

    def povm(self, pi: Permutation | None = None) -> Povm:
        """The SIC POVM, optionally with effect ``i`` replaced by effect ``pi(i)``."""
        effects = self.effects
        if pi is None:
            return Povm(tuple(effects))
        if pi.size != len(effects):
            raise ShapeMismatchError(f"permutation of {pi.size} elements for {len(effects)} effects")
        return Povm(tuple(effects[pi(i)] for i in range(len(effects))))


def _bloch_ket(x, y, z) -> np.ndarray:
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x)
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def sic_povm(d: int) -> SicPovm:
    """Qubit tetrahedron (d = 2) or the Hesse SIC orbit of (0, 1, -1)/sqrt 2 (d = 3)."""
    if d == 2:
        r2 = math.sqrt(2)
        bloch = [(0, 0, 1), (2 * r2 / 3, 0, -1 / 3),
                 (-r2 / 3, math.sqrt(2 / 3), -1 / 3), (-r2 / 3, -math.sqrt(2 / 3), -1 / 3)]
        return SicPovm(2, np.array([_bloch_ket(*b) for b in bloch]))
    if d == 3:
        omega = np.exp(2j * np.pi / 3)
        shift = np.roll(np.eye(3), 1, axis=0)
        clock = np.diag([1, omega, omega ** 2])
        fiducial = np.array([0, 1, -1]) / math.sqrt(2)
        vecs = [np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b) @ fiducial
                for a in range(3) for b in range(3)]
        return SicPovm(3, np.array(vecs))
    raise PreconditionError(f"built-in SIC POVMs exist only for d in (2, 3), got {d}")


def von_neumann_povm(u) -> Povm:
    """Projective measurement onto the columns of a unitary."""
    u = np.asarray(u, dtype=complex)
    return Povm(tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1])))


def computational_basis_povm(d: int) -> Povm:
    return von_neumann_povm(np.eye(d))


def povm_to_channel(p: Povm, tol: Tolerance = DEFAULT_TOL) -> QuantumChannel:
    """Quantum-classical channel with Kraus ops ``sqrt(a) |i><x|`` per eigenpair of ``M_i``."""
    m, d = len(p), p.dim
    kraus = []
    for i, effect in enumerate(p.effects):
        w, v = np.linalg.eigh(effect)
        for a, x in zip(w, v.T):
            if a > tol.abs_floor:
                op = np.zeros((m, d), dtype=complex)
                op[i] = np.sqrt(a) * x.conj()
                kraus.append(op)
    return QuantumChannel(tuple(kraus))


def _check_pair(p0: Povm, p1: Povm):
    if p0.dim != p1.dim:
        raise ShapeMismatchError(f"POVM dimensions differ: {p0.dim} vs {p1.dim}")
    if len(p0) != len(p1):
        raise ShapeMismatchError(f"POVM effect counts differ: {len(p0)} vs {len(p1)}")


def can_certify_povm(p0: Povm, p1: Povm, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff some matched pair of effects has supp(M_i) not inside supp(N_i)."""
    _check_pair(p0, p1)
    return any(not subspace_contains(column_space(n, tol), column_space(m, tol))
               for m, n in zip(p0.effects, p1.effects))


def can_certify_povm_as_channels(p0: Povm, p1: Povm, tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_pair(p0, p1)
    return can_certify(povm_to_channel(p0, tol), [povm_to_channel(p1, tol)], tol)


def rank_one_certify(x_vectors: Sequence, y_vectors: Sequence, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff some pair ``x_i``, ``y_i`` is linearly independent."""
    xs = [np.asarray(x, dtype=complex).ravel() for x in x_vectors]
    ys = [np.asarray(y, dtype=complex).ravel() for y in y_vectors]
    if len(xs) != len(ys):
        raise ShapeMismatchError("need equally many x and y vectors")
    for x, y in zip(xs, ys):
        if x.shape != y.shape:
            raise ShapeMismatchError("paired vectors must have equal dimension")
        if row_span(np.stack([x, y]), tol).dim == 2:
            return True
    return False


def sic_p1_bound_exact(d: int, k: int, n: int = 1) -> Fraction:
    _check_dk(d, k)
    return Fraction(d + k, d * d + d) ** n


def sic_p1_bound(d: int, k: int) -> float:
    """``(d + k) / (d^2 + d)``: SIC p1 with ``k`` fixed points of the relabeling."""
    return float(sic_p1_bound_exact(d, k))


def sic_p1_parallel_bound(d: int, k: int, n: int) -> float:
    if n < 1:
        raise PreconditionError("n must be positive")
    return float(sic_p1_bound_exact(d, k, n))


def sic_overlap_sum(d: int, k: int, n: int) -> Fraction:
    """Exact ``sum_s C(n, n-s) k^(n-s) (d^2-k)^s (d+1)^-s``.

    Counts multi-indices by the number ``s`` of slots that are not fixed by
    the permutation; each such slot contributes an overlap of ``1/(d+1)``.
    """
    _check_dk(d, k)
    return sum((Fraction(math.comb(n, n - s) * k ** (n - s) * (d * d - k) ** s, (d + 1) ** s)
                for s in range(n + 1)), Fraction(0))


def _check_dk(d: int, k: int):
    if d < 1:
        raise PreconditionError("d must be positive")
    if not 0 <= k <= d * d:
        raise PreconditionError(f"fixed-point count {k} outside 0..{d * d}")


def sic_output_states(d: int, pi: Permutation, n: int = 1):
    """``sigma0, sigma1`` for n parallel uses on the maximally entangled input."""
    sic = sic_povm(d)
    psi = max_entangled(d ** n)
    states = []
    for perm in (None, pi):
        channel = tensor_power(povm_to_channel(sic.povm(perm)), n)
        states.append(output_state(channel, psi).matrix)
    return psi, states[0], states[1]


def sic_accepting_effect(sic: SicPovm, pi: Permutation, n: int = 1) -> np.ndarray:
    """Block-diagonal ``sum |i..><i..| (x) (I - |phi_pi(i..)><phi_pi(i..)|)^T``."""
    d = sic.dim
    m = d * d
    ref = d ** n
    total = m ** n * ref
    if total > MAX_DENSE_DIM:
        raise DimensionLimitError(f"SIC effect of dimension {total} exceeds {MAX_DENSE_DIM}")
    effect = np.zeros((total, total), dtype=complex)
    for block, idx in enumerate(product(range(m), repeat=n)):
        phi = kron_all([sic.vectors[pi(i)].reshape(-1, 1) for i in idx]).ravel()
        omega = np.eye(ref) - np.outer(phi, phi.conj())
        sl = slice(block * ref, (block + 1) * ref)
        effect[sl, sl] = omega.T
    return effect


def sic_certificate(d: int, pi: Permutation, n: int = 1) -> CertificationCertificate:
    """Certificate for SIC POVM ``P0`` against its relabeling ``P1`` by ``pi``.

    ``p1`` and ``p2`` are traces against explicitly constructed output
    states. For the identity relabeling the certificate is trivial (p1 = 1).
    """
    if pi.size != d * d:
        raise ShapeMismatchError(f"permutation must act on {d * d} elements, got {pi.size}")
    if n < 1:
        raise PreconditionError("n must be positive")
    sic = sic_povm(d)
    effect = sic_accepting_effect(sic, pi, n)
    psi, sigma0, sigma1 = sic_output_states(d, pi, n)
    p1 = 1.0 - float(np.trace(effect @ sigma0).real)
    p2 = float(np.trace(effect @ sigma1).real)
    return CertificationCertificate(psi, effect, _as_probability(p1), max(p2, 0.0), n)
