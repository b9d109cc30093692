"""Certification of a null-hypothesis channel against alternatives with zero
false-negative probability.

A null channel can be certified in the parallel scheme exactly when its
Kraus span is not contained in the joint Kraus span of the alternatives. The
certificate built here measures ``{Omega0, I - Omega0}`` where ``Omega0`` is
the projector onto the orthocomplement of the alternatives' output support,
which is the best accepting effect for a fixed input under ``p2 = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import (PureState, QuantumChannel, _check_same_shape, identity_channel,
                       joint_support, max_entangled, output_vectors, support, tensor_power)
from .errors import DimensionLimitError, NoCertificateError, NumericalIntegrityError, PreconditionError
from .linalg import (DEFAULT_TOL, MAX_DIM, Subspace, Tolerance, orthogonal_complement,
                     projection_residual, projector_onto, row_span, subspace_contains)
from .sampling import haar_states

P2_ATOL = 1e-9

#: Largest output-state dimension for which a dense accepting effect is built.
MAX_DENSE_DIM = 4096


@dataclass(frozen=True, eq=False)
class CertificationCertificate:
    """Input state and accepting effect for one certification experiment.

    ``p1`` is the false-positive probability ``tr((I - Omega0) rho0)`` and
    ``p2`` the false-negative probability ``sum_j tr(Omega0 rho_j)``.
    """

    input_state: PureState
    accepting_effect: np.ndarray = field(repr=False)
    p1: float
    p2: float
    n_parallel: int = 1

    def __post_init__(self):
        eff = np.array(self.accepting_effect, dtype=complex)
        if eff.ndim != 2 or eff.shape[0] != eff.shape[1]:
            raise PreconditionError("accepting effect must be a square matrix")
        if np.max(np.abs(eff - eff.conj().T), initial=0.0) > 1e-9:
            raise PreconditionError("accepting effect is not Hermitian")
        eff = (eff + eff.conj().T) / 2
        w = np.linalg.eigvalsh(eff)
        if w[0] < -1e-9 or w[-1] > 1 + 1e-9:
            raise PreconditionError("accepting effect must satisfy 0 <= Omega0 <= I")
        if not 0 <= self.p1 <= 1:
            raise PreconditionError(f"p1 = {self.p1} outside [0, 1]")
        if self.p2 > P2_ATOL:
            raise PreconditionError(f"p2 = {self.p2:.3g} is not zero; not a certificate")
        if self.n_parallel < 1:
            raise PreconditionError("n_parallel must be positive")
        eff.setflags(write=False)
        object.__setattr__(self, "accepting_effect", eff)


@dataclass(frozen=True)
class QueryBound:
    epsilon: float
    p1_single: float
    n_epsilon: int


def _check_family(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel]):
    if not alt_channels:
        raise PreconditionError("at least one alternative channel is required")
    _check_same_shape([null_channel, *alt_channels])


def can_certify(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff supp(null) is not contained in supp(alt_1, ..., alt_m)."""
    _check_family(null_channel, alt_channels)
    return not subspace_contains(joint_support(alt_channels, tol), support(null_channel, tol))


def can_certify_adaptive(null_channel: QuantumChannel, alt_channel: QuantumChannel,
                         tol: Tolerance = DEFAULT_TOL) -> bool:
    # Adaptive certifiability coincides with the parallel support criterion.
    return can_certify(null_channel, [alt_channel], tol)


def _require_full_schmidt_rank(psi: PureState, in_dim: int, tol: Tolerance):
    s = psi.schmidt_coefficients(in_dim)
    rank = int(np.sum(s > tol.threshold(float(s[0]))))
    if rank < in_dim:
        raise PreconditionError(
            f"input state has Schmidt rank {rank} across the channel/reference cut; "
            f"full rank {in_dim} is required")


def alternative_output_support(alt_channels: Sequence[QuantumChannel], psi: PureState,
                               tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Support of ``{(Phi_j (x) id)(|psi><psi|)}_j``."""
    return row_span(np.concatenate([output_vectors(c, psi) for c in alt_channels]), tol)


def _as_probability(p: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Clamp to [0, 1]; values within ``abs_floor`` of zero are round-off of an exact zero."""
    p = min(max(float(p), 0.0), 1.0)
    return 0.0 if p <= tol.abs_floor else p


def _weight_in(s: Subspace, vectors: np.ndarray) -> float:
    """``sum_v <v|P_s|v>`` for the rows ``v``."""
    if s.dim == 0:
        return 0.0
    return float(np.sum(np.abs(vectors @ s.basis.conj().T) ** 2))


def build_certificate(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                      psi: PureState | None = None, tol: Tolerance = DEFAULT_TOL,
                      n_parallel: int = 1) -> CertificationCertificate:
    """Certificate with the orthocomplement-projector accepting effect.

    :param psi: input on channel input (x) reference; defaults to the
        maximally entangled state. Must have full Schmidt rank.
    :raises NoCertificateError: when the support criterion fails.
    """
    _check_family(null_channel, alt_channels)
    if not can_certify(null_channel, alt_channels, tol):
        raise NoCertificateError("supp(null) lies inside the alternatives' joint support")
    if psi is None:
        psi = max_entangled(null_channel.in_dim)
    _require_full_schmidt_rank(psi, null_channel.in_dim, tol)
    return _certificate_for(null_channel, alt_channels, psi, tol, n_parallel)


def _certificate_terms(null_channel, alt_channels, psi, tol):
    v0 = output_vectors(null_channel, psi)
    alt_vectors = np.concatenate([output_vectors(c, psi) for c in alt_channels])
    alt = row_span(alt_vectors, tol)
    p1 = _as_probability(_weight_in(alt, v0), tol)
    p2 = float(np.sum(projection_residual(alt, alt_vectors) ** 2))
    if p2 > P2_ATOL:
        raise NumericalIntegrityError(f"false-negative probability {p2:.3g} is not zero")
    return p1, p2, alt


def _certificate_for(null_channel, alt_channels, psi, tol, n_parallel):
    p1, p2, alt = _certificate_terms(null_channel, alt_channels, psi, tol)
    if alt.ambient_dim > MAX_DENSE_DIM:
        raise DimensionLimitError(
            f"output space of dimension {alt.ambient_dim} is too large for a dense effect")
    effect = projector_onto(orthogonal_complement(alt))
    return CertificationCertificate(psi, effect, p1, p2, n_parallel)


def certificate_p1(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                   psi: PureState, tol: Tolerance = DEFAULT_TOL) -> float:
    """``p1`` of :func:`build_certificate` without forming the dense effect."""
    v0 = output_vectors(null_channel, psi)
    alt = alternative_output_support(alt_channels, psi, tol)
    return _as_probability(_weight_in(alt, v0), tol)


def rank_one_p1(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                psi: PureState, phi0: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> float:
    """``1 - <phi0|rho0|phi0>`` for a rank-one effect ``|phi0><phi0|``.

    ``phi0`` is first projected onto the orthocomplement of the alternative
    output support and normalized, so ``p2 = 0`` holds.
    """
    alt = alternative_output_support(alt_channels, psi, tol)
    phi = np.asarray(phi0, dtype=complex).ravel()
    if alt.dim:
        phi = phi - (phi @ alt.basis.conj().T) @ alt.basis
    norm = np.linalg.norm(phi)
    if norm <= tol.abs_floor:
        raise PreconditionError("phi0 has no component orthogonal to the alternative support")
    phi = phi / norm
    v0 = output_vectors(null_channel, psi)
    return 1.0 - float(np.sum(np.abs(v0 @ phi.conj()) ** 2))


def parallel_certificate(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                         n: int, psi_n: PureState | None = None,
                         tol: Tolerance = DEFAULT_TOL, max_dim: int = MAX_DIM) -> CertificationCertificate:
    """Certificate for ``Phi0^{(x)n}`` against ``{Phi_j^{(x)n}}_j``."""
    _check_family(null_channel, alt_channels)
    null_n = tensor_power(null_channel, n, max_dim)
    alts_n = [tensor_power(c, n, max_dim) for c in alt_channels]
    if psi_n is None:
        psi_n = max_entangled(null_n.in_dim)
    return build_certificate(null_n, alts_n, psi_n, tol, n_parallel=n)


def p1_parallel(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                n: int, psi_n: PureState | None = None, tol: Tolerance = DEFAULT_TOL,
                max_dim: int = MAX_DIM) -> float:
    """False-positive probability after ``n`` parallel uses (``p2 = 0``).

    The input may be any full-Schmidt-rank state on the n-copy space, entangled
    across copies or not.
    """
    _check_family(null_channel, alt_channels)
    if not can_certify(null_channel, alt_channels, tol):
        raise NoCertificateError("supp(null) lies inside the alternatives' joint support")
    null_n = tensor_power(null_channel, n, max_dim)
    alts_n = [tensor_power(c, n, max_dim) for c in alt_channels]
    if psi_n is None:
        psi_n = max_entangled(null_n.in_dim)
    _require_full_schmidt_rank(psi_n, null_n.in_dim, tol)
    return _certificate_terms(null_n, alts_n, psi_n, tol)[0]


def query_bound(p1_single: float, epsilon: float) -> QueryBound:
    """Smallest ``N`` with ``p1_single**N <= epsilon``, i.e. ``ceil(log eps / log p1)``."""
    if not 0 < epsilon < 1:
        raise PreconditionError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 <= p1_single <= 1:
        raise PreconditionError(f"p1 must lie in [0, 1], got {p1_single}")
    if p1_single >= 1:
        raise NoCertificateError("p1 = 1: no finite number of queries reaches epsilon")
    if p1_single == 0:
        return QueryBound(epsilon, p1_single, 1)
    ratio = math.log(epsilon) / math.log(p1_single)
    n = max(1, math.ceil(ratio))
    # an exact-integer ratio may land just above the integer after rounding
    if n > 1 and math.isclose(ratio, n - 1, rel_tol=1e-12):
        n -= 1
    return QueryBound(epsilon, p1_single, n)


def certify_against_identity(c: QuantumChannel, psi: PureState | None = None,
                             tol: Tolerance = DEFAULT_TOL) -> float:
    """Fidelity ``<psi|(c (x) id)(|psi><psi|)|psi>`` with effect ``I - |psi><psi|``."""
    if c.in_dim != c.out_dim:
        raise PreconditionError("certification against the identity needs a square channel")
    if not can_certify(c, [identity_channel(c.in_dim)], tol):
        raise NoCertificateError("the identity channel cannot be certified against itself")
    if psi is None:
        psi = max_entangled(c.in_dim)
    v = output_vectors(c, psi)
    return _as_probability(np.sum(np.abs(v @ psi.amplitudes.conj()) ** 2), tol)


def identity_certificate(c: QuantumChannel, psi: PureState | None = None,
                         tol: Tolerance = DEFAULT_TOL) -> CertificationCertificate:
    if psi is None:
        psi = max_entangled(c.in_dim)
    p1 = certify_against_identity(c, psi, tol)
    effect = np.eye(psi.dim) - psi.projector()
    return CertificationCertificate(psi, effect, p1, 0.0, 1)


def unambiguous_error_from_p1(p1: float) -> float:
    """Unambiguous-discrimination error of a unitary against the identity, ``p1**2``."""
    return p1 * p1


def optimize_input_state(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                         seed: int = 0, samples: int = 200, refine_steps: int = 300,
                         tol: Tolerance = DEFAULT_TOL) -> tuple[PureState, float]:
    """Randomized search for an input state with small ``p1``.

    Haar sampling (plus the maximally entangled state) followed by a
    shrinking-step random local refinement. Not guaranteed globally optimal.
    """
    if not can_certify(null_channel, alt_channels, tol):
        raise NoCertificateError("supp(null) lies inside the alternatives' joint support")
    d = null_channel.in_dim
    rng = np.random.default_rng(seed)

    def score(v):
        psi = PureState.normalized(v)
        if psi.schmidt_coefficients(d)[-1] <= tol.abs_floor:
            return math.inf
        return certificate_p1(null_channel, alt_channels, psi, tol)

    best = max_entangled(d).amplitudes.copy()
    best_p1 = score(best)
    for v in haar_states(d * d, samples, rng):
        p = score(v)
        if p < best_p1:
            best, best_p1 = v, p
    step = 0.3
    for _ in range(refine_steps):
        trial = best + step * (rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d))
        p = score(trial)
        if p < best_p1:
            best, best_p1 = trial / np.linalg.norm(trial), p
        else:
            step = max(step * 0.97, 1e-4)
    return PureState.normalized(best), best_p1
