"""Independent checks of the certification results.

Everything here works from dense output density matrices and eigenvalue
decompositions, or from random sampling, rather than from the Kraus-span
shortcuts used in :mod:`certichan.certify`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .certify import CertificationCertificate, can_certify, certificate_p1, p1_parallel
from .channels import (PureState, QuantumChannel, max_entangled, output_state, support,
                       tensor_power)
from .errors import NoCertificateError, NumericalIntegrityError, PreconditionError
from .linalg import DEFAULT_TOL, Tolerance, projector_onto, row_span, subspace_contains
from .sampling import haar_states

#: Default brute-force budgets per input dimension.
DEFAULT_SAMPLES = {2: 10_000, 3: 1_000}
NEGATIVE_SLACK = 1e-9


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    seed: int
    empirical_fp_rate: float
    empirical_fn_rate: float
    analytic_p1: float
    fp_std_error: float
    truth: str = "null"
    accept_count: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SimulationReport":
        report = cls(**data)
        report.validate()
        return report

    def validate(self):
        if self.trials < 1:
            raise PreconditionError("trials must be positive")
        if self.truth not in ("null", "alt"):
            raise PreconditionError(f"unknown truth {self.truth!r}")
        expected = math.sqrt(self.empirical_fp_rate * (1 - self.empirical_fp_rate) / self.trials)
        if not math.isclose(self.fp_std_error, expected, rel_tol=1e-12, abs_tol=1e-15):
            raise PreconditionError("fp_std_error inconsistent with the empirical rate")


def _clean_probability(p: float) -> float:
    if p < -NEGATIVE_SLACK or p > 1 + NEGATIVE_SLACK:
        raise NumericalIntegrityError(f"outcome probability {p:.3g} outside [0, 1]")
    # rounding residue of an exactly-zero Born probability must not fire
    if abs(p) <= DEFAULT_TOL.abs_floor:
        return 0.0
    if abs(1 - p) <= DEFAULT_TOL.abs_floor:
        return 1.0
    return min(max(p, 0.0), 1.0)


def simulate_protocol(true_channel: QuantumChannel, cert: CertificationCertificate,
                      trials: int, seed: int = 0, truth: str = "null") -> SimulationReport:
    """Monte Carlo run of the measure-and-decide protocol.

    Each trial measures ``{Omega0, I - Omega0}`` on the true output state;
    outcome ``Omega0`` accepts the null hypothesis. Trial ``i`` consumes the
    ``i``-th uniform draw of ``numpy.random.default_rng(seed)``.

    :param truth: ``"null"`` if ``true_channel`` is the null channel (rejections
        are false positives), ``"alt"`` otherwise (acceptances are false
        negatives).
    """
    if trials < 1:
        raise PreconditionError("trials must be positive")
    if truth not in ("null", "alt"):
        raise PreconditionError(f"truth must be 'null' or 'alt', got {truth!r}")
    channel = tensor_power(true_channel, cert.n_parallel)
    if cert.input_state.dim % channel.in_dim:
        raise PreconditionError("certificate input does not fit the channel")
    rho = output_state(channel, cert.input_state).matrix
    if rho.shape != cert.accepting_effect.shape:
        raise PreconditionError("certificate effect does not act on the channel output space")
    p_accept = _clean_probability(float(np.real(np.trace(cert.accepting_effect @ rho))))

    u = np.random.default_rng(seed).random(trials)
    accepts = int(np.count_nonzero(u < p_accept))
    if truth == "null":
        fp, fn = (trials - accepts) / trials, 0.0
    else:
        fp, fn = 0.0, accepts / trials
    return SimulationReport(trials, int(seed), fp, fn, float(cert.p1),
                            math.sqrt(fp * (1 - fp) / trials), truth, accepts)


def brute_force_p1(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                   samples: int | None = None, seed: int = 0,
                   tol: Tolerance = DEFAULT_TOL) -> float:
    """Minimum certificate ``p1`` over Haar-random inputs and the maximally
    entangled input; an upper bound on the optimal single-shot ``p1``.

    Inputs are drawn prefix-stably, so more samples never give a larger value.
    """
    if not can_certify(null_channel, alt_channels, tol):
        raise NoCertificateError("supp(null) lies inside the alternatives' joint support")
    d = null_channel.in_dim
    if samples is None:
        samples = DEFAULT_SAMPLES.get(d, 500)
    best = certificate_p1(null_channel, alt_channels, max_entangled(d), tol)
    rng = np.random.default_rng(seed)
    for v in haar_states(d * d, samples, rng):
        if best <= 0.0:
            break
        psi = PureState(v / np.linalg.norm(v))
        if psi.schmidt_coefficients(d)[-1] <= tol.abs_floor:
            continue
        best = min(best, certificate_p1(null_channel, alt_channels, psi, tol))
    return best


def _psd_support(m: np.ndarray, tol: Tolerance):
    """Support of a PSD matrix from its eigendecomposition."""
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    keep = w > tol.threshold(max(float(w[-1]), 0.0))
    return row_span(v[:, keep].T, tol) if keep.any() else row_span(np.zeros((1, m.shape[0])), tol)


@dataclass(frozen=True)
class TensorPowerCheck:
    n: int
    certifiable: bool
    p1_explicit: tuple
    p1_kraus: tuple
    support_inclusion: tuple
    ok: bool


def tensor_power_check(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                       n: int, tol: Tolerance = DEFAULT_TOL, atol: float = 1e-8) -> TensorPowerCheck:
    """Compare dense ``N``-copy constructions with the Kraus-span route for N = 1..n.

    Checks: explicit ``p1(N)`` equals :func:`certify.p1_parallel`; with one
    alternative ``p1(N) = p1(1)**N``, with several ``p1(N) <= p1(1)**N``; and
    output-support inclusion holds at every ``N`` exactly when the channel
    supports are nested.
    """
    if not 1 <= n <= 3:
        raise PreconditionError("explicit tensor-power checks are limited to n <= 3")
    certifiable = can_certify(null_channel, alt_channels, tol)
    explicit, kraus_route, inclusion = [], [], []
    ok = True
    for k in range(1, n + 1):
        null_k = tensor_power(null_channel, k)
        psi = max_entangled(null_k.in_dim)
        sigma0 = output_state(null_k, psi).matrix
        sigma_alt = sum(output_state(tensor_power(c, k), psi).matrix for c in alt_channels)
        alt_support = _psd_support(sigma_alt, tol)
        included = subspace_contains(alt_support, _psd_support(sigma0, tol))
        p1 = float(np.real(np.trace(projector_onto(alt_support) @ sigma0)))
        explicit.append(p1)
        inclusion.append(included)
        ok &= included == (not certifiable)
        if certifiable:
            kraus_route.append(p1_parallel(null_channel, alt_channels, k, tol=tol))
            ok &= abs(kraus_route[-1] - p1) <= atol
        else:
            kraus_route.append(1.0)
            ok &= abs(p1 - 1.0) <= atol
        target = explicit[0] ** k
        if len(alt_channels) == 1:
            ok &= abs(p1 - target) <= atol
        else:
            ok &= p1 <= target + atol
    return TensorPowerCheck(n, certifiable, tuple(explicit), tuple(kraus_route),
                            tuple(inclusion), bool(ok))


def verify_tensor_power(null_channel: QuantumChannel, alt_channels: Sequence[QuantumChannel],
                        n: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    return tensor_power_check(null_channel, alt_channels, n, tol).ok


def choi_support_crosscheck(c: QuantumChannel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Rank of ``(c (x) id)(|Omega><|Omega|)`` equals the dimension of span{E_i}."""
    rho = output_state(c, max_entangled(c.in_dim)).matrix
    w = np.linalg.eigvalsh(rho)
    rank = int(np.sum(w > tol.threshold(float(w[-1]))))
    return rank == support(c, tol).dim
