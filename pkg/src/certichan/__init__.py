"""Certification of quantum channels and measurements with zero false-negative
probability: support-inclusion decisions, certifying measurements, single-shot
and parallel false-positive probabilities, and brute-force cross-checks."""
from .certify import (CertificationCertificate, QueryBound, build_certificate, can_certify,
                      can_certify_adaptive, certify_against_identity, p1_parallel,
                      parallel_certificate, query_bound, unambiguous_error_from_p1)
from .channels import (DensityMatrix, PureState, QuantumChannel, apply, extend_by_identity,
                       joint_support, max_entangled, mixed_unitary_channel, output_state,
                       support, tensor_power, unitary_channel)
from .errors import (CertichanError, DimensionLimitError, NoCertificateError,
                     NumericalIntegrityError, PreconditionError, ShapeMismatchError,
                     SpecParseError)
from .linalg import (Subspace, Tolerance, kron, nu_distance, projector_onto, span_of,
                     subspace_contains)
from .oracle import (SimulationReport, brute_force_p1, choi_support_crosscheck,
                     simulate_protocol, verify_tensor_power)
from .povm import (Permutation, Povm, SicPovm, can_certify_povm, fixed_points, povm_to_channel,
                   rank_one_certify, sic_certificate, sic_p1_bound, sic_p1_parallel_bound,
                   sic_povm)

__all__ = [
    "CertificationCertificate", "QueryBound", "build_certificate", "can_certify",
    "can_certify_adaptive", "certify_against_identity", "p1_parallel", "parallel_certificate",
    "query_bound", "unambiguous_error_from_p1", "DensityMatrix", "PureState", "QuantumChannel",
    "apply", "extend_by_identity", "joint_support", "max_entangled", "mixed_unitary_channel",
    "output_state", "support", "tensor_power", "unitary_channel", "CertichanError",
    "DimensionLimitError", "NoCertificateError", "NumericalIntegrityError", "PreconditionError",
    "ShapeMismatchError", "SpecParseError", "Subspace", "Tolerance", "kron", "nu_distance",
    "projector_onto", "span_of", "subspace_contains", "SimulationReport", "brute_force_p1",
    "choi_support_crosscheck", "simulate_protocol", "verify_tensor_power", "Permutation",
    "Povm", "SicPovm", "can_certify_povm", "fixed_points", "povm_to_channel",
    "rank_one_certify", "sic_certificate", "sic_p1_bound", "sic_p1_parallel_bound", "sic_povm",
]

__version__ = "0.1.0"
