"""Capacities of classical-quantum channels with certified brackets, plus
machine-checkable certificates for the super-additivity of capacity under
derived-channel decompositions."""

from .backend import active_backend
from .channels import (
    CqChannel,
    DerivedCollection,
    MultipartiteChannel,
    complement_alphabet,
    derive_channel,
    point_mass_collection,
    random_channel,
    random_collection,
    slice_channel,
    tensor_channel,
    uniform_collection,
)
from .quantum import (
    DensityMatrix,
    ProbDist,
    Spectrum,
    cq_state,
    holevo_information,
    maximally_mixed,
    mix,
    pure_state,
    quantum_relative_entropy,
    shannon_entropy,
    spectral_decomposition,
    validate_state,
    von_neumann_entropy,
)
from .solver import CapacityResult, capacity, capacity_upper_bound
from .superadd import (
    AxisMinEstimate,
    CcqState,
    ChainRuleResult,
    MinDerivedEstimate,
    ProofAssembly,
    SuperAdditivityCertificate,
    build_proof_assembly,
    chain_rule_check,
    estimate_min_derived_capacity,
    group_first_axis,
    random_ccq_state,
    verify_superadditivity,
)

__version__ = "0.1.0"

__all__ = [
    "AxisMinEstimate",
    "CapacityResult",
    "CcqState",
    "ChainRuleResult",
    "CqChannel",
    "DensityMatrix",
    "DerivedCollection",
    "MinDerivedEstimate",
    "MultipartiteChannel",
    "ProbDist",
    "ProofAssembly",
    "Spectrum",
    "SuperAdditivityCertificate",
    "active_backend",
    "build_proof_assembly",
    "capacity",
    "capacity_upper_bound",
    "chain_rule_check",
    "complement_alphabet",
    "cq_state",
    "derive_channel",
    "estimate_min_derived_capacity",
    "group_first_axis",
    "holevo_information",
    "maximally_mixed",
    "mix",
    "point_mass_collection",
    "pure_state",
    "quantum_relative_entropy",
    "random_ccq_state",
    "random_channel",
    "random_collection",
    "shannon_entropy",
    "slice_channel",
    "spectral_decomposition",
    "tensor_channel",
    "uniform_collection",
    "validate_state",
    "verify_superadditivity",
    "von_neumann_entropy",
]
