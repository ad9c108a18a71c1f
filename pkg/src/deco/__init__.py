"""Exact reduced dynamics, entanglement, and coherence of two dephasing
qubits sharing a bosonic bath, with a truncated-Fock brute-force oracle."""

from .core import (
    Amplitudes,
    NormalizationError,
    ValidationError,
    ValidationReport,
    concurrence,
    concurrence_eigvals,
    l1_coherence,
    pure_state_density,
    require_valid,
    validate,
)
from .dynamics import (
    CoherenceFunctions,
    EvolutionMode,
    SeriesRow,
    assemble_dressings,
    closed_form_concurrence,
    coherence_functions,
    correlation_ratio,
    density_matrix,
    matrix_from_dressings,
    partition_zprime,
    series,
    uncorrelated_dressings,
)
from .kernels import (
    DEFAULT_QUADRATURE,
    KernelWeight,
    ModelParams,
    QuadratureConfig,
    QuadratureError,
    decay_kernel,
    gamma,
    gamma0,
    gamma0_of_phi,
    gamma_saturation,
    lambda_weight,
    phase_kernel,
)
from .oracle import (
    DiscreteBath,
    DiscreteMode,
    DiscreteSums,
    TruncationError,
    compare,
    discrete_density_matrix,
    discrete_sums,
    fock_evolution,
    fock_oracle,
    ising_phase_sum,
    truncation_indicator,
)

__version__ = "0.1.0"

__all__ = [
    "Amplitudes",
    "CoherenceFunctions",
    "DEFAULT_QUADRATURE",
    "DiscreteBath",
    "DiscreteMode",
    "DiscreteSums",
    "EvolutionMode",
    "KernelWeight",
    "ModelParams",
    "NormalizationError",
    "QuadratureConfig",
    "QuadratureError",
    "SeriesRow",
    "TruncationError",
    "ValidationError",
    "ValidationReport",
    "assemble_dressings",
    "closed_form_concurrence",
    "coherence_functions",
    "compare",
    "concurrence",
    "concurrence_eigvals",
    "correlation_ratio",
    "decay_kernel",
    "density_matrix",
    "discrete_density_matrix",
    "discrete_sums",
    "fock_evolution",
    "fock_oracle",
    "gamma",
    "gamma0",
    "gamma0_of_phi",
    "gamma_saturation",
    "ising_phase_sum",
    "l1_coherence",
    "lambda_weight",
    "matrix_from_dressings",
    "partition_zprime",
    "phase_kernel",
    "pure_state_density",
    "require_valid",
    "series",
    "truncation_indicator",
    "uncorrelated_dressings",
    "validate",
]
