"""Correlation dynamics of two qubits in independent, non-identical noisy
environments: channels, correlation measures, scenario sweeps and a CLI."""

__version__ = "0.1.0"

from .channels import Channel, evolve, isometry_for, kraus_for, reduced
from .correlations import (
    CorrelationResult,
    MeasurementBasis,
    OptimizerSettings,
    classical_one_sided,
    classical_two_sided,
    concurrence,
    discord_one_sided,
    full_result,
    joint_outcome_distribution,
    measured_conditional_entropy,
    mutual_information,
    quantum_two_sided,
)
from .errors import ConfigurationError, NumericDomainError
from .qmat import (
    PARTY_LABELS,
    hermitian_eigenvalues,
    partial_trace,
    shannon_entropy,
    tensor,
    validate_density_matrix,
    von_neumann_entropy,
)
from .scenarios import (
    Bipartition,
    CorrelationRecord,
    Event,
    InitialStateParams,
    OracleComparison,
    ScenarioConfig,
    ScenarioKind,
    analytic_reduced,
    audit_analytic,
    compare_with_analytic,
    detect_events,
    initial_state,
    sweep,
    uniform_grid,
)

__all__ = [
    "Bipartition",
    "Channel",
    "ConfigurationError",
    "CorrelationRecord",
    "CorrelationResult",
    "Event",
    "InitialStateParams",
    "MeasurementBasis",
    "NumericDomainError",
    "OptimizerSettings",
    "OracleComparison",
    "PARTY_LABELS",
    "ScenarioConfig",
    "ScenarioKind",
    "analytic_reduced",
    "audit_analytic",
    "classical_one_sided",
    "classical_two_sided",
    "compare_with_analytic",
    "concurrence",
    "detect_events",
    "discord_one_sided",
    "evolve",
    "full_result",
    "hermitian_eigenvalues",
    "initial_state",
    "isometry_for",
    "joint_outcome_distribution",
    "kraus_for",
    "measured_conditional_entropy",
    "mutual_information",
    "partial_trace",
    "quantum_two_sided",
    "reduced",
    "shannon_entropy",
    "sweep",
    "tensor",
    "uniform_grid",
    "validate_density_matrix",
    "von_neumann_entropy",
]
