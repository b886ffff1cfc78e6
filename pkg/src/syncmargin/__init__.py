"""Mean-square synchronization margins for networks with stochastic links.

Scalar nonlinear agents coupled over an undirected graph whose link
weights fluctuate: this package computes the sufficient stability margin,
the gain that maximizes it, and validates both against Monte Carlo
ensembles of the coupled dynamics.
"""

from .graph import (
    DEFAULT_RETRY_BUDGET,
    Edge,
    GraphGenerationError,
    LaplacianSplit,
    NetworkGraph,
    complement,
    designate_uncertain,
    erdos_renyi,
    is_connected,
    laplacian_split,
    max_cod,
    read_graph,
    ring_lattice,
    watts_strogatz,
    write_graph,
)
from .spectral import (
    DisconnectedGraphError,
    EigenConvergenceError,
    OrthonormalComplement,
    SpectralSummary,
    orthonormal_complement,
    ring_lattice_spectrum,
    spectral_summary,
    symmetric_eigen,
)
from .margin import (
    DynamicsParams,
    MarginReport,
    alpha0_sq,
    check_mss,
    check_mss_all_eigs,
    critical_eigenvalues,
    existence_p_condition,
    lambda_sup,
    optimal_gain,
    riccati_oracle,
    saddle_gain,
)
from .sim import (
    EnsembleResult,
    NonlinearityKind,
    SimConfig,
    mse_pairwise,
    run_ensemble,
    step,
)
from .experiments import (
    ARTIFACT_VERSION,
    EXPERIMENT_NAMES,
    ExperimentSpec,
    GridRange,
    SweepTable,
    ValidationCase,
    crossover_interval,
    default_spec,
    default_validation_cases,
    load_spec,
    run_experiment,
    sweep_er_sw,
    sweep_nn,
    sweep_tunnel,
    validate_mc,
    write_manifest,
    write_table,
)

__version__ = ARTIFACT_VERSION

__all__ = [
    "ARTIFACT_VERSION",
    "DEFAULT_RETRY_BUDGET",
    "DisconnectedGraphError",
    "DynamicsParams",
    "EXPERIMENT_NAMES",
    "Edge",
    "EigenConvergenceError",
    "EnsembleResult",
    "ExperimentSpec",
    "GraphGenerationError",
    "GridRange",
    "LaplacianSplit",
    "MarginReport",
    "NetworkGraph",
    "NonlinearityKind",
    "OrthonormalComplement",
    "SimConfig",
    "SpectralSummary",
    "SweepTable",
    "ValidationCase",
    "alpha0_sq",
    "check_mss",
    "check_mss_all_eigs",
    "complement",
    "critical_eigenvalues",
    "crossover_interval",
    "default_spec",
    "default_validation_cases",
    "designate_uncertain",
    "erdos_renyi",
    "existence_p_condition",
    "is_connected",
    "lambda_sup",
    "laplacian_split",
    "load_spec",
    "max_cod",
    "mse_pairwise",
    "optimal_gain",
    "orthonormal_complement",
    "read_graph",
    "riccati_oracle",
    "ring_lattice",
    "ring_lattice_spectrum",
    "run_ensemble",
    "run_experiment",
    "saddle_gain",
    "spectral_summary",
    "step",
    "sweep_er_sw",
    "sweep_nn",
    "sweep_tunnel",
    "symmetric_eigen",
    "validate_mc",
    "watts_strogatz",
    "write_graph",
    "write_manifest",
    "write_table",
]
