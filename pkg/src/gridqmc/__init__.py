"""Quantum amplitude estimation of line-loading risk in DC power grids.

Encodes uncertain bus injections as quantum amplitudes, applies the
distribution-factor line-flow mapping as unitaries on a dense statevector
simulator, and extracts mean line loading or overload probability through
iterative amplitude estimation, with classical Monte Carlo and exact
enumeration baselines for comparison.
"""

__version__ = "0.1.0"

from .classical import (
    ExactDistribution,
    classical_mc,
    exact_line_distribution,
    required_samples,
)
from .config import (
    AnalysisSettings,
    PipelineConfig,
    builtin_config_path,
    load_config,
    parse_config,
)
from .errors import (
    ConfigurationError,
    DisconnectedNetworkError,
    EnumerationBoundError,
    EstimationFailureError,
    FactorizationError,
    GridQmcError,
)
from .estimation import EstimationResult, GroverOperator, build_grover, iqae, rescale
from .flowmap import (
    EstimatorVector,
    LineFlowMap,
    PipelineUnitary,
    UnitaryFactorization,
    assemble_pipeline,
    build_estimator_vector,
    build_line_map,
    build_line_pipeline,
    householder_unitary,
    kron_sum,
    orthonormalize_rows,
    unitary_factorize,
)
from .grid import Line, Network, PtdfMatrix, build_ptdf, rate_scale_ptdf
from .injection import (
    EncodedInjection,
    InjectionDistribution,
    encode,
    joint_state,
    state_prep_unitary,
)
from .runner import RunReport, export_histogram, run_analysis, stage_state
from .simulator import (
    StateVector,
    UnitaryMatrix,
    apply,
    probability_of,
    sample_counts,
    zero_state,
)
