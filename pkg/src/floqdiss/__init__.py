"""Floquet occupation distributions and energy dissipation rates for
time-periodically driven quantum systems weakly coupled to a thermal bath."""

__version__ = "0.1.0"

from .bath import BathSpec, SpectralDensity, rate_kernel, thermal_weight
from .exceptions import (
    AccuracyFailure,
    DegenerateChannelWarning,
    DegenerateMonodromyWarning,
    FloqdissError,
    InconsistentPseudoForms,
    NonErgodic,
    NonHermitianInput,
    ParseError,
    ResonantDivergence,
    ShiftOverflow,
    TruncationFailure,
    ValidationError,
    WindowTooSmall,
    ZeroFrequency,
)
from .floquet import (
    FloquetSolution,
    FourierHamiltonian,
    MonodromyOperator,
    floquet_solve,
    propagate_period,
    reconstruct_state,
    shift_representative,
)
from .kinetics import (
    DissipationReport,
    SteadyState,
    channel_balance_defect,
    detailed_balance_defect,
    dissipation_rate,
    steady_state,
)
from .rates import (
    CouplingOperator,
    RateTable,
    first_order_probability,
    fourier_matrix_elements,
    partial_rates,
    total_rates,
)
from .config import RunConfig, build_config, load_config
from .pipeline import PipelineResult, run, run_point, solve_generic

__all__ = [
    "__version__",
    "BathSpec",
    "SpectralDensity",
    "thermal_weight",
    "rate_kernel",
    "FourierHamiltonian",
    "FloquetSolution",
    "MonodromyOperator",
    "floquet_solve",
    "propagate_period",
    "shift_representative",
    "reconstruct_state",
    "CouplingOperator",
    "RateTable",
    "fourier_matrix_elements",
    "partial_rates",
    "total_rates",
    "first_order_probability",
    "SteadyState",
    "DissipationReport",
    "steady_state",
    "dissipation_rate",
    "detailed_balance_defect",
    "channel_balance_defect",
    "RunConfig",
    "build_config",
    "load_config",
    "PipelineResult",
    "run",
    "run_point",
    "solve_generic",
    "FloqdissError",
    "NonHermitianInput",
    "AccuracyFailure",
    "TruncationFailure",
    "ShiftOverflow",
    "ZeroFrequency",
    "ResonantDivergence",
    "WindowTooSmall",
    "NonErgodic",
    "InconsistentPseudoForms",
    "ParseError",
    "ValidationError",
    "DegenerateMonodromyWarning",
    "DegenerateChannelWarning",
]
