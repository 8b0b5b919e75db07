"""Robust design optimisation: moments under input noise, annealed over designs."""
from ._accel import USE_NUMBA, backend_name
from .archive import InsertOutcome, ParetoArchive, dominates, nondominated_filter
from .errors import (
    ConditioningError,
    ConfigError,
    InvalidInputError,
    RobustDesignError,
    UnderdeterminedError,
)
from .model import (
    Bounds,
    BumpSum,
    DesignPoint,
    EvaluatedDesign,
    GaussianBump,
    MomentEstimate,
    RobustProblem,
    TwoPeakFunction,
    UncertaintySpec,
    bump_mean_oracle,
    bump_sum_mean_oracle,
    mc_moments_oracle,
    mc_std_oracle,
    two_peak_eval,
)
from .mosa import (
    AnnealingSchedule,
    ObjectiveNormalizer,
    RunConfig,
    RunResult,
    accept,
    energy,
    evaluate_design,
    neighbor,
    run,
)
from .sampling import SampleBatch, child_rng, inverse_normal_cdf, lhs_unit, sample_around
from .uq import (
    PceModel,
    empirical_moments,
    hermite_eval,
    pce_fit,
    pce_from_coefficients,
    pce_moments,
    total_degree_indices,
)

__version__ = "0.1.0"
