"""Rank-based normalization and weighted p-norm navigation of model
populations with many evaluation objectives."""

from .core import (
    ConfigError,
    ConstraintRule,
    CriterionConfig,
    DataError,
    Direction,
    InfeasibleError,
    NormalizedMatrix,
    ObjectiveSpec,
    Population,
    SelectionResult,
    build_population,
    ideal_nadir,
)
from .criterion import (
    PiecewiseRule,
    ahp_scores,
    mew_scores,
    piecewise_criterion,
    principal_eigenvector,
    saw_scores,
    scaled_pnorm,
    weighted_pnorm,
)
from .normalize import baseline_normalize, ccdf_transform, normalize, rank_transform
from .pareto import dominates, pareto_front
from .select import (
    AlphaMapping,
    RankCriterion,
    RankTable,
    SweepEntry,
    SweepResult,
    default_rank_criteria,
    rank_methods,
    select_best,
    sweep_alpha,
)
from .synthetic import synthetic_front

__version__ = "0.1.0"
