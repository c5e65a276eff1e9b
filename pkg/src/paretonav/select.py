"""Selection, constrained selection, preference sweeps and ranking tables.

Constraints filter on raw objective values; preferences weigh normalized
values. Normalization always happens on the full population before any
filtering, so constrained and unconstrained runs share the identical
normalized matrix.

Ties are broken deterministically by (criterion value, p=8 criterion on
the rank-transformed vector with the same weights, row index), so
repeated runs on identical inputs always agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    ConfigError,
    ConstraintRule,
    CriterionConfig,
    DataError,
    Direction,
    InfeasibleError,
    NormalizedMatrix,
    Population,
    SelectionResult,
)
from .criterion import PiecewiseRule, piecewise_criterion, scaled_pnorm_rows
from .normalize import baseline_normalize, normalize, rank_transform
from .pareto import is_pareto_optimal

__all__ = [
    "AlphaMapping",
    "SweepEntry",
    "SweepResult",
    "RankCriterion",
    "RankTable",
    "select_best",
    "sweep_alpha",
    "rank_methods",
    "default_rank_criteria",
    "feasible_indices",
]


@dataclass(frozen=True)
class AlphaMapping:
    """Maps a scalar preference alpha in [0, 1] to a weight vector.

    The default template puts alpha on the focus objective and spreads
    the remainder evenly: [alpha, (1-alpha)/(K-1), ...]. A custom
    template callable (alpha, k) -> weights overrides it.
    """

    focus_objective: int = 0
    template: Callable[[float, int], np.ndarray] | None = None

    def weights(self, alpha: float, k: int) -> np.ndarray:
        if not 0.0 <= alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
        if self.template is not None:
            w = np.asarray(self.template(alpha, k), dtype=float)
            if w.shape != (k,):
                raise ConfigError("alpha template returned a wrong-length vector")
            return w
        if not 0 <= self.focus_objective < k:
            raise ConfigError(
                f"focus objective {self.focus_objective} out of range for K={k}"
            )
        if k == 1:
            return np.array([1.0])
        w = np.full(k, (1.0 - alpha) / (k - 1))
        w[self.focus_objective] = alpha
        return w


def feasible_indices(
    population: Population, constraints: Sequence[ConstraintRule]
) -> np.ndarray:
    """Indices of models satisfying every raw-value constraint, in row order."""
    mask = np.ones(population.n_models, dtype=bool)
    for rule in constraints:
        j = population.objective_index(rule.objective_name)
        col = population.scores[:, j]
        mask &= np.array([rule.satisfied(float(v)) for v in col])
    return np.flatnonzero(mask)


def _criterion_values(
    normalized: NormalizedMatrix,
    population: Population,
    config: CriterionConfig | Sequence[PiecewiseRule],
) -> np.ndarray:
    if isinstance(config, CriterionConfig):
        return scaled_pnorm_rows(normalized.values, config)
    rules = list(config)
    if not rules:
        raise ConfigError("piecewise criterion needs at least one rule")
    names = population.objective_names
    return np.array(
        [
            piecewise_criterion(normalized.values[i], population.scores[i], rules, names)
            for i in range(population.n_models)
        ]
    )


def _tiebreak_weights(config: CriterionConfig | Sequence[PiecewiseRule], k: int):
    if isinstance(config, CriterionConfig):
        return config.weights
    return np.full(k, 1.0 / k)


def select_best(
    population: Population,
    method: str = "rank",
    config: CriterionConfig | Sequence[PiecewiseRule] | None = None,
    constraints: Sequence[ConstraintRule] | None = None,
    normalized: NormalizedMatrix | None = None,
) -> SelectionResult:
    """Feasible model minimizing the criterion over its normalized vector.

    The normalized matrix is computed on the full population before
    constraint filtering (pass a precomputed one to skip recomputation; it
    must come from the same population and method). Raises
    InfeasibleError when the constraints exclude every model.
    """
    if config is None:
        k = population.n_objectives
        config = CriterionConfig(p=math.inf, weights=np.full(k, 1.0 / k))
    if normalized is None:
        normalized = normalize(population, method)
    elif normalized.source is not population or normalized.method != method:
        raise ConfigError("precomputed matrix does not match population and method")

    constraints = tuple(constraints or ())
    feasible = feasible_indices(population, constraints)
    if feasible.size == 0:
        counts = []
        for rule in constraints:
            j = population.objective_index(rule.objective_name)
            kept = sum(rule.satisfied(float(v)) for v in population.scores[:, j])
            counts.append(f"{rule} keeps {kept}/{population.n_models}")
        raise InfeasibleError(
            "no feasible model: " + "; ".join(counts), constraints=constraints
        )

    values = _criterion_values(normalized, population, config)
    sub = values[feasible]
    best = sub.min()
    tied = feasible[sub == best]
    tie_broken = tied.size > 1
    if tie_broken:
        # appendix-style untie: p=8 on the rank transform, same weights
        ranks = rank_transform(population) if method != "rank" else normalized
        cfg8 = CriterionConfig(
            p=8.0, weights=_tiebreak_weights(config, population.n_objectives)
        )
        secondary = scaled_pnorm_rows(ranks.values[tied], cfg8)
        tied = tied[secondary == secondary.min()]
    index = int(tied[0])
    return SelectionResult(
        model_index=index,
        model_id=population.model_ids[index],
        criterion_value=float(values[index]),
        raw_vector=population.scores[index].copy(),
        normalized_vector=normalized.values[index].copy(),
        is_pareto_optimal=is_pareto_optimal(population, index),
        tie_broken=bool(tie_broken),
    )


@dataclass(frozen=True)
class SweepEntry:
    """Consecutive run of grid points that selected the same model."""

    alpha_lo: float
    alpha_hi: float
    alpha_mid: float
    model_index: int
    model_id: str
    n_grid_points: int
    selection: SelectionResult


@dataclass(frozen=True)
class SweepResult:
    """Partition of [0, 1] into intervals by selected model."""

    entries: tuple[SweepEntry, ...]
    grid_size: int
    p: float
    method: str
    focus_objective: int


def sweep_alpha(
    population: Population,
    method: str = "rank",
    p: float = math.inf,
    grid_size: int = 50,
    mapping: AlphaMapping | None = None,
    constraints: Sequence[ConstraintRule] | None = None,
) -> SweepResult:
    """Run select_best over an evenly-spaced alpha grid and group runs.

    Consecutive grid points selecting the same model merge into one
    interval; boundaries fall halfway between adjacent grid points so the
    intervals partition [0, 1]. The representative selection is the grid
    point closest to each interval midpoint.
    """
    if grid_size < 2:
        raise ConfigError(f"grid_size must be at least 2, got {grid_size}")
    mapping = mapping or AlphaMapping()
    k = population.n_objectives
    normalized = normalize(population, method)
    grid = np.linspace(0.0, 1.0, grid_size)
    selections = [
        select_best(
            population,
            method,
            CriterionConfig(p=p, weights=mapping.weights(float(a), k)),
            constraints,
            normalized=normalized,
        )
        for a in grid
    ]

    groups: list[tuple[int, int]] = []  # [start, end] grid index spans
    start = 0
    for i in range(1, grid_size):
        if selections[i].model_index != selections[start].model_index:
            groups.append((start, i - 1))
            start = i
    groups.append((start, grid_size - 1))

    entries = []
    for g, (lo_i, hi_i) in enumerate(groups):
        lo = 0.0 if g == 0 else float((grid[lo_i] + grid[lo_i - 1]) / 2.0)
        hi = 1.0 if g == len(groups) - 1 else float((grid[hi_i] + grid[hi_i + 1]) / 2.0)
        mid = (lo + hi) / 2.0
        rep_i = min(range(lo_i, hi_i + 1), key=lambda i: (abs(grid[i] - mid), i))
        entries.append(
            SweepEntry(
                alpha_lo=lo,
                alpha_hi=hi,
                alpha_mid=mid,
                model_index=selections[rep_i].model_index,
                model_id=selections[rep_i].model_id,
                n_grid_points=hi_i - lo_i + 1,
                selection=selections[rep_i],
            )
        )
    return SweepResult(
        entries=tuple(entries),
        grid_size=grid_size,
        p=float(p),
        method=method,
        focus_objective=mapping.focus_objective,
    )


@dataclass(frozen=True)
class RankCriterion:
    """One ranking-table column.

    kind "pnorm" ranks by scaled_pnorm on a normalization method;
    "delta_mean" ranks by the arithmetic mean of delta-normalized
    objectives (the aggregate convention common in multi-task evaluation);
    "raw" ranks by a single objective in its own units.
    """

    label: str
    kind: str = "pnorm"
    method: str = "rank"
    config: CriterionConfig | None = None
    objective: str | None = None


@dataclass(frozen=True)
class RankTable:
    """Integer ranks (1 = best) of every model under several criteria."""

    model_ids: tuple[str, ...]
    labels: tuple[str, ...]
    ranks: np.ndarray  # shape (N, n_criteria), each column a permutation of 1..N


def default_rank_criteria(
    population: Population,
    ps: Sequence[float] = (1, 2, 4, 8, math.inf),
) -> list[RankCriterion]:
    """Rank-normalized p-norm columns plus delta-average and raw columns."""
    k = population.n_objectives
    equal = np.full(k, 1.0 / k)
    cols = [
        RankCriterion(
            label="rank-p" + ("inf" if math.isinf(p) else f"{p:g}"),
            kind="pnorm",
            method="rank",
            config=CriterionConfig(p=float(p), weights=equal),
        )
        for p in ps
    ]
    cols.append(RankCriterion(label="delta-avg", kind="delta_mean"))
    for spec in population.objectives:
        cols.append(
            RankCriterion(label=f"raw:{spec.name}", kind="raw", objective=spec.name)
        )
    return cols


def rank_methods(
    population: Population, criteria: Sequence[RankCriterion]
) -> RankTable:
    """Rank all models under each criterion column, 1 = best.

    Per column, models sort ascending by criterion value; ties break by
    the equal-weight p=8 value on the rank transform, then by row index,
    so every column is a permutation of 1..N.
    """
    if not criteria:
        raise ConfigError("rank_methods needs at least one criterion")
    n = population.n_models
    k = population.n_objectives
    ranks_nm = rank_transform(population)
    untie = scaled_pnorm_rows(
        ranks_nm.values, CriterionConfig(p=8.0, weights=np.full(k, 1.0 / k))
    )
    cache: dict[str, NormalizedMatrix] = {"rank": ranks_nm}

    table = np.empty((n, len(criteria)), dtype=int)
    for c, crit in enumerate(criteria):
        if crit.kind not in ("pnorm", "delta_mean", "raw"):
            raise ConfigError(f"unknown rank criterion kind {crit.kind!r}")
        try:
            if crit.kind == "pnorm":
                cfg = crit.config
                if cfg is None:
                    cfg = CriterionConfig(p=math.inf, weights=np.full(k, 1.0 / k))
                if crit.method not in cache:
                    cache[crit.method] = normalize(population, crit.method)
                values = scaled_pnorm_rows(cache[crit.method].values, cfg)
            elif crit.kind == "delta_mean":
                values = baseline_normalize(population, "delta").values.mean(axis=1)
            else:
                if crit.objective is None:
                    raise ConfigError("raw criterion needs an objective name")
                j = population.objective_index(crit.objective)
                col = population.scores[:, j]
                sign = -1.0 if population.objectives[j].direction is Direction.MAXIMIZE else 1.0
                values = sign * col
        except Exception as err:
            raise DataError(
                f"rank table column {crit.label!r} failed: {err}"
            ) from err
        order = sorted(range(n), key=lambda i: (values[i], untie[i], i))
        for rank_pos, i in enumerate(order, start=1):
            table[i, c] = rank_pos
    return RankTable(
        model_ids=population.model_ids,
        labels=tuple(c.label for c in criteria),
        ranks=table,
    )
