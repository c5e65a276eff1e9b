"""Component-wise normalization of objective columns.

The central transform maps each score to the fraction of the population
that is strictly better at that objective, i.e. the empirical CDF of the
column evaluated at the score (with "smaller is better" flipped for
maximize objectives). All baselines used for comparison live here too.

Normalization is always computed on the full population; filtering by
constraints happens later, in selection, so that invalid models still
inform the CDF estimate.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DataError,
    ConfigError,
    Direction,
    NormalizedMatrix,
    Population,
    _frozen,
    ideal_nadir,
)

__all__ = [
    "rank_transform",
    "baseline_normalize",
    "ccdf_transform",
    "normalize",
    "NORMALIZATION_METHODS",
]

NORMALIZATION_METHODS = ("rank", "delta", "minmax", "maxnorm", "ccdf")


def _column_ranks(col: np.ndarray, maximize: bool, tie_policy: str) -> np.ndarray:
    """Count of strictly better entries for each element, divided by N.

    Ties share a rank under the default strict counting; the "average"
    policy spreads tied entries over the mid-rank instead.
    """
    n = col.size
    order = np.sort(col)
    lt = np.searchsorted(order, col, side="left")  # entries strictly smaller
    le = np.searchsorted(order, col, side="right")  # smaller or equal
    if maximize:
        better = n - le  # entries strictly greater
        eq = le - lt
    else:
        better = lt
        eq = le - lt
    if tie_policy == "strict":
        counts = better.astype(float)
    elif tie_policy == "average":
        counts = better + (eq - 1) / 2.0
    else:
        raise ConfigError(f"tie_policy must be 'strict' or 'average', got {tie_policy!r}")
    return counts / n


def rank_transform(population: Population, tie_policy: str = "strict") -> NormalizedMatrix:
    """Empirical-CDF (rank) transform of every objective column.

    For each model and objective, the value is the number of models
    strictly better at that objective divided by N. The best model(s) per
    column map to 0 and every value lies in [0, (N-1)/N]. The transform
    depends only on orderings, so any strictly increasing rescaling of a
    column leaves the output bit-identical.
    """
    values = np.empty_like(population.scores)
    for j, spec in enumerate(population.objectives):
        values[:, j] = _column_ranks(
            population.scores[:, j],
            spec.direction is Direction.MAXIMIZE,
            tie_policy,
        )
    return NormalizedMatrix(values=_frozen(values), method="rank", source=population)


def ccdf_transform(population: Population) -> NormalizedMatrix:
    """Complementary rank transform: 1 - rank values, higher is better.

    Intended for reporting ("top-x%" views); unlike reference-based
    rescalings it needs no reference model and produces no outliers.
    """
    ranks = rank_transform(population)
    return NormalizedMatrix(
        values=_frozen(1.0 - ranks.values), method="ccdf", source=population
    )


def baseline_normalize(
    population: Population,
    method: str,
    ideal: np.ndarray | None = None,
    nadir: np.ndarray | None = None,
) -> NormalizedMatrix:
    """Classic reference-based rescalings: "delta", "minmax" or "maxnorm".

    delta    relative difference to the ideal, (y - ideal) / ideal for a
             minimize objective and (ideal - y) / ideal for maximize;
             errors out when an ideal component is 0 (the division would
             arbitrarily magnify that objective).
    minmax   (y - ideal) / (nadir - ideal); lies in [0, 1] with 0 at the
             ideal for both directions. A constant column yields zeros and
             a warning flag on the result.
    maxnorm  max/y for maximize columns, y/min for minimize columns
             (minimization-adapted: best value 1, worse values larger);
             requires strictly positive scores.

    ideal and nadir default to the population extrema; pass explicit
    vectors to override (e.g. a known reference point).
    """
    pop_ideal, pop_nadir = ideal_nadir(population)
    ideal = pop_ideal if ideal is None else np.asarray(ideal, dtype=float)
    nadir = pop_nadir if nadir is None else np.asarray(nadir, dtype=float)
    if ideal.shape != (population.n_objectives,) or nadir.shape != (population.n_objectives,):
        raise ConfigError("ideal/nadir overrides must have one entry per objective")
    scores = population.scores
    flags: list[str] = []

    if method == "delta":
        zero = np.flatnonzero(ideal == 0.0)
        if zero.size:
            name = population.objectives[int(zero[0])].name
            raise DataError(
                f"delta normalization undefined for objective {name!r}: ideal "
                f"value is 0, the relative difference would divide by zero"
            )
        values = (scores - ideal) / ideal
        for j, spec in enumerate(population.objectives):
            if spec.direction is Direction.MAXIMIZE:
                values[:, j] = (ideal[j] - scores[:, j]) / ideal[j]
    elif method == "minmax":
        span = nadir - ideal
        values = np.zeros_like(scores)
        for j, spec in enumerate(population.objectives):
            if span[j] == 0.0:
                flags.append(
                    f"objective {spec.name!r} is constant; minmax values set to 0"
                )
                continue
            values[:, j] = (scores[:, j] - ideal[j]) / span[j]
    elif method == "maxnorm":
        if np.any(scores <= 0.0):
            i, j = map(int, np.argwhere(scores <= 0.0)[0])
            raise DataError(
                f"maxnorm requires strictly positive scores; model "
                f"{population.model_ids[i]!r} has {scores[i, j]!r} on objective "
                f"{population.objectives[j].name!r}"
            )
        values = np.empty_like(scores)
        for j, spec in enumerate(population.objectives):
            col = scores[:, j]
            if spec.direction is Direction.MAXIMIZE:
                values[:, j] = col.max() / col
            else:
                values[:, j] = col / col.min()
    else:
        raise ConfigError(
            f"unknown baseline {method!r}; expected one of delta, minmax, maxnorm"
        )
    return NormalizedMatrix(
        values=_frozen(values), method=method, source=population, warnings=tuple(flags)
    )


def normalize(population: Population, method: str, **kwargs) -> NormalizedMatrix:
    """Dispatch over every supported normalization method."""
    if method == "rank":
        return rank_transform(population, **kwargs)
    if method == "ccdf":
        return ccdf_transform(population)
    if method in ("delta", "minmax", "maxnorm"):
        return baseline_normalize(population, method, **kwargs)
    raise ConfigError(
        f"unknown normalization method {method!r}; expected one of {NORMALIZATION_METHODS}"
    )
