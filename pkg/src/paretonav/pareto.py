"""Dominance relations and Pareto-front extraction on raw scores."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import ConfigError, Direction, ObjectiveSpec, Population

__all__ = ["dominates", "pareto_front", "is_pareto_optimal"]


def _as_minimization(matrix: np.ndarray, specs: Sequence[ObjectiveSpec]) -> np.ndarray:
    """Flip maximize columns so smaller is uniformly better. Internal only;
    stored scores are never negated."""
    adjusted = np.array(matrix, dtype=float)
    for j, spec in enumerate(specs):
        if spec.direction is Direction.MAXIMIZE:
            adjusted[:, j] = -adjusted[:, j]
    return adjusted


def dominates(a, b, specs: Sequence[ObjectiveSpec]) -> bool:
    """True when a is no worse than b everywhere and strictly better somewhere.

    Direction-aware, irreflexive and asymmetric. Both vectors must match
    the spec list in length.
    """
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size != len(specs) or b.size != len(specs):
        raise ConfigError(
            f"vector lengths {a.size}/{b.size} do not match {len(specs)} objectives"
        )
    pair = _as_minimization(np.stack([a, b]), specs)
    return bool(np.all(pair[0] <= pair[1]) and np.any(pair[0] < pair[1]))


def pareto_front(population: Population) -> set[int]:
    """Indices of models not dominated by any other model.

    Plain pairwise scan (populations here are thousands of models at
    most); never empty for a non-empty population. Exact duplicates of a
    front point are all included, since neither strictly dominates the
    other.
    """
    adjusted = _as_minimization(population.scores, population.objectives)
    n = adjusted.shape[0]
    front: set[int] = set()
    for i in range(n):
        le = np.all(adjusted <= adjusted[i], axis=1)
        lt = np.any(adjusted < adjusted[i], axis=1)
        if not np.any(le & lt):
            front.add(i)
    return front


def is_pareto_optimal(population: Population, index: int) -> bool:
    """Single-row dominance check against the whole population."""
    adjusted = _as_minimization(population.scores, population.objectives)
    row = adjusted[index]
    le = np.all(adjusted <= row, axis=1)
    lt = np.any(adjusted < row, axis=1)
    return not bool(np.any(le & lt))
