"""Domain types: objective specs, score populations, criterion configuration.

A population is an immutable snapshot of N models scored on K objectives.
Raw scores are stored exactly as ingested; per-objective optimization
directions are applied inside normalizers and comparators, never by
negating stored values, so exported reports always show original units.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "ConfigError",
    "DataError",
    "InfeasibleError",
    "Direction",
    "ObjectiveSpec",
    "Population",
    "NormalizedMatrix",
    "CriterionConfig",
    "ConstraintRule",
    "SelectionResult",
    "build_population",
    "ideal_nadir",
]

WEIGHT_SUM_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid configuration or usage. CLI exit code 1."""


class DataError(ValueError):
    """Malformed or inconsistent input data. CLI exit code 2."""


class InfeasibleError(RuntimeError):
    """The constraint set excludes every model. CLI exit code 3."""

    def __init__(self, message: str, constraints: Sequence["ConstraintRule"] = ()):
        super().__init__(message)
        self.constraints = tuple(constraints)


class Direction(str, Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ObjectiveSpec:
    """One evaluation objective: a name plus the direction that means 'better'."""

    name: str
    direction: Direction = Direction.MINIMIZE
    display_unit: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name.strip():
            raise ConfigError("objective name must be a non-empty string")
        object.__setattr__(self, "direction", Direction(self.direction))


@dataclass(frozen=True, eq=False)
class Population:
    """Immutable snapshot of N models x K raw objective scores.

    Safe for unrestricted concurrent reads; construct via build_population.
    """

    model_ids: tuple[str, ...]
    objectives: tuple[ObjectiveSpec, ...]
    scores: np.ndarray  # shape (N, K), finite, read-only

    @property
    def n_models(self) -> int:
        return self.scores.shape[0]

    @property
    def n_objectives(self) -> int:
        return self.scores.shape[1]

    @property
    def objective_names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.objectives)

    def objective_index(self, name: str) -> int:
        for i, spec in enumerate(self.objectives):
            if spec.name == name:
                return i
        raise ConfigError(f"unknown objective {name!r}; have {list(self.objective_names)}")


def build_population(
    model_ids: Sequence[str],
    specs: Sequence[ObjectiveSpec],
    scores,
) -> Population:
    """Validate and assemble a Population.

    Raises DataError on dimension mismatches, non-finite scores (reporting
    the offending row and column) and duplicate model ids; ConfigError on
    duplicate objective names. Inputs are copied, never mutated.
    """
    ids = tuple(str(m) for m in model_ids)
    specs = tuple(specs)
    if len(ids) < 1:
        raise DataError("population needs at least one model")
    if len(specs) < 1:
        raise ConfigError("population needs at least one objective")
    seen: set[str] = set()
    for m in ids:
        if m in seen:
            raise DataError(f"duplicate model id {m!r}")
        seen.add(m)
    seen = set()
    for spec in specs:
        if spec.name in seen:
            raise ConfigError(f"duplicate objective name {spec.name!r}")
        seen.add(spec.name)

    k = len(specs)
    if isinstance(scores, np.ndarray):
        try:
            matrix = np.array(scores, dtype=float)
        except (TypeError, ValueError) as err:
            raise DataError(f"scores are not a numeric matrix: {err}") from None
        if matrix.ndim != 2:
            raise DataError(f"scores must be 2-dimensional, got shape {matrix.shape}")
    else:
        rows = [list(row) for row in scores]
        for i, row in enumerate(rows):
            if len(row) != k:
                raise DataError(
                    f"dimension mismatch at row {i + 1}: expected {k} scores, got {len(row)}"
                )
        matrix = np.array(rows, dtype=float) if rows else np.empty((0, k))
    if matrix.shape[0] != len(ids):
        raise DataError(
            f"{len(ids)} model ids but {matrix.shape[0]} score rows"
        )
    if matrix.shape[1] != k:
        raise DataError(
            f"{k} objectives declared but score rows have {matrix.shape[1]} columns"
        )
    bad = ~np.isfinite(matrix)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise DataError(
            f"non-finite score {matrix[i, j]!r} for model {ids[i]!r}, "
            f"objective {specs[j].name!r} (row {i + 1}, column {j + 1})"
        )
    return Population(model_ids=ids, objectives=specs, scores=_frozen(matrix))


def ideal_nadir(population: Population) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise best (ideal) and worst (nadir) values over the population.

    Direction-aware: for a maximize objective the ideal is the column maximum
    and the nadir the minimum.
    """
    lo = population.scores.min(axis=0)
    hi = population.scores.max(axis=0)
    maximize = np.array(
        [spec.direction is Direction.MAXIMIZE for spec in population.objectives]
    )
    ideal = np.where(maximize, hi, lo)
    nadir = np.where(maximize, lo, hi)
    return _frozen(ideal), _frozen(nadir)


@dataclass(frozen=True, eq=False)
class NormalizedMatrix:
    """Per-objective normalized values aligned with a source population."""

    values: np.ndarray  # shape (N, K), read-only
    method: str
    source: Population
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class CriterionConfig:
    """Exponent p (>= 1, math.inf allowed) and a weight vector over objectives.

    Weights must be non-negative; a vector whose sum drifts from 1 beyond
    1e-9 is renormalized with a warning (sweeps and UIs produce rounding
    drift, hard failure would be hostile).
    """

    p: float
    weights: np.ndarray

    def __post_init__(self) -> None:
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise ConfigError(f"criterion exponent p must be >= 1 (got {self.p!r})")
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.size == 0:
            raise ConfigError("weight vector is empty")
        if not np.all(np.isfinite(w)):
            raise ConfigError("weights must be finite")
        if np.any(w < 0):
            raise ConfigError(f"weights must be non-negative, got {w.tolist()}")
        total = float(w.sum())
        if total <= 0:
            raise ConfigError("weights must not be all zero")
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            warnings.warn(
                f"weights sum to {total!r}; renormalizing to 1", stacklevel=2
            )
            w = w / total
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.p)

    @property
    def k(self) -> int:
        return int(self.weights.size)


_COMPARATORS = {
    "<=": lambda v, t: v <= t,
    ">=": lambda v, t: v >= t,
    "<": lambda v, t: v < t,
    ">": lambda v, t: v > t,
}

_CONSTRAINT_RE = re.compile(r"^\s*([^<>=]+?)\s*(<=|>=|<|>)\s*([^<>=\s]+)\s*$")


@dataclass(frozen=True)
class ConstraintRule:
    """A raw-unit bound on one objective, e.g. co2 <= 0.02."""

    objective_name: str
    comparator: str
    threshold: float

    def __post_init__(self) -> None:
        if self.comparator not in _COMPARATORS:
            raise ConfigError(
                f"comparator must be one of {sorted(_COMPARATORS)}, got {self.comparator!r}"
            )
        object.__setattr__(self, "threshold", float(self.threshold))

    @classmethod
    def from_text(cls, text: str) -> "ConstraintRule":
        """Parse expressions like "co2<=0.02" or "accuracy > 0.845"."""
        m = _CONSTRAINT_RE.match(text)
        if not m:
            raise ConfigError(f"cannot parse constraint {text!r}; expected name<=value")
        name, op, raw = m.groups()
        try:
            threshold = float(raw)
        except ValueError:
            raise ConfigError(f"constraint threshold {raw!r} is not a number") from None
        return cls(objective_name=name.strip(), comparator=op, threshold=threshold)

    def satisfied(self, value: float) -> bool:
        return bool(_COMPARATORS[self.comparator](value, self.threshold))

    def __str__(self) -> str:
        return f"{self.objective_name}{self.comparator}{self.threshold:g}"


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """Outcome of a single selection run.

    criterion_value equals the criterion evaluated on normalized_vector;
    raw_vector is the untouched population row.
    """

    model_index: int
    model_id: str
    criterion_value: float
    raw_vector: np.ndarray
    normalized_vector: np.ndarray
    is_pareto_optimal: bool
    tie_broken: bool
