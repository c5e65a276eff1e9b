"""Scalar criterion functions over normalized objective vectors.

scaled_pnorm is the selection criterion proper: a p-norm taken on
coordinates pre-scaled by the weights (weights inside the absolute
value). Keeping the weights inside preserves their ratio interpretation
and keeps them effective in the p -> infinity limit, where the criterion
becomes an exact weighted min-max (Tchebycheff) form.

weighted_pnorm is the usual weighted p-norm, kept for comparison: on
unit-interval inputs its terms vanish quickly as p grows and its
p = infinity limit ignores the weights entirely.

SAW, AHP and MEW are classic multi-criteria decision-making baselines,
adapted to a fixed weight vector and to minimization semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    ConfigError,
    ConstraintRule,
    CriterionConfig,
    DataError,
    Population,
)
from .normalize import baseline_normalize

__all__ = [
    "scaled_pnorm",
    "scaled_pnorm_rows",
    "weighted_pnorm",
    "saw_scores",
    "ahp_scores",
    "mew_scores",
    "principal_eigenvector",
    "PiecewiseRule",
    "piecewise_criterion",
]


def _check_vector(u, k: int) -> np.ndarray:
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.size != k:
        raise ConfigError(f"vector has length {u.size}, criterion expects {k}")
    if not np.all(np.isfinite(u)):
        raise DataError("criterion input vector must be finite")
    return u


def scaled_pnorm_rows(matrix: np.ndarray, config: CriterionConfig) -> np.ndarray:
    """scaled_pnorm evaluated on every row of an (N, K) matrix."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != config.k:
        raise ConfigError(
            f"matrix shape {matrix.shape} does not match {config.k} weights"
        )
    scaled = np.abs(matrix * config.weights[None, :])
    if config.is_infinite:
        return scaled.max(axis=1)
    if config.p == 1.0:
        return scaled.sum(axis=1)
    # factor out the row maximum so |w*u|^p cannot underflow for large p
    peak = scaled.max(axis=1)
    out = np.zeros_like(peak)
    nz = peak > 0.0
    ratios = scaled[nz] / peak[nz, None]
    out[nz] = peak[nz] * (ratios**config.p).sum(axis=1) ** (1.0 / config.p)
    return out


def scaled_pnorm(u, config: CriterionConfig) -> float:
    """p-norm of the weight-scaled vector: (sum_k |w_k u_k|^p)^(1/p).

    p = math.inf is handled exactly as max_k w_k |u_k| (no large-p
    approximation), which keeps the weights meaningful in the limit.
    """
    u = _check_vector(u, config.k)
    return float(scaled_pnorm_rows(u[None, :], config)[0])


def weighted_pnorm(u, config: CriterionConfig) -> float:
    """Usual weighted p-norm, (sum_k w_k |u_k|^p)^(1/p), for comparison.

    At p = math.inf this degenerates to max_k |u_k| regardless of the
    weights (they vanish in the limit).
    """
    u = _check_vector(u, config.k)
    mags = np.abs(u)
    if config.is_infinite:
        return float(mags.max())
    peak = mags.max()
    if peak == 0.0:
        return 0.0
    return float(peak * (config.weights @ (mags / peak) ** config.p) ** (1.0 / config.p))


def principal_eigenvector(
    matrix,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> np.ndarray:
    """Dominant eigenvector of a non-negative matrix, normalized to sum to 1.

    Deterministic power iteration from the uniform vector; for a strictly
    positive matrix Perron-Frobenius guarantees convergence to a positive
    eigenvector (the identity converges immediately to the uniform start).
    Converged when successive iterates differ by at most tol in the
    infinity norm; raises after max_iter with the last step size.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)) or np.any(a < 0.0):
        raise ConfigError("power iteration requires a non-negative matrix")
    n = a.shape[0]
    v = np.full(n, 1.0 / n)
    delta = math.inf
    for _ in range(max_iter):
        nxt = a @ v
        total = nxt.sum()
        if total <= 0.0:
            raise DataError("power iteration collapsed to the zero vector")
        nxt /= total
        delta = np.abs(nxt - v).max()
        v = nxt
        if delta <= tol:
            break
    else:
        raise DataError(
            f"power iteration did not converge after {max_iter} iterations "
            f"(last step moved {delta:.3e})"
        )
    av = a @ v
    lam = av.sum()  # v sums to 1, so sum(Av) = lambda
    residual = np.abs(av - lam * v).max()
    if residual > 1e-8 * lam:
        raise DataError(
            f"power iteration residual {residual:.3e} exceeds 1e-8 * lambda"
        )
    return v


def _maxnorm_values(population: Population) -> np.ndarray:
    return baseline_normalize(population, "maxnorm").values


def saw_scores(population: Population, weights) -> np.ndarray:
    """Simple additive weighting: weighted average of max-normalized scores.

    Smaller is better (max-normalization puts the best model at 1 and
    worse models above it); the selection is the argmin.
    """
    config = CriterionConfig(p=1.0, weights=weights)
    if config.k != population.n_objectives:
        raise ConfigError("weight vector length does not match objectives")
    return _maxnorm_values(population) @ config.weights


def ahp_scores(population: Population, weights) -> np.ndarray:
    """Analytic-hierarchy-process scores with a predetermined weight vector.

    Per objective, models are compared pairwise on a 1..9 scale derived
    from log-ratios of max-normalized scores; each comparison matrix is
    reduced to its principal eigenvector (non-negative, summing to 1) and
    the final score is the weighted sum of those vectors. Smaller is
    better. A constant column carries no information and contributes the
    uniform vector.
    """
    config = CriterionConfig(p=1.0, weights=weights)
    if config.k != population.n_objectives:
        raise ConfigError("weight vector length does not match objectives")
    z = _maxnorm_values(population)
    n = population.n_models
    out = np.zeros(n)
    for j in range(population.n_objectives):
        col = z[:, j]
        span = math.log(col.max()) - math.log(col.min())
        if span == 0.0:
            v = np.full(n, 1.0 / n)
        else:
            logs = np.log(col)
            diff = (logs[:, None] - logs[None, :]) / span * 8.0 + 1.0
            upper = col[:, None] >= col[None, :]
            # reciprocal only read where upper is False, where diff.T >= 1
            with np.errstate(divide="ignore"):
                a = np.where(upper, diff, 1.0 / diff.T)
            v = principal_eigenvector(a)
        out += config.weights[j] * v
    return out


def mew_scores(population: Population, weights) -> np.ndarray:
    """Multiplicative exponent weighting: weighted geometric mean of
    max-normalized scores, prod_k z_k^(w_k). Smaller is better."""
    config = CriterionConfig(p=1.0, weights=weights)
    if config.k != population.n_objectives:
        raise ConfigError("weight vector length does not match objectives")
    z = _maxnorm_values(population)
    return np.exp(np.log(z) @ config.weights)


@dataclass(frozen=True)
class PiecewiseRule:
    """One branch of a piecewise criterion.

    The guard is evaluated on the raw objective vector; a rule with
    guard None always matches and serves as the mandatory default.
    """

    config: CriterionConfig
    guard: ConstraintRule | None = None


def piecewise_criterion(
    u,
    raw_y,
    rules: Sequence[PiecewiseRule],
    objective_names: Sequence[str],
) -> float:
    """Evaluate the first rule whose guard holds on the raw vector.

    Guards compare raw objective values (original units); the matched
    rule's config is then applied to the normalized vector u via
    scaled_pnorm. Raises if no rule matches and no default is present.
    """
    if not rules:
        raise ConfigError("piecewise criterion needs at least one rule")
    names = list(objective_names)
    raw_y = np.asarray(raw_y, dtype=float).reshape(-1)
    if raw_y.size != len(names):
        raise ConfigError("raw vector length does not match objective names")
    for rule in rules:
        if rule.guard is None:
            return scaled_pnorm(u, rule.config)
        try:
            idx = names.index(rule.guard.objective_name)
        except ValueError:
            raise ConfigError(
                f"piecewise guard references unknown objective "
                f"{rule.guard.objective_name!r}"
            ) from None
        if rule.guard.satisfied(float(raw_y[idx])):
            return scaled_pnorm(u, rule.config)
    raise ConfigError(
        "no piecewise rule matched and no default rule (guard None) was given"
    )
