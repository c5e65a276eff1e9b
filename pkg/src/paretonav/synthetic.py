"""Seeded synthetic two-objective trade-off curve used by tests and demos.

The curve y2 = 0.25*cos(39*y1^0.85) - ln(y1) - 0.46 with y1 uniform on
(0.02, 0.2) yields a non-convex front with a flat stretch around
y1 = 0.1 and two objectives living on very different scales, which makes
it a good stress case for normalization methods.
"""

from __future__ import annotations

import numpy as np

from .core import ObjectiveSpec, Population, build_population

__all__ = ["synthetic_front", "DEFAULT_SEED", "DEFAULT_N"]

DEFAULT_SEED = 37
DEFAULT_N = 240


def synthetic_front(n: int = DEFAULT_N, seed: int = DEFAULT_SEED) -> Population:
    """Sample the synthetic curve; byte-reproducible for a given (n, seed)."""
    rng = np.random.default_rng(seed)
    y1 = rng.uniform(0.02, 0.2, size=n)
    y2 = 0.25 * np.cos(39.0 * y1**0.85) - np.log(y1) - 0.46
    width = max(4, len(str(n)))
    ids = [f"m{i + 1:0{width}d}" for i in range(n)]
    specs = [ObjectiveSpec("objective_1"), ObjectiveSpec("objective_2")]
    return build_population(ids, specs, np.column_stack([y1, y2]))
