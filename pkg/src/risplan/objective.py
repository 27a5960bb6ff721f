"""Scalarization of the three optimization objectives.

Each metric column is negated (the search minimizes), min-max normalized
over the candidate population being compared, and the three normalized
columns are summed. Lower scalar = better candidate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metrics import MetricBundle


@dataclass(frozen=True)
class ObjectiveVector:
    """Raw metric triple, its normalized (negated) columns, and their sum."""

    raw: tuple[float, float, float]
    normalized: tuple[float, float, float]
    scalar: float


def minmax_normalize(values) -> np.ndarray:
    """Map values affinely onto [0, 1]; a constant column maps to all zeros."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty population")
    if not np.all(np.isfinite(arr)):
        raise ValueError("cannot normalize non-finite values")
    lo, hi = arr.min(), arr.max()
    if hi == lo:
        return np.zeros_like(arr)
    return (arr - lo) / (hi - lo)


def scalarize(bundles: Sequence[MetricBundle]) -> list[ObjectiveVector]:
    """Score a candidate population; scores are relative to this population.

    Normalization statistics are computed over exactly the given bundles,
    so scalars from different populations are not comparable.
    """
    if len(bundles) == 0:
        raise ValueError("cannot scalarize an empty population")
    raw = np.array([b.raw_objectives() for b in bundles], dtype=float)
    normalized = np.column_stack([minmax_normalize(-raw[:, j]) for j in range(3)])
    scalars = normalized.sum(axis=1)
    return [
        ObjectiveVector(raw=tuple(raw[i]), normalized=tuple(normalized[i]),
                        scalar=float(scalars[i]))
        for i in range(len(bundles))
    ]
