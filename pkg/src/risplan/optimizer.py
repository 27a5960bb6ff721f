"""Coarse-to-fine search over candidate deployments.

Round 0 evaluates a full grid over (x, y, orientation) crossed with the
discrete element-count and split-weight sets. Each later round keeps the k
best-scoring candidates, lays a shrunken sampling window around each, and
re-scores the cumulative population. An exhaustive-grid evaluator with the
same bookkeeping serves as the verification oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, Sequence

import numpy as np

from .metrics import MetricBundle, evaluate_candidate
from .objective import ObjectiveVector, scalarize
from .ris import ALLOWED_ELEMENT_COUNTS, RisConfig
from .scenario import DeploymentArea, Point2D, ScenarioConfig

REPRESENTATIVE_KEYS = ("best_snr_b", "best_security_gap", "best_sensing_gain", "balanced")

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SearchParams:
    """Knobs of the iterative search.

    ``grid_*`` size the round-0 grid; ``refine_*`` size the per-elite
    sampling windows of later rounds, whose spans shrink by
    ``shrink_factor`` each round. Orientation refines on the circle;
    the split weight refines continuously within [0, 1]; element counts
    move to neighboring values of ``element_counts``.
    """

    grid_x: int = 10
    grid_y: int = 10
    grid_theta: int = 8
    element_counts: tuple[int, ...] = ALLOWED_ELEMENT_COUNTS
    alpha_values: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    elites_per_round: int = 10
    shrink_factor: float = 0.5
    max_rounds: int = 5
    convergence_eps: float = 1e-4
    refine_x: int = 3
    refine_y: int = 3
    refine_theta: int = 3
    refine_alpha: int = 3


def validate_search_params(params: SearchParams) -> SearchParams:
    if not 0.0 < params.shrink_factor < 1.0:
        raise ValueError("SearchParams.shrink_factor must be in (0, 1)")
    if params.elites_per_round < 1:
        raise ValueError("SearchParams.elites_per_round must be >= 1")
    if params.max_rounds < 1:
        raise ValueError("SearchParams.max_rounds must be >= 1")
    for name in ("grid_x", "grid_y", "grid_theta",
                 "refine_x", "refine_y", "refine_theta", "refine_alpha"):
        if getattr(params, name) < 1:
            raise ValueError(f"SearchParams.{name} must be >= 1")
    if not params.element_counts or not params.alpha_values:
        raise ValueError("SearchParams discrete sets must be non-empty")
    if any(not 0.0 <= a <= 1.0 for a in params.alpha_values):
        raise ValueError("SearchParams.alpha_values must lie in [0, 1]")
    if params.convergence_eps < 0.0:
        raise ValueError("SearchParams.convergence_eps must be >= 0")
    return params


def search_params_from_dict(data: dict) -> SearchParams:
    """Build SearchParams from a JSON-style dict, filling defaults."""
    allowed = {f.name for f in fields(SearchParams)}
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown search parameter keys {sorted(unknown)}")
    kwargs = dict(data)
    if "element_counts" in kwargs:
        kwargs["element_counts"] = tuple(int(n) for n in kwargs["element_counts"])
    if "alpha_values" in kwargs:
        kwargs["alpha_values"] = tuple(float(a) for a in kwargs["alpha_values"])
    return validate_search_params(SearchParams(**kwargs))


@dataclass(frozen=True)
class EvaluatedCandidate:
    """One evaluated configuration with its stable enumeration index."""

    index: int
    ris: RisConfig
    metrics: MetricBundle


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """All evaluated candidates (ordered by index), their scores under the
    final cumulative normalization, and the four representatives."""

    candidates: tuple[EvaluatedCandidate, ...]
    objectives: tuple[ObjectiveVector, ...]
    representatives: dict[str, int]
    rounds_executed: int
    converged: bool
    best_scalar_history: tuple[float, ...]

    def representative(self, key: str) -> tuple[EvaluatedCandidate, ObjectiveVector]:
        idx = self.representatives[key]
        cand = self.candidates[idx]
        assert cand.index == idx
        return cand, self.objectives[idx]


def initial_grid(area: DeploymentArea, params: SearchParams) -> list[RisConfig]:
    """Round-0 candidate list: position cell centers x orientations x
    discrete sets, in stable enumeration order."""
    step_x = (area.x_max - area.x_min) / params.grid_x
    step_y = (area.y_max - area.y_min) / params.grid_y
    xs = [area.x_min + (i + 0.5) * step_x for i in range(params.grid_x)]
    ys = [area.y_min + (i + 0.5) * step_y for i in range(params.grid_y)]
    thetas = [i * _TWO_PI / params.grid_theta for i in range(params.grid_theta)]
    return [
        RisConfig(Point2D(x, y), theta, n, alpha)
        for x in xs for y in ys for theta in thetas
        for n in params.element_counts for alpha in params.alpha_values
    ]


def _window(center: float, span: float, lo: float, hi: float, count: int) -> list[float]:
    a = max(lo, center - span / 2.0)
    b = min(hi, center + span / 2.0)
    if count == 1:
        return [min(max(center, lo), hi)]
    return list(np.linspace(a, b, count))


def _neighbor_counts(n: int, counts: tuple[int, ...]) -> list[int]:
    ordered = sorted(counts)
    i = ordered.index(n)
    return ordered[max(0, i - 1):i + 2]


def _refinement_candidates(elite: RisConfig, round_index: int, area: DeploymentArea,
                           params: SearchParams) -> list[RisConfig]:
    shrink = params.shrink_factor ** round_index
    xs = _window(elite.position.x, (area.x_max - area.x_min) * shrink,
                 area.x_min, area.x_max, params.refine_x)
    ys = _window(elite.position.y, (area.y_max - area.y_min) * shrink,
                 area.y_min, area.y_max, params.refine_y)
    if params.refine_theta == 1:
        thetas = [elite.orientation]
    else:
        half = _TWO_PI * shrink / 2.0
        thetas = [t % _TWO_PI for t in
                  np.linspace(elite.orientation - half, elite.orientation + half,
                              params.refine_theta)]
    alphas = _window(elite.alpha, 1.0 * shrink, 0.0, 1.0, params.refine_alpha)
    ns = _neighbor_counts(elite.num_elements, params.element_counts)
    return [
        RisConfig(Point2D(x, y), theta, n, alpha)
        for x in xs for y in ys for theta in thetas for n in ns for alpha in alphas
    ]


def _candidate_key(ris: RisConfig):
    return (ris.position.x, ris.position.y, ris.orientation, ris.num_elements, ris.alpha)


def extract_representatives(candidates: Sequence[EvaluatedCandidate],
                            objectives: Sequence[ObjectiveVector]) -> dict[str, int]:
    """Pick the per-metric argmax candidates and the scalar argmin.

    ``candidates`` must be ordered by index; ties resolve to the lowest
    index because argmax/argmin return the first extremum.
    """
    if len(candidates) == 0:
        raise ValueError("cannot extract representatives from an empty set")
    snr_b = np.array([c.metrics.snr_b_db for c in candidates])
    gap = np.array([c.metrics.security_gap_db for c in candidates])
    sens = np.array([c.metrics.sensing_gain_db for c in candidates])
    scalar = np.array([o.scalar for o in objectives])
    return {
        "best_snr_b": candidates[int(np.argmax(snr_b))].index,
        "best_security_gap": candidates[int(np.argmax(gap))].index,
        "best_sensing_gain": candidates[int(np.argmax(sens))].index,
        "balanced": candidates[int(np.argmin(scalar))].index,
    }


def _assemble(candidates: list[EvaluatedCandidate], round_boundaries: list[int],
              rounds_executed: int, converged: bool) -> OptimizationResult:
    objectives = scalarize([c.metrics for c in candidates])
    scalars = np.array([o.scalar for o in objectives])
    history = tuple(float(scalars[:n].min()) for n in round_boundaries)
    return OptimizationResult(
        candidates=tuple(candidates),
        objectives=tuple(objectives),
        representatives=extract_representatives(candidates, objectives),
        rounds_executed=rounds_executed,
        converged=converged,
        best_scalar_history=history,
    )


EvaluateFn = Callable[[ScenarioConfig, RisConfig, int], MetricBundle]


def exhaustive_grid(cfg: ScenarioConfig, grid: Sequence[RisConfig],
                    evaluate: EvaluateFn | None = None) -> OptimizationResult:
    """Evaluate an explicit candidate list once; the brute-force oracle."""
    if len(grid) == 0:
        raise ValueError("candidate list must be non-empty")
    evaluate = evaluate or evaluate_candidate
    candidates = [EvaluatedCandidate(i, ris, evaluate(cfg, ris, i))
                  for i, ris in enumerate(grid)]
    return _assemble(candidates, [len(candidates)], rounds_executed=1, converged=False)


def iterative_search(cfg: ScenarioConfig, params: SearchParams | None = None,
                     evaluate: EvaluateFn | None = None) -> OptimizationResult:
    """Run the elite-retention coarse-to-fine search.

    Deterministic for fixed (config, params): candidate indices follow the
    stable enumeration order, and all channel randomness is keyed by them.
    Stops after ``max_rounds`` rounds, or earlier once a round improves the
    best score (measured on the cumulative population) by less than
    ``convergence_eps``.
    """
    params = validate_search_params(params or SearchParams())
    evaluate = evaluate or evaluate_candidate

    grid = initial_grid(cfg.area, params)
    candidates = [EvaluatedCandidate(i, ris, evaluate(cfg, ris, i))
                  for i, ris in enumerate(grid)]
    seen = {_candidate_key(c.ris) for c in candidates}
    round_boundaries = [len(candidates)]
    rounds_executed = 1
    converged = False

    for round_index in range(1, params.max_rounds):
        objectives = scalarize([c.metrics for c in candidates])
        order = sorted(range(len(candidates)), key=lambda i: (objectives[i].scalar, i))
        elites = [candidates[i] for i in order[:params.elites_per_round]]

        fresh: list[RisConfig] = []
        for elite in elites:
            for ris in _refinement_candidates(elite.ris, round_index, cfg.area, params):
                key = _candidate_key(ris)
                if key not in seen:
                    seen.add(key)
                    fresh.append(ris)
        if not fresh:
            converged = True
            break

        prev_count = len(candidates)
        for ris in fresh:
            candidates.append(EvaluatedCandidate(len(candidates), ris,
                                                 evaluate(cfg, ris, len(candidates))))
        round_boundaries.append(len(candidates))
        rounds_executed += 1

        # Compare old and new best under a common (cumulative) normalization.
        rescored = scalarize([c.metrics for c in candidates])
        scalars = np.array([o.scalar for o in rescored])
        improvement = scalars[:prev_count].min() - scalars.min()
        if improvement < params.convergence_eps:
            converged = True
            break

    return _assemble(candidates, round_boundaries, rounds_executed, converged)
