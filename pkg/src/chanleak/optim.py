"""Maximization of smooth concave functions over the probability simplex.

Frank-Wolfe style search: on the simplex the linearized subproblem is a
vertex selection, so the linearization gap

    gap(p) = max_i g_i - <g, p>

is a free optimality certificate (for concave f, sup f - f(p) <= gap(p)).
Steps move mass from the worst supported vertex onto the best vertex
(pairwise steps), which keeps iterates exactly feasible without projection
and avoids the zigzag stalls of the classic step near faces. The line
search never evaluates the gradient at trial points and only accepts
ascent, so the objective is non-decreasing across iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SimplexPoint
from .errors import NumericalFailure, ShapeError

__all__ = ["OptimizerConfig", "OptimizerReport", "maximize_on_simplex"]

# Bisection depth of the backtracking fallback; 2^-60 of a unit step is
# below any useful resolution.
_MAX_BACKTRACK = 60


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for :func:`maximize_on_simplex`.

    ``tolerance`` bounds the certified linearization gap at exit;
    ``initial_point`` defaults to the uniform distribution.
    """

    max_iterations: int = 10_000
    tolerance: float = 1e-9
    initial_point: SimplexPoint | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ShapeError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (self.tolerance > 0.0):
            raise ShapeError(f"tolerance must be positive, got {self.tolerance!r}")


@dataclass(frozen=True, eq=False)
class OptimizerReport:
    """Outcome of a simplex maximization.

    ``certified_gap`` is the linearization gap at ``maximizer``; ``converged``
    holds exactly when that gap is within the configured tolerance.
    """

    value: float
    maximizer: SimplexPoint
    iterations: int
    certified_gap: float
    converged: bool


def _evaluate(objective, weights: np.ndarray) -> tuple[float, np.ndarray]:
    value, gradient = objective(weights)
    value = float(value)
    gradient = np.asarray(gradient, dtype=float)
    if math.isnan(value) or np.any(np.isnan(gradient)):
        raise NumericalFailure("objective produced NaN")
    return value, gradient


def _certified_gap(gradient: np.ndarray, point: np.ndarray) -> float:
    if np.any(np.isinf(gradient)):
        return math.inf
    gap = float(np.max(gradient) - gradient @ point)
    return max(gap, 0.0)


def _line_search(value_of, f0: float, slope: float, t_max: float) -> tuple[float, float]:
    """Pick a step in (0, t_max] with value above f0, favoring the 1-D maximum.

    Tries the full step, then the maximizer of the parabola matching
    (0, f0), slope at 0, and the full-step value, then bisects toward 0.
    Returns (0.0, f0) if no ascent is found at any scale.
    """
    best_t, best_f = 0.0, f0
    f_full = value_of(t_max)
    if f_full > best_f:
        best_t, best_f = t_max, f_full
    if math.isfinite(f_full) and math.isfinite(slope):
        denom = 2.0 * (f0 + slope * t_max - f_full)
        if denom > 0.0:
            t_fit = slope * t_max * t_max / denom
            if 0.0 < t_fit < t_max:
                f_fit = value_of(t_fit)
                if f_fit > best_f:
                    best_t, best_f = t_fit, f_fit
    if best_t > 0.0:
        return best_t, best_f
    t = t_max
    for _ in range(_MAX_BACKTRACK):
        t *= 0.5
        f_t = value_of(t)
        if f_t > f0:
            return t, f_t
    return 0.0, f0


def maximize_on_simplex(objective, dim: int, config: OptimizerConfig | None = None) -> OptimizerReport:
    """Maximize a concave objective over the ``dim``-simplex.

    Parameters
    ----------
    objective : callable
        Maps a weight vector (1-D ndarray on the simplex) to a pair
        ``(value, gradient)``. The gradient must be analytic; it is never
        approximated here. +inf gradient entries are tolerated at faces
        (the search moves off them), NaN raises NumericalFailure.
    dim : int
        Alphabet size; must match ``config.initial_point`` when given.
    config : OptimizerConfig, optional

    Returns
    -------
    OptimizerReport
        Best point found, its value, the certified linearization gap and
        the iteration count. Non-convergence is reported, never raised.
    """
    cfg = config or OptimizerConfig()
    if dim < 1:
        raise ShapeError(f"dimension must be >= 1, got {dim}")
    if cfg.initial_point is None:
        point = np.full(dim, 1.0 / dim)
    else:
        if len(cfg.initial_point) != dim:
            raise ShapeError(
                f"initial point has dimension {len(cfg.initial_point)}, expected {dim}"
            )
        point = cfg.initial_point.weights.copy()

    value, gradient = objective(point)
    value = float(value)
    if not math.isfinite(value):
        raise NumericalFailure("objective is not finite at the initial point")
    gradient = np.asarray(gradient, dtype=float)
    if np.any(np.isnan(gradient)):
        raise NumericalFailure("gradient is NaN at the initial point")

    if dim == 1:
        return OptimizerReport(
            value=value,
            maximizer=SimplexPoint(np.array([1.0])),
            iterations=0,
            certified_gap=0.0,
            converged=True,
        )

    gap = _certified_gap(gradient, point)
    iterations = 0
    while gap > cfg.tolerance and iterations < cfg.max_iterations:
        iterations += 1
        towards = int(np.argmax(gradient))  # ties: lowest index
        support = np.flatnonzero(point > 0.0)
        away = int(support[np.argmin(gradient[support])])  # ties: lowest index
        if towards == away:
            break  # single-vertex support already optimal in this direction
        slope = float(gradient[towards] - gradient[away])

        def value_at(t: float, _s=towards, _a=away) -> float:
            trial = point.copy()
            trial[_s] += t
            trial[_a] = max(trial[_a] - t, 0.0)
            trial /= trial.sum()
            v, _ = objective(trial)
            return float(v)

        step, new_value = _line_search(value_at, value, slope, float(point[away]))
        if step == 0.0:
            break  # no ascent at any scale: numerical plateau
        point[towards] += step
        point[away] = max(point[away] - step, 0.0)
        point /= point.sum()
        value, gradient = _evaluate(objective, point)
        gap = _certified_gap(gradient, point)

    return OptimizerReport(
        value=value,
        maximizer=SimplexPoint(point),
        iterations=iterations,
        certified_gap=gap,
        converged=gap <= cfg.tolerance,
    )
