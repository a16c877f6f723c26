"""One-dimensional minimizers used by the profile searches."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike

from .exceptions import DimensionMismatchError, DomainError

__all__ = [
    'ScalarOptimum',

    'golden_section',
    'refine_grid_minimum'
]

logger = logging.getLogger(__name__)

INV_PHI = 2.0 / (1.0 + math.sqrt(5.0))


@dataclass(frozen=True)
class ScalarOptimum:
    x: float
    value: float
    iterations: int
    converged: bool


def golden_section(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-6, max_iter: int = 200
) -> ScalarOptimum:
    """
    Golden-section search for a minimum of ``f`` on [lo, hi].

    The bracket is shrunk until its width falls below ``tol`` relative to the
    initial width. Both endpoints are compared against the interior result, so
    a monotone ``f`` returns the better endpoint.

    :param f:           Objective.
    :param lo:          Lower end of the bracket.
    :param hi:          Upper end of the bracket.
    :param tol:         Relative bracket width to stop at.
    :param max_iter:    Iteration cap.

    :return:            Best point found, with its value.
    """

    if not lo <= hi:
        raise DomainError('Invalid bracket [{lo}, {hi}]!', golden_section, lo=lo, hi=hi)

    f_lo, f_hi = f(lo), f(hi)

    if lo == hi:
        return ScalarOptimum(lo, f_lo, 0, True)

    width = (hi - lo) * tol
    a, c = lo, hi

    x1, x2 = c - INV_PHI * (c - a), a + INV_PHI * (c - a)
    f1, f2 = f(x1), f(x2)

    iteration = 0

    while c - a > width and iteration < max_iter:
        if f2 > f1:
            c, x2, f2 = x2, x1, f1
            x1 = c - INV_PHI * (c - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (c - a)
            f2 = f(x2)

        iteration += 1

    converged = iteration < max_iter and math.isfinite(f1) and math.isfinite(f2)

    if not converged:
        logger.debug('golden_section stopped after %d iterations on [%g, %g]', iteration, lo, hi)

    x, value = (x2, f2) if f2 <= f1 else (x1, f1)

    # ties go to the upper end
    for candidate, f_candidate in ((lo, f_lo), (hi, f_hi)):
        if f_candidate < value or (f_candidate == value and candidate > x):
            x, value = candidate, f_candidate

    return ScalarOptimum(x, value, iteration, converged)


def refine_grid_minimum(
    f: Callable[[float], float], grid: ArrayLike, values: ArrayLike, tol: float = 1e-6
) -> ScalarOptimum:
    """
    Refine the best point of an evaluated grid by golden-section search over its two neighbouring cells.

    Ties on the grid resolve to the largest coordinate, and the refined point
    only replaces the grid point when it is strictly better.

    :param f:           Scalar objective, consistent with ``values``.
    :param grid:        Increasing grid coordinates.
    :param values:      ``f`` evaluated on ``grid``; non-finite entries never win.
    :param tol:         Relative width passed to :py:func:`golden_section`.

    :return:            Best point found.
    """

    grid, values = np.asarray(grid, np.float64).ravel(), np.asarray(values, np.float64).ravel()

    if grid.size != values.size:
        raise DimensionMismatchError(refine_grid_minimum, grid.size, values.size)

    if grid.size < 1:
        raise DomainError('The grid must not be empty!', refine_grid_minimum)

    finite = np.where(np.isfinite(values), values, np.inf)

    best = grid.size - 1 - int(np.argmin(finite[::-1]))
    best_x, best_value = float(grid[best]), float(finite[best])

    lo, hi = float(grid[max(best - 1, 0)]), float(grid[min(best + 1, grid.size - 1)])

    refined = golden_section(f, lo, hi, tol)

    if refined.value < best_value:
        return refined

    return ScalarOptimum(best_x, best_value, refined.iterations, refined.converged)
