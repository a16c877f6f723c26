"""Profile search over γ for the parametric rules, on the t = γ/(1 + γ) scale."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..optimize import ScalarOptimum, refine_grid_minimum
from ..types import FloatArray

__all__ = [
    'ProfileT',
    'shrinkage_from_t',
    'gamma_from_t',
    'search_gamma'
]

ProfileT = Callable[[NDArray[np.float64]], tuple[NDArray[np.float64], NDArray[np.float64]]]
"""Maps a (G, p) shrinkage matrix to the profiled μ and objective of every row."""


def shrinkage_from_t(t: ArrayLike, tau: FloatArray) -> NDArray[np.float64]:
    """bᵢ = γ/(τᵢ + γ) with γ = t/(1 - t), as a (G, p) matrix; t = 1 gives bᵢ = 1."""

    t = np.asarray(t, np.float64).reshape(-1, 1)

    return t / (t + tau * (1.0 - t))


def gamma_from_t(t: float) -> float:
    if t >= 1.0:
        return math.inf

    return t / (1.0 - t)


def search_gamma(
    profile: ProfileT, tau: FloatArray, grid_size: int, tol: float
) -> tuple[float, float, ScalarOptimum]:
    """
    Minimize a profiled objective over γ ∈ [0, ∞].

    :param profile:     Profiled μ and objective for a shrinkage matrix.
    :param tau:         Convolution parameters.
    :param grid_size:   Number of t points on [0, 1].
    :param tol:         Relative width of the golden-section refinement.

    :return:            (γ, μ, optimum on the t scale).
    """

    grid = np.linspace(0.0, 1.0, max(grid_size, 2))

    _, values = profile(shrinkage_from_t(grid, tau))

    def _objective(t: float) -> float:
        return float(profile(shrinkage_from_t(t, tau))[1][0])

    optimum = refine_grid_minimum(_objective, grid, values, tol)

    mu = float(profile(shrinkage_from_t(optimum.x, tau))[0][0])

    return gamma_from_t(optimum.x), mu, optimum
