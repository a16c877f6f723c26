"""Estimators that minimize an unbiased risk estimate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from stgpytools import FuncExceptT

from ..isotonic import MonotoneProblem, solve_monotone
from ..optimize import refine_grid_minimum
from ..types import Dataset, FloatArray, ParamRule, SemiRule
from ..ure import ure_grand, ure_param, ure_param_grand, ure_semi
from ._abstract import Estimator, FitResult
from ._profile import search_gamma

__all__ = [
    'SemiparametricURE',
    'SemiparametricGrandURE',
    'ParametricURE',
    'ParametricGrandURE'
]


def _mean_rows(values: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.mean(values, axis=-1)


@dataclass
class ParametricURE(Estimator):
    """θ̂^PM: minimizes URE^P(γ, μ) over γ ∈ [0, ∞] and μ ∈ [-max|Yᵢ|, max|Yᵢ|] ∩ Θ."""

    name = 'pm'

    gamma_grid_size: int = 1001
    tol: float = 1e-6

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        lo, hi = data.mean_interval()
        y, v = data.y, data.variance_terms

        fallback = float(np.clip(data.grand_mean, lo, hi))

        def _profile(b: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
            c = b * b
            weight = c.sum(axis=-1)

            with np.errstate(divide='ignore', invalid='ignore'):
                mu = np.where(weight > 0, (c @ y) / np.where(weight > 0, weight, 1.0), fallback)

            mu = np.clip(mu, lo, hi)

            return mu, _mean_rows(c * (y - mu[:, None]) ** 2 + (1.0 - 2.0 * b) * v)

        gamma, mu, optimum = search_gamma(_profile, data.tau, self.gamma_grid_size, self.tol)

        rule = ParamRule(gamma, mu)

        return self._result(
            data, rule, ure_param(data, rule, func),
            gamma_grid_size=self.gamma_grid_size, iterations=optimum.iterations, converged=optimum.converged
        )


@dataclass
class ParametricGrandURE(Estimator):
    """θ̂^PG: minimizes URE^PG(γ) over γ ∈ [0, ∞], shrinking toward the grand mean."""

    name = 'pg'

    gamma_grid_size: int = 1001
    tol: float = 1e-6

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        y, v, grand = data.y, data.variance_terms, data.grand_mean

        factor = 1.0 - 1.0 / data.p

        def _profile(b: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
            mu = np.full(b.shape[0], grand)

            return mu, _mean_rows(b * b * (y - grand) ** 2 + (1.0 - 2.0 * factor * b) * v)

        gamma, _, optimum = search_gamma(_profile, data.tau, self.gamma_grid_size, self.tol)

        rule = ParamRule(gamma, grand, grand=True)

        return self._result(
            data, rule, ure_param_grand(data, gamma, func),
            gamma_grid_size=self.gamma_grid_size, iterations=optimum.iterations, converged=optimum.converged
        )


@dataclass
class SemiparametricGrandURE(Estimator):
    """θ̂^SG: minimizes URE^G(b) over monotone b ∈ [0, 1]^p, shrinking toward the grand mean."""

    name = 'sg'

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        grand = data.grand_mean

        problem = MonotoneProblem(
            (data.y - grand) ** 2, (1.0 - 1.0 / data.p) * data.variance_terms, data.tau
        )

        rule = SemiRule(solve_monotone(problem), grand, grand=True)

        return self._result(data, rule, ure_grand(data, rule.b, func), blocks=len(problem.groups))


@dataclass
class SemiparametricURE(Estimator):
    """
    θ̂^SM: minimizes URE(b, μ) over monotone b ∈ [0, 1]^p and μ ∈ [-max|Yᵢ|, max|Yᵢ|] ∩ Θ.

    For a fixed μ the optimal b solves a monotone quadratic program, so μ is
    profiled: a grid over the interval, golden-section refinement around the
    best cell, and the location of the parametric fit as an extra candidate.
    """

    name = 'sm'

    mu_grid_size: int = 201
    gamma_grid_size: int = 1001
    tol: float = 1e-6

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        lo, hi = data.mean_interval()
        y, v, tau = data.y, data.variance_terms, data.tau

        def _solve(mu: float) -> SemiRule:
            return SemiRule(solve_monotone(MonotoneProblem((y - mu) ** 2, v, tau)), mu)

        def _profile(mu: float) -> float:
            return ure_semi(data, _solve(mu), func)

        grid = np.linspace(lo, hi, max(self.mu_grid_size, 2)) if hi > lo else np.array([lo])

        optimum = refine_grid_minimum(_profile, grid, [_profile(float(mu)) for mu in grid], self.tol)

        best_mu, best_value = optimum.x, optimum.value

        parametric = ParametricURE(gamma_grid_size=self.gamma_grid_size, tol=self.tol).fit(data, func=func)

        assert isinstance(parametric.rule, ParamRule)

        if (seeded := _profile(parametric.rule.mu)) < best_value:
            best_mu, best_value = parametric.rule.mu, seeded

        rule = _solve(best_mu)

        return self._result(
            data, rule, ure_semi(data, rule, func),
            mu_grid_size=grid.size, iterations=optimum.iterations, converged=optimum.converged,
            seeded=best_mu == parametric.rule.mu
        )
