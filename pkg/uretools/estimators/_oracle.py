from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from stgpytools import FuncExceptT

from ..types import Dataset, FloatArray, ParamRule
from ..ure import param_risk
from ._abstract import Estimator, FitResult
from ._profile import search_gamma

__all__ = [
    'Oracle'
]


@dataclass
class Oracle(Estimator):
    """
    The parametric rule minimizing the exact risk at the true means; only available in simulations.

    μ is profiled in closed form and left unconstrained.
    """

    name = 'oracle'
    requires_truth = True

    gamma_grid_size: int = 1001
    tol: float = 1e-6

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        assert truth is not None

        tau = data.tau
        noise = data.family.variance(truth, func) / tau
        centre = float(np.mean(truth))

        def _profile(b: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
            c = b * b
            weight = c.sum(axis=-1)

            with np.errstate(divide='ignore', invalid='ignore'):
                mu = np.where(weight > 0, (c @ truth) / np.where(weight > 0, weight, 1.0), centre)

            return mu, np.mean((1.0 - b) ** 2 * noise + c * (mu[:, None] - truth) ** 2, axis=-1)

        gamma, mu, optimum = search_gamma(_profile, tau, self.gamma_grid_size, self.tol)

        rule = ParamRule(gamma, mu)

        return self._result(
            data, rule, param_risk(data.family, truth, tau, gamma, mu, func),
            gamma_grid_size=self.gamma_grid_size, iterations=optimum.iterations
        )
