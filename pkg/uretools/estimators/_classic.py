"""Reference estimators: the observations themselves, the grand mean and James-Stein."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from stgpytools import FuncExceptT

from ..exceptions import DatasetError
from ..types import Dataset, FloatArray, SemiRule
from ..ure import ure_grand, ure_semi
from ._abstract import Estimator, FitResult

__all__ = [
    'Naive',
    'GrandMean',
    'JamesStein'
]


@dataclass
class Naive(Estimator):
    """θ̂ᵢ = Yᵢ."""

    name = 'naive'

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        objective = ure_semi(data, SemiRule(np.zeros(data.p), 0.0), func)

        return self._result(data, None, objective, data.y.copy())


@dataclass
class GrandMean(Estimator):
    """θ̂ᵢ = Ȳ for every i."""

    name = 'grand_mean'

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        rule = SemiRule(np.ones(data.p), data.grand_mean, grand=True)

        return self._result(data, rule, ure_grand(data, rule.b, func))


@dataclass
class JamesStein(Estimator):
    """
    Positive-part James-Stein estimator extended to unequal variances Aᵢ = 1/τᵢ.

    θ̂ᵢ = μ̂ + c·(Yᵢ - μ̂), with μ̂ = ΣτᵢYᵢ/Στᵢ and c = (1 - (p - 3)/Στᵢ(Yᵢ - μ̂)²)⁺.

    With ``literal`` the factor multiplies Yᵢ instead of (Yᵢ - μ̂), which is not
    location equivariant and has no (b, μ) rule.
    """

    name = 'js'

    literal: bool = False

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        if data.p < 4:
            raise DatasetError('James-Stein needs at least 4 observations, got {p}!', func, p=data.p)

        y, tau = data.y, data.tau

        mu = math.fsum((tau * y).tolist()) / math.fsum(tau.tolist())
        spread = math.fsum((tau * (y - mu) ** 2).tolist())

        factor = max(1.0 - (data.p - 3) / spread, 0.0) if spread > 0 else 0.0

        if self.literal:
            return self._result(data, None, math.nan, mu + factor * y, mu=mu, factor=factor, literal=True)

        rule = SemiRule(np.full(data.p, 1.0 - factor), mu)

        return self._result(data, rule, ure_semi(data, rule, func), mu=mu, factor=factor, literal=False)
