"""Empirical Bayes fits of the conjugate prior's hyper-parameters."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import Bounds, minimize
from scipy.special import expit, gammaln, logit
from stgpytools import FuncExceptT

from ..exceptions import OptimizationFailedError, UnsupportedFamilyError
from ..families import Binomial, LocationScaleFamily, Poisson, QvfFamily
from ..types import Dataset, FloatArray, ParamRule
from ..ure import ure_param
from ._abstract import Estimator, FitResult

__all__ = [
    'EBMoments',
    'EBMaximumLikelihood'
]

logger = logging.getLogger(__name__)

_LOG_BOUND = 23.0
_INTERIOR = 1e-6


def _positive_part_ratio(numerator: float, denominator: float) -> float:
    if denominator <= 0:
        return math.inf

    return numerator / denominator


def _unsupported(func: FuncExceptT, family: QvfFamily, name: str) -> UnsupportedFamilyError:
    return UnsupportedFamilyError(
        func, family, 'The "{name}" estimator supports binomial, poisson and location-scale data, not {family}!',
        name=name
    )


@dataclass
class EBMoments(Estimator):
    """
    Method-of-moments estimates of the conjugate prior.

    A non-positive moment denominator means the data carry no evidence of spread
    beyond sampling noise, and the fit shrinks fully to the grand mean.
    """

    name = 'eb_mm'

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        family, y, tau, p = data.family, data.y, data.tau, data.p

        grand = data.grand_mean

        if isinstance(family, Binomial):
            gamma = _positive_part_ratio(
                grand * (1.0 - grand) * math.fsum((1.0 - 1.0 / tau).tolist()),
                math.fsum((y * y - grand / tau - grand * grand * (1.0 - 1.0 / tau)).tolist())
            )
        elif isinstance(family, Poisson):
            if grand == 0:
                gamma = math.inf
            else:
                gamma = _positive_part_ratio(p * grand, math.fsum((y * y - grand / tau - grand * grand).tolist()))
        elif isinstance(family, LocationScaleFamily):
            nu0 = family.variate_variance

            spread = math.fsum(((y - grand) ** 2).tolist()) / (p - 1) if p > 1 else 0.0

            gamma = _positive_part_ratio(nu0, spread - nu0 * float(np.mean(1.0 / tau)))
        else:
            raise _unsupported(func, family, self.name)

        rule = ParamRule(gamma, grand)

        return self._result(data, rule, ure_param(data, rule, func))


def _binomial_loglik(y: FloatArray, tau: FloatArray) -> Callable[[float, float], float]:
    k = np.round(y * tau)

    def _loglik(gamma: float, mu: float) -> float:
        a, b = gamma * mu, gamma * (1.0 - mu)

        return float(np.sum(
            gammaln(a + k) + gammaln(b + tau - k) + gammaln(gamma)
            - gammaln(gamma + tau) - gammaln(a) - gammaln(b)
        ))

    return _loglik


def _poisson_loglik(y: FloatArray, tau: FloatArray) -> Callable[[float, float], float]:
    counts = y * tau

    def _loglik(gamma: float, mu: float) -> float:
        shape = gamma * mu

        return float(np.sum(
            shape * math.log(gamma) + gammaln(shape + counts)
            - (counts + shape) * np.log(tau + gamma) - gammaln(shape)
        ))

    return _loglik


def _normal_loglik(y: FloatArray, tau: FloatArray, nu0: float) -> Callable[[float, float], float]:
    def _loglik(gamma: float, mu: float) -> float:
        variance = nu0 / tau + nu0 / gamma

        return float(-0.5 * np.sum(np.log(variance) + (y - mu) ** 2 / variance))

    return _loglik


@dataclass
class EBMaximumLikelihood(Estimator):
    """
    Marginal maximum-likelihood estimates of the conjugate prior.

    Nelder-Mead runs on (log γ, logit μ) for binomial data, (log γ, log μ) for
    Poisson data and (log γ, μ) for location-scale data, from four fixed starts.
    """

    name = 'eb_ml'

    xatol: float = 1e-8
    fatol: float = 1e-10
    max_iter: int = 2000

    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        family, y, tau = data.family, data.y, data.tau

        to_mu: Callable[[float], float]
        from_mu: Callable[[float], float]

        if isinstance(family, Binomial):
            loglik = _binomial_loglik(y, tau)
            to_mu, from_mu = (lambda x: float(expit(x))), (lambda mu: float(logit(mu)))
            clamp = (_INTERIOR, 1.0 - _INTERIOR)
            mu_bounds = (-_LOG_BOUND, _LOG_BOUND)
        elif isinstance(family, Poisson):
            loglik = _poisson_loglik(y, tau)
            to_mu, from_mu = math.exp, math.log
            clamp = (_INTERIOR, math.inf)
            mu_bounds = (-_LOG_BOUND, _LOG_BOUND)
        elif isinstance(family, LocationScaleFamily):
            loglik = _normal_loglik(y, tau, family.variate_variance)
            to_mu, from_mu = float, float
            clamp = (-math.inf, math.inf)
            mu_bounds = (-math.inf, math.inf)
        else:
            raise _unsupported(func, family, self.name)

        def _objective(x: NDArray[np.float64]) -> float:
            with np.errstate(all='ignore'):
                value = -loglik(math.exp(x[0]), to_mu(x[1]))

            return value if math.isfinite(value) else math.inf

        m, q = data.grand_mean, float(np.median(y))

        starts = [
            (gamma0, float(np.clip(mu0, *clamp))) for mu0 in (m, q) for gamma0 in (0.5, 5.0)
        ]

        bounds = Bounds([-_LOG_BOUND, mu_bounds[0]], [_LOG_BOUND, mu_bounds[1]])

        best: tuple[float, NDArray[np.float64]] | None = None
        iterations = list[int]()

        for gamma0, mu0 in starts:
            result = minimize(
                _objective, np.array([math.log(gamma0), from_mu(mu0)]), method='Nelder-Mead', bounds=bounds,
                options=dict(xatol=self.xatol, fatol=self.fatol, maxiter=self.max_iter)
            )

            iterations.append(int(result.nit))

            if not result.success:
                logger.debug('eb_ml start (%g, %g) stopped early: %s', gamma0, mu0, result.message)

            if math.isfinite(result.fun) and (best is None or result.fun < best[0]):
                best = (float(result.fun), np.asarray(result.x, np.float64))

        if best is None:
            raise OptimizationFailedError(
                'No start reached a finite marginal likelihood for {family}!', func, family=str(family)
            )

        neg_loglik, x = best

        rule = ParamRule(math.exp(x[0]), to_mu(x[1]))

        return self._result(
            data, rule, ure_param(data, rule, func), log_likelihood=-neg_loglik, iterations=tuple(iterations)
        )
