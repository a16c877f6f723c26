"""Natural exponential families with quadratic variance function"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray
from stgpytools import FuncExceptT

from ..exceptions import DatasetError, DomainError, UnsupportedFamilyError
from ._abstract import HyperParams, NaturalExponentialFamily, QvfCoefficients, RegularityCheck

__all__ = [
    'Binomial',
    'Poisson',
    'NegBinomial',
    'Gamma',
    'GHS'
]

_INTEGRALITY_TOL = 1e-9


def _offending(mask: NDArray[np.bool_]) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(mask))


def _moment_check(name: str, values: NDArray[np.float64]) -> RegularityCheck:
    value = float(np.mean(values))

    return RegularityCheck(name, math.isfinite(value), detail=f'mean={value:.6g}')


class Binomial(NaturalExponentialFamily):
    """Y ~ Bin(n, θ)/n with τ = n."""

    name = 'binomial'
    domain = (0.0, 1.0)
    integral_tau = True

    @property
    def coefficients(self) -> QvfCoefficients:
        return QvfCoefficients(0.0, 1.0, -1.0)

    def validate_data(self, y: NDArray[np.float64], tau: NDArray[np.float64], func: FuncExceptT) -> None:
        if np.any((y < 0) | (y > 1)):
            raise DatasetError('binomial observations must lie in [0, 1]!', func)

        if np.any(np.abs(tau - np.round(tau)) > _INTEGRALITY_TOL):
            raise DatasetError('binomial tau must be integral trial counts!', func)

        successes = y * tau

        if np.any(np.abs(successes - np.round(successes)) > _INTEGRALITY_TOL):
            raise DatasetError('binomial y * tau must be an integral count of successes!', func)

    def _draw(
        self, theta: NDArray[np.float64], tau: NDArray[np.float64], rng: np.random.Generator
    ) -> NDArray[np.float64]:
        n = np.round(tau).astype(np.int64)

        return rng.binomial(n, theta) / tau

    def _regularity_checks(self, y: NDArray[np.float64], tau: NDArray[np.float64]) -> list[RegularityCheck]:
        bad = _offending(tau < 2)

        return [RegularityCheck('n_i >= 2 for all i', not bad, bad)]

    def to_hyperparams(self, gamma: float, mu: float) -> HyperParams:
        return HyperParams(gamma * mu, gamma * (1.0 - mu), gamma, mu)

    def from_hyperparams(self, alpha: float, beta_or_lambda: float) -> HyperParams:
        gamma = alpha + beta_or_lambda

        return HyperParams(alpha, beta_or_lambda, gamma, alpha / gamma)


class Poisson(NaturalExponentialFamily):
    """Y ~ Poi(τθ)/τ."""

    name = 'poisson'
    domain = (0.0, math.inf)

    @property
    def coefficients(self) -> QvfCoefficients:
        return QvfCoefficients(0.0, 1.0, 0.0)

    def validate_data(self, y: NDArray[np.float64], tau: NDArray[np.float64], func: FuncExceptT) -> None:
        if np.any(y < 0):
            raise DatasetError('poisson observations must be non-negative!', func)

    def _draw(
        self, theta: NDArray[np.float64], tau: NDArray[np.float64], rng: np.random.Generator
    ) -> NDArray[np.float64]:
        return rng.poisson(tau * theta) / tau

    def _regularity_checks(self, y: NDArray[np.float64], tau: NDArray[np.float64]) -> list[RegularityCheck]:
        bad = _offending(tau * y <= 0)

        return [
            RegularityCheck(
                '(i) inf tau_i > 0 and inf tau_i * theta_i > 0 (y as proxy)', not bad, bad,
                'zero counts are flagged even when the population condition holds' if bad else ''
            ),
            _moment_check('(ii) sum theta_i^3 = O(p) (y as proxy)', y ** 3)
        ]

    def to_hyperparams(self, gamma: float, mu: float) -> HyperParams:
        lambda_ = math.inf if gamma == 0 else 1.0 / gamma

        return HyperParams(mu * gamma, lambda_, gamma, mu)

    def from_hyperparams(self, alpha: float, beta_or_lambda: float) -> HyperParams:
        return HyperParams(alpha, beta_or_lambda, 1.0 / beta_or_lambda, alpha * beta_or_lambda)


class NegBinomial(NaturalExponentialFamily):
    """
    Y ~ NBin(n, p)/n with τ = n and θ = p/(1 - p).

    NBin counts the successes before the n-th failure, success probability p,
    so that E[Y] = θ and Var[Y] = (θ + θ²)/n.
    """

    name = 'neg_binomial'
    domain = (0.0, math.inf)
    integral_tau = True

    @property
    def coefficients(self) -> QvfCoefficients:
        return QvfCoefficients(0.0, 1.0, 1.0)

    def validate_data(self, y: NDArray[np.float64], tau: NDArray[np.float64], func: FuncExceptT) -> None:
        if np.any(y < 0):
            raise DatasetError('negative binomial observations must be non-negative!', func)

    def _draw(
        self, theta: NDArray[np.float64], tau: NDArray[np.float64], rng: np.random.Generator
    ) -> NDArray[np.float64]:
        n = np.round(tau).astype(np.int64)

        # numpy counts failures before n successes, so hand it the failure probability
        return rng.negative_binomial(n, 1.0 / (1.0 + theta)) / tau

    def _regularity_checks(self, y: NDArray[np.float64], tau: NDArray[np.float64]) -> list[RegularityCheck]:
        bad = _offending(tau * y / (1.0 + y) <= 0)

        return [
            RegularityCheck('(i) inf n_i * p_i > 0 (y as proxy)', not bad, bad),
            _moment_check('(ii) sum (p_i/(1-p_i))^4 = O(p) (y as proxy)', y ** 4)
        ]

    def to_hyperparams(self, gamma: float, mu: float) -> HyperParams:
        return HyperParams(mu * gamma, gamma + 1.0, gamma, mu)

    def from_hyperparams(self, alpha: float, beta_or_lambda: float) -> HyperParams:
        if beta_or_lambda <= 1:
            raise DomainError('beta must exceed 1 for the prior mean to exist!', self.from_hyperparams)

        return HyperParams(alpha, beta_or_lambda, beta_or_lambda - 1.0, alpha / (beta_or_lambda - 1.0))


class _ShapeFamily(NaturalExponentialFamily):
    alpha: float

    def __init__(self, alpha: float = 1.0) -> None:
        if not alpha > 0:
            raise DomainError('alpha must be positive, got {alpha}!', self.__class__, alpha=alpha)

        self.alpha = float(alpha)

    def __str__(self) -> str:
        return f'{self.name}(alpha={self.alpha:g})'

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(alpha={self.alpha!r})'

    def _regularity_checks(self, y: NDArray[np.float64], tau: NDArray[np.float64]) -> list[RegularityCheck]:
        return [
            RegularityCheck('(i) inf tau_i > 0', bool(np.all(tau > 0)), _offending(tau <= 0)),
            _moment_check('(ii) sum lambda_i^4 = O(p) (y/alpha as proxy)', (y / self.alpha) ** 4)
        ]


class Gamma(_ShapeFamily):
    """Y ~ Γ(τα, λ)/τ with θ = αλ (shape τα, scale λ)."""

    name = 'gamma'
    domain = (0.0, math.inf)

    @property
    def coefficients(self) -> QvfCoefficients:
        return QvfCoefficients(0.0, 0.0, 1.0 / self.alpha)

    def validate_data(self, y: NDArray[np.float64], tau: NDArray[np.float64], func: FuncExceptT) -> None:
        if np.any(y < 0):
            raise DatasetError('gamma observations must be non-negative!', func)

    def _draw(
        self, theta: NDArray[np.float64], tau: NDArray[np.float64], rng: np.random.Generator
    ) -> NDArray[np.float64]:
        return rng.gamma(tau * self.alpha, theta / self.alpha) / tau

    def to_hyperparams(self, gamma: float, mu: float) -> HyperParams:
        alpha0 = gamma * self.alpha + 1.0

        return HyperParams(alpha0, mu * gamma, gamma, mu)

    def from_hyperparams(self, alpha: float, beta_or_lambda: float) -> HyperParams:
        if alpha <= 1:
            raise DomainError('alpha0 must exceed 1 for the prior mean to exist!', self.from_hyperparams)

        return HyperParams(
            alpha, beta_or_lambda, (alpha - 1.0) / self.alpha, self.alpha * beta_or_lambda / (alpha - 1.0)
        )


class GHS(_ShapeFamily):
    """Generalized hyperbolic secant family; only its variance function is available."""

    name = 'ghs'

    @property
    def coefficients(self) -> QvfCoefficients:
        return QvfCoefficients(self.alpha, 0.0, 1.0 / self.alpha)

    def _draw(
        self, theta: NDArray[np.float64], tau: NDArray[np.float64], rng: np.random.Generator
    ) -> NDArray[np.float64]:
        raise UnsupportedFamilyError(self.sample_many, self, 'Sampling from the {family} family is not supported!')
