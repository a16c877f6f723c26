from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from stgpytools import FuncExceptT

from .exceptions import DimensionMismatchError, DomainError
from .families import FamilyT, QvfFamily
from .types import Dataset, FloatArray, ParamRule, RuleT, SemiRule, shrinkage_from_gamma

__all__ = [
    'ure_semi', 'ure_grand',
    'ure_param', 'ure_param_grand',

    'evaluate_ure',

    'loss', 'param_risk'
]


def _mean(values: NDArray[np.float64]) -> float:
    return math.fsum(values.tolist()) / values.size


def _check_b(data: Dataset, b: ArrayLike, func: FuncExceptT) -> FloatArray:
    b = np.asarray(b, np.float64).ravel()

    if b.size != data.p:
        raise DimensionMismatchError(func, data.p, b.size)

    return b


def _check_gamma(gamma: float, func: FuncExceptT) -> float:
    gamma = float(gamma)

    if math.isnan(gamma) or gamma < 0:
        raise DomainError('gamma must be non-negative, got {gamma}!', func, gamma=gamma)

    return gamma


def _gamma_factors(gamma: float, tau: FloatArray) -> tuple[FloatArray, FloatArray]:
    # γ²/(τ + γ)² and (τ - γ)/(τ + γ), with γ = ∞ taken as the limit
    b = shrinkage_from_gamma(gamma, tau)

    if math.isinf(gamma):
        return b, -np.ones_like(tau)

    return b * b, (tau - gamma) / (tau + gamma)


def ure_semi(data: Dataset, rule: SemiRule, func: FuncExceptT | None = None) -> float:
    """
    URE(b, μ) = (1/p)Σ[bᵢ²(Yᵢ - μ)² + (1 - 2bᵢ)V(Yᵢ)/(τᵢ + ν₂)].

    Raw evaluation, ``rule.mu`` is not checked against the data.
    """

    b = _check_b(data, rule.b, func or ure_semi)

    return _mean(b * b * (data.y - rule.mu) ** 2 + (1.0 - 2.0 * b) * data.variance_terms)


def ure_grand(data: Dataset, b: ArrayLike, func: FuncExceptT | None = None) -> float:
    """URE^G(b) = (1/p)Σ[bᵢ²(Yᵢ - Ȳ)² + (1 - 2(1 - 1/p)bᵢ)V(Yᵢ)/(τᵢ + ν₂)]."""

    b = _check_b(data, b, func or ure_grand)

    factor = 1.0 - 1.0 / data.p

    return _mean(b * b * (data.y - data.grand_mean) ** 2 + (1.0 - 2.0 * factor * b) * data.variance_terms)


def ure_param(data: Dataset, rule: ParamRule, func: FuncExceptT | None = None) -> float:
    """
    URE^P(γ, μ) = (1/p)Σ[γ²/(τᵢ + γ)²(Yᵢ - μ)² + (τᵢ - γ)/(τᵢ + γ)·V(Yᵢ)/(τᵢ + ν₂)].

    γ = ∞ is evaluated as the limit, (Yᵢ - μ)² - V(Yᵢ)/(τᵢ + ν₂).
    """

    gamma = _check_gamma(rule.gamma, func or ure_param)

    first, second = _gamma_factors(gamma, data.tau)

    return _mean(first * (data.y - rule.mu) ** 2 + second * data.variance_terms)


def ure_param_grand(data: Dataset, gamma: float, func: FuncExceptT | None = None) -> float:
    """
    URE^PG(γ) = (1/p)Σ[γ²/(τᵢ + γ)²(Yᵢ - Ȳ)² + (1 - 2(1 - 1/p)γ/(τᵢ + γ))V(Yᵢ)/(τᵢ + ν₂)].
    """

    gamma = _check_gamma(gamma, func or ure_param_grand)

    b = shrinkage_from_gamma(gamma, data.tau)
    factor = 1.0 - 1.0 / data.p

    return _mean(b * b * (data.y - data.grand_mean) ** 2 + (1.0 - 2.0 * factor * b) * data.variance_terms)


def evaluate_ure(data: Dataset, rule: RuleT, func: FuncExceptT | None = None) -> float:
    """Dispatch a rule to the objective it minimizes."""

    func = func or evaluate_ure

    if isinstance(rule, SemiRule):
        return ure_grand(data, rule.b, func) if rule.grand else ure_semi(data, rule, func)

    return ure_param_grand(data, rule.gamma, func) if rule.grand else ure_param(data, rule, func)


def loss(theta: ArrayLike, estimates: ArrayLike, func: FuncExceptT | None = None) -> float:
    """Average squared error (1/p)Σ(θ̂ᵢ - θᵢ)²."""

    theta, estimates = np.asarray(theta, np.float64).ravel(), np.asarray(estimates, np.float64).ravel()

    if theta.size != estimates.size:
        raise DimensionMismatchError(func or loss, theta.size, estimates.size)

    return _mean((estimates - theta) ** 2)


def param_risk(
    family: FamilyT, theta: ArrayLike, tau: ArrayLike, gamma: float, mu: float, func: FuncExceptT | None = None
) -> float:
    """
    Exact finite-p risk of the parametric rule at a known θ.

    (1/p)Σ[τᵢ²/(τᵢ + γ)²·V(θᵢ)/τᵢ + γ²/(τᵢ + γ)²·(μ - θᵢ)²]

    :param family:      Family providing V.
    :param theta:       True means.
    :param tau:         Convolution parameters.
    :param gamma:       Shrinkage parameter, ``inf`` allowed.
    :param mu:          Shrinkage location.

    :return:            Risk of θ̂^{γ,μ}.
    """

    func = func or param_risk

    family = QvfFamily.from_param(family, func)
    theta, tau = np.asarray(theta, np.float64).ravel(), np.asarray(tau, np.float64).ravel()

    if theta.size != tau.size:
        raise DimensionMismatchError(func, theta.size, tau.size)

    b = shrinkage_from_gamma(_check_gamma(gamma, func), tau)

    return _mean((1.0 - b) ** 2 * family.variance(theta, func) / tau + b * b * (mu - theta) ** 2)
