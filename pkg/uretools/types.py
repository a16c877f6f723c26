from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray
from stgpytools import FuncExceptT

from .exceptions import DatasetError, DimensionMismatchError, DomainError
from .families import FamilyT, QvfFamily

__all__ = [
    'FloatArray',

    'ParamPoint',
    'Dataset',

    'SemiRule', 'ParamRule', 'RuleT',

    'shrinkage_from_gamma'
]

FloatArray: TypeAlias = NDArray[np.float64]


def _frozen_array(values: ArrayLike) -> FloatArray:
    array = np.array(values, np.float64, ndmin=1)
    array.setflags(write=False)

    return array


@dataclass(frozen=True)
class ParamPoint:
    """A mean parameter θ together with its convolution parameter τ (A = 1/τ)."""

    theta: float
    tau: float

    def validate(self, family: QvfFamily, func: FuncExceptT | None = None) -> None:
        family.validate_point(self.theta, self.tau, func or self.validate)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Paired observations (Yᵢ, τᵢ) drawn from one quadratic-variance family."""

    y: FloatArray
    tau: FloatArray
    family: QvfFamily

    def __post_init__(self) -> None:
        y, tau = _frozen_array(self.y), _frozen_array(self.tau)

        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'tau', tau)

        if y.ndim != 1 or y.size < 1:
            raise DatasetError('A dataset needs at least one observation!', Dataset)

        if tau.shape != y.shape:
            raise DimensionMismatchError(Dataset, y.size, tau.size)

        if not np.all(np.isfinite(y)):
            raise DatasetError('All observations must be finite!', Dataset)

        if not np.all(np.isfinite(tau)) or np.any(tau <= 0):
            raise DatasetError('All tau must be finite and positive!', Dataset)

        self.family.validate_data(y, tau, Dataset)

    @classmethod
    def from_arrays(cls, y: ArrayLike, tau: ArrayLike, family: FamilyT, **family_kwargs: Any) -> Dataset:
        return cls(_frozen_array(y), _frozen_array(tau), QvfFamily.from_param(family, cls.from_arrays, **family_kwargs))

    def with_y(self, y: ArrayLike) -> Dataset:
        """Same τ and family, new observations."""

        return Dataset(_frozen_array(y), self.tau, self.family)

    @property
    def p(self) -> int:
        return int(self.y.size)

    @cached_property
    def grand_mean(self) -> float:
        return math.fsum(self.y.tolist()) / self.p

    @cached_property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.y)))

    @cached_property
    def variance_terms(self) -> FloatArray:
        """V(Yᵢ)/(τᵢ + ν₂) for every i."""

        terms = self.family.unbiased_variance_term(self.y, self.tau, 'Dataset.variance_terms')
        terms.setflags(write=False)

        return terms

    def mean_interval(self) -> tuple[float, float]:
        """[-max|Yᵢ|, max|Yᵢ|] ∩ Θ, the feasible set for a fitted shrinkage location."""

        return self.family.mean_interval(self.max_abs)


def shrinkage_from_gamma(gamma: float, tau: ArrayLike) -> FloatArray:
    """bᵢ = γ/(τᵢ + γ), with γ = ∞ meaning full shrinkage."""

    tau = np.asarray(tau, np.float64)

    if math.isinf(gamma):
        return np.ones_like(tau)

    return gamma / (tau + gamma)


@dataclass(frozen=True, eq=False)
class SemiRule:
    """θ̂ᵢ = (1 - bᵢ)Yᵢ + bᵢμ; ``grand`` marks μ as the data's grand mean."""

    b: FloatArray
    mu: float
    grand: bool = field(default=False, kw_only=True)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'b', _frozen_array(self.b))
        object.__setattr__(self, 'mu', float(self.mu))

    def shrinkage(self, tau: ArrayLike) -> FloatArray:
        return self.b

    def apply(self, data: Dataset, func: FuncExceptT | None = None) -> FloatArray:
        if self.b.size != data.p:
            raise DimensionMismatchError(func or self.apply, data.p, self.b.size)

        return (1.0 - self.b) * data.y + self.b * self.mu

    def is_monotone(self, tau: ArrayLike) -> bool:
        """Requirement (MON): τᵢ >= τⱼ implies bᵢ <= bⱼ."""

        tau = np.asarray(tau, np.float64)

        order = np.argsort(-tau, kind='stable')
        b_sorted, tau_sorted = self.b[order], tau[order]

        if np.any(np.diff(b_sorted) < 0):
            return False

        equal = np.diff(tau_sorted) == 0

        return bool(np.all(np.diff(b_sorted)[equal] == 0))


@dataclass(frozen=True)
class ParamRule:
    """θ̂ᵢ = τᵢ/(τᵢ + γ)·Yᵢ + γ/(τᵢ + γ)·μ; ``grand`` marks μ as the data's grand mean."""

    gamma: float
    mu: float
    grand: bool = field(default=False, kw_only=True)

    def __post_init__(self) -> None:
        if math.isnan(self.gamma) or self.gamma < 0:
            raise DomainError('gamma must be non-negative, got {gamma}!', ParamRule, gamma=self.gamma)

        object.__setattr__(self, 'gamma', float(self.gamma))
        object.__setattr__(self, 'mu', float(self.mu))

    def shrinkage(self, tau: ArrayLike) -> FloatArray:
        return shrinkage_from_gamma(self.gamma, tau)

    def apply(self, data: Dataset, func: FuncExceptT | None = None) -> FloatArray:
        b = self.shrinkage(data.tau)

        return (1.0 - b) * data.y + b * self.mu

    def to_semi(self, tau: ArrayLike) -> SemiRule:
        return SemiRule(self.shrinkage(tau), self.mu, grand=self.grand)


RuleT: TypeAlias = SemiRule | ParamRule
