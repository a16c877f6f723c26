from __future__ import annotations

import math
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, ClassVar, NamedTuple, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray
from stgpytools import FuncExceptT

from ..exceptions import DomainError, RegularityWarning, UnknownFamilyError, UnsupportedFamilyError

if TYPE_CHECKING:
    from ..types import Dataset

__all__ = [
    'QvfCoefficients', 'HyperParams',

    'RegularityCheck', 'RegularityReport',

    'QvfFamily', 'FamilyT',

    'NaturalExponentialFamily', 'LocationScaleFamily',

    'list_families', 'check_regularity'
]


class QvfCoefficients(NamedTuple):
    """Coefficients of the quadratic variance function V(θ) = ν₀ + ν₁θ + ν₂θ²."""

    nu0: float
    nu1: float
    nu2: float

    def __call__(self, theta: ArrayLike) -> NDArray[np.float64]:
        theta = np.asarray(theta, np.float64)

        return self.nu0 + self.nu1 * theta + self.nu2 * theta * theta


@dataclass(frozen=True)
class HyperParams:
    """Conjugate prior hyper-parameters together with the shrinkage parameterization they induce."""

    alpha: float
    beta_or_lambda: float
    gamma: float
    mu: float


@dataclass(frozen=True)
class RegularityCheck:
    name: str
    passed: bool
    indices: tuple[int, ...] = ()
    detail: str = ''

    def __str__(self) -> str:
        status = 'pass' if self.passed else 'FAIL'
        offending = f' offending indices: {list(self.indices)}' if self.indices else ''

        return f'[{status}] {self.name}' + (f' ({self.detail})' if self.detail else '') + offending


@dataclass(frozen=True)
class RegularityReport:
    """Advisory result of checking a dataset against its family's regularity conditions."""

    family: str
    checks: tuple[RegularityCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> tuple[RegularityCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)

    def warn(self, stacklevel: int = 3) -> None:
        for check in self.failed:
            warnings.warn(f'{self.family}: {check}', RegularityWarning, stacklevel=stacklevel)

    def __str__(self) -> str:
        return '\n'.join([f'regularity report for {self.family}', *(f'  {check}' for check in self.checks)])


def _finite_statistic(name: str, value: float) -> RegularityCheck:
    return RegularityCheck(name, math.isfinite(value), detail=f'value={value:.6g}')


class QvfFamily(ABC):
    """Abstract distribution family whose variance is a quadratic function of its mean."""

    name: ClassVar[str]
    """Registry name used by :py:meth:`from_param` and the command line."""

    domain: ClassVar[tuple[float, float]] = (-math.inf, math.inf)
    """Closure of the mean domain Θ."""

    integral_tau: ClassVar[bool] = False
    """Whether τ is a count (number of trials/failures)."""

    @property
    @abstractmethod
    def coefficients(self) -> QvfCoefficients:
        ...

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}()'

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QvfFamily) and repr(self) == repr(other)

    def __hash__(self) -> int:
        return hash(repr(self))

    @classmethod
    def from_param(cls, family: FamilyT, func_except: FuncExceptT | None = None, **kwargs: Any) -> QvfFamily:
        """
        Resolve a family from an instance, a class or a registry name.

        :param family:          Family instance, class or name (``"binomial"``, ``"gamma"``, ...).
        :param func_except:     Function reported as the error origin.
        :param kwargs:          Shape constants forwarded to the constructor (``alpha``, ``df``).

        :return:                Family instance.
        """
        if isinstance(family, QvfFamily):
            return family

        if isinstance(family, type) and issubclass(family, QvfFamily):
            return family(**kwargs)

        search_str = str(family).lower().strip().replace('-', '_')

        for family_cls in _concrete_families():
            if family_cls.name == search_str:
                return family_cls(**kwargs)

        raise UnknownFamilyError(func_except or cls.from_param, str(family))

    def in_domain(self, theta: ArrayLike) -> NDArray[np.bool_]:
        lo, hi = self.domain
        theta = np.asarray(theta, np.float64)

        return (theta >= lo) & (theta <= hi)

    def mean_interval(self, max_abs: float) -> tuple[float, float]:
        """Constraint interval [-max_abs, max_abs] ∩ Θ for a shrinkage location."""

        lo, hi = self.domain

        return max(-max_abs, lo), min(max_abs, hi)

    def variance(self, theta: ArrayLike, func: FuncExceptT | None = None) -> NDArray[np.float64]:
        """V(θ) = ν₀ + ν₁θ + ν₂θ² evaluated from the stored coefficients."""

        theta = np.asarray(theta, np.float64)

        if not np.all(self.in_domain(theta)):
            raise DomainError(
                'theta lies outside the mean domain {domain}!', func or self.variance, domain=self.domain
            )

        return self.coefficients(theta)

    def unbiased_variance_term(
        self, y: ArrayLike, tau: ArrayLike, func: FuncExceptT | None = None
    ) -> NDArray[np.float64]:
        """
        Unbiased estimate of Var(Y) = V(θ)/τ, computed as V(Y)/(τ + ν₂).

        :param y:       Observation(s).
        :param tau:     Convolution parameter(s).

        :return:        V(y)/(τ + ν₂), broadcast over the inputs.
        """
        y, tau = np.asarray(y, np.float64), np.asarray(tau, np.float64)

        denom = tau + self.coefficients.nu2

        if np.any(denom <= 0):
            raise DomainError(
                'tau + nu2 must be positive, got {bad}!', func or self.unbiased_variance_term,
                bad=np.unique(denom[denom <= 0]).tolist()
            )

        return self.coefficients(y) / denom

    def validate_point(self, theta: ArrayLike, tau: ArrayLike, func: FuncExceptT | None = None) -> None:
        func = func or self.validate_point

        theta, tau = np.asarray(theta, np.float64), np.asarray(tau, np.float64)

        if not np.all(self.in_domain(theta)):
            raise DomainError('theta lies outside the mean domain {domain}!', func, domain=self.domain)

        if np.any(~np.isfinite(tau)) or np.any(tau <= 0):
            raise DomainError('tau must be finite and positive!', func)

        if self.integral_tau and np.any(tau != np.round(tau)):
            raise DomainError('tau must be a positive integer for the {family} family!', func, family=self.name)

    def validate_data(self, y: NDArray[np.float64], tau: NDArray[np.float64], func: FuncExceptT) -> None:
        """Family-specific dataset invariants; the generic ones are checked by :py:class:`Dataset`."""

    def sample(self, theta: float, tau: float, rng: np.random.Generator) -> float:
        """One draw of Y with E[Y] = θ and Var[Y] = V(θ)/τ."""

        return float(self.sample_many(np.array([theta]), np.array([tau]), rng)[0])

    def sample_many(self, theta: ArrayLike, tau: ArrayLike, rng: np.random.Generator) -> NDArray[np.float64]:
        theta, tau = np.broadcast_arrays(np.asarray(theta, np.float64), np.asarray(tau, np.float64))

        self.validate_point(theta, tau, self.sample_many)

        return np.asarray(self._draw(theta, tau, rng), np.float64)

    @abstractmethod
    def _draw(
        self, theta: NDArray[np.float64], tau: NDArray[np.float64], rng: np.random.Generator
    ) -> NDArray[np.float64]:
        ...

    def check_regularity(self, data: Dataset) -> RegularityReport:
        y, tau = data.y, data.tau

        denom = tau + self.coefficients.nu2
        bad = tuple(int(i) for i in np.flatnonzero(denom <= 0))

        checks = [
            RegularityCheck('tau + nu2 > 0 (unbiased variance term defined)', not bad, bad),
            *self._regularity_checks(y, tau)
        ]

        return RegularityReport(str(self), tuple(checks))

    def _regularity_checks(self, y: NDArray[np.float64], tau: NDArray[np.float64]) -> list[RegularityCheck]:
        return []

    def to_hyperparams(self, gamma: float, mu: float) -> HyperParams:
        """Map a shrinkage pair (γ, μ) back to the conjugate prior's hyper-parameters."""

        raise UnsupportedFamilyError(self.to_hyperparams, self, 'The {family} family has no conjugate prior mapping!')

    def from_hyperparams(self, alpha: float, beta_or_lambda: float) -> HyperParams:
        """Map conjugate prior hyper-parameters to the shrinkage pair (γ, μ)."""

        raise UnsupportedFamilyError(
            self.from_hyperparams, self, 'The {family} family has no conjugate prior mapping!'
        )


class NaturalExponentialFamily(QvfFamily, ABC):
    """One of the six natural exponential families with quadratic variance function."""


class LocationScaleFamily(QvfFamily, ABC):
    """Location-scale family Y = θ + Z/√τ with a standard variate Z of mean 0 and variance ν₀."""

    tail_exponent: ClassVar[float] = math.inf
    """Polynomial tail exponent α of P(|Z| > t) ≤ D t^-α; ``inf`` for exponentially light tails."""

    @property
    @abstractmethod
    def variate_variance(self) -> float:
        ...

    @property
    def coefficients(self) -> QvfCoefficients:
        return QvfCoefficients(self.variate_variance, 0.0, 0.0)

    @abstractmethod
    def standard_variate(self, rng: np.random.Generator, size: int | tuple[int, ...]) -> NDArray[np.float64]:
        ...

    def _draw(
        self, theta: NDArray[np.float64], tau: NDArray[np.float64], rng: np.random.Generator
    ) -> NDArray[np.float64]:
        return theta + self.standard_variate(rng, theta.shape) / np.sqrt(tau)

    def _get_tail_exponent(self) -> float:
        return self.tail_exponent

    def _regularity_checks(self, y: NDArray[np.float64], tau: NDArray[np.float64]) -> list[RegularityCheck]:
        alpha = self._get_tail_exponent()

        return [
            _finite_statistic('(i) mean of 1/tau^2 bounded', float(np.mean(1.0 / tau ** 2))),
            _finite_statistic('(ii) mean of theta^2/tau bounded (y as proxy)', float(np.mean(y ** 2 / tau))),
            _finite_statistic('(iii) mean of |theta|^3 bounded (y as proxy)', float(np.mean(np.abs(y) ** 3))),
            RegularityCheck('(iv) tail bound P(|Z|>t) <= D t^-alpha with alpha > 4', alpha > 4, detail=f'alpha={alpha}')
        ]

    def to_hyperparams(self, gamma: float, mu: float) -> HyperParams:
        lambda_ = math.inf if gamma == 0 else self.variate_variance / gamma

        return HyperParams(mu, lambda_, gamma, mu)

    def from_hyperparams(self, alpha: float, beta_or_lambda: float) -> HyperParams:
        gamma = math.inf if beta_or_lambda == 0 else self.variate_variance / beta_or_lambda

        return HyperParams(alpha, beta_or_lambda, gamma, alpha)


FamilyT: TypeAlias = QvfFamily | type[QvfFamily] | str


def _concrete_families() -> list[type[QvfFamily]]:
    def _all_subclasses(cls: type[QvfFamily] = QvfFamily) -> set[type[QvfFamily]]:
        return set(cls.__subclasses__()).union(s for c in cls.__subclasses__() for s in _all_subclasses(c))

    return sorted((s for s in _all_subclasses() if 'name' in s.__dict__), key=lambda s: s.name)


def list_families() -> list[str]:
    """Registry names of every concrete family."""

    return [family.name for family in _concrete_families()]


def check_regularity(data: Dataset, warn: bool = False) -> RegularityReport:
    """
    Check a dataset against the regularity conditions of its family.

    Conditions involving θ use the observations as a proxy. The result is advisory:
    nothing downstream refuses to run on a failed report.

    :param data:    Dataset to check.
    :param warn:    Emit a :py:class:`RegularityWarning` per failed condition.

    :return:        Report with one entry per condition and the offending indices.
    """
    report = data.family.check_regularity(data)

    if warn:
        report.warn()

    return report
