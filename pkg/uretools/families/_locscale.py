"""Location-scale families Y = θ + Z/√τ"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

from ..exceptions import DomainError
from ._abstract import LocationScaleFamily, QvfFamily

__all__ = [
    'Normal',
    'Laplace',
    'Logistic',
    'StudentT',
    'UniformLS'
]


class Normal(LocationScaleFamily):
    """Standard normal variate, V ≡ 1."""

    name = 'normal'

    @property
    def variate_variance(self) -> float:
        return 1.0

    def standard_variate(self, rng: np.random.Generator, size: int | tuple[int, ...]) -> NDArray[np.float64]:
        return rng.standard_normal(size)


class Laplace(LocationScaleFamily):
    """Standard variate with density ½exp(-|z|), Var(Z) = 2."""

    name = 'laplace'

    @property
    def variate_variance(self) -> float:
        return 2.0

    def standard_variate(self, rng: np.random.Generator, size: int | tuple[int, ...]) -> NDArray[np.float64]:
        return rng.laplace(0.0, 1.0, size)


class Logistic(LocationScaleFamily):
    """Standard variate with density e^-z/(1 + e^-z)², Var(Z) = π²/3."""

    name = 'logistic'

    @property
    def variate_variance(self) -> float:
        return math.pi ** 2 / 3.0

    def standard_variate(self, rng: np.random.Generator, size: int | tuple[int, ...]) -> NDArray[np.float64]:
        return rng.logistic(0.0, 1.0, size)


class StudentT(LocationScaleFamily):
    """Student t variate with ``df`` degrees of freedom, Var(Z) = df/(df - 2)."""

    name = 'student_t'

    df: float

    def __init__(self, df: float = 7.0) -> None:
        if not df > 4:
            raise DomainError('student_t needs df > 4, got {df}!', self.__class__, df=df)

        self.df = float(df)

    def __str__(self) -> str:
        return f'{self.name}(df={self.df:g})'

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(df={self.df!r})'

    @property
    def variate_variance(self) -> float:
        return self.df / (self.df - 2.0)

    def _get_tail_exponent(self) -> float:
        return self.df

    def standard_variate(self, rng: np.random.Generator, size: int | tuple[int, ...]) -> NDArray[np.float64]:
        return rng.standard_t(self.df, size)


class UniformLS(LocationScaleFamily):
    """
    Mis-specification sampler: Y ~ Unif[θ - √(3A)σ, θ + √(3A)σ] with A = 1/τ.

    σ is the standard deviation of the nominal family's variate, so the first two
    moments (and with them every URE) match the nominal family exactly.
    """

    name = 'uniform_ls'

    nominal: LocationScaleFamily

    def __init__(self, nominal: LocationScaleFamily | str = 'normal') -> None:
        nominal = QvfFamily.from_param(nominal, self.__class__)

        if not isinstance(nominal, LocationScaleFamily) or isinstance(nominal, UniformLS):
            raise DomainError('uniform_ls needs a location-scale nominal family, got {nominal}!', self.__class__,
                              nominal=str(nominal))

        self.nominal = nominal

    def __str__(self) -> str:
        return f'{self.name}({self.nominal})'

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(nominal={self.nominal!r})'

    @property
    def variate_variance(self) -> float:
        return self.nominal.variate_variance

    def standard_variate(self, rng: np.random.Generator, size: int | tuple[int, ...]) -> NDArray[np.float64]:
        half_width = math.sqrt(3.0 * self.variate_variance)

        return rng.uniform(-half_width, half_width, size)
