from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._abstract import FamilyT, QvfFamily

if TYPE_CHECKING:
    from ..types import ParamPoint

__all__ = [
    'variance_function',
    'unbiased_variance_term',
    'sample'
]


def variance_function(family: FamilyT, theta: ArrayLike) -> NDArray[np.float64]:
    """V(θ) for the given family; raises :py:class:`DomainError` when θ is outside Θ."""

    return QvfFamily.from_param(family, variance_function).variance(theta, variance_function)


def unbiased_variance_term(family: FamilyT, y: ArrayLike, tau: ArrayLike) -> NDArray[np.float64]:
    """V(y)/(τ + ν₂), whose expectation is V(θ)/τ."""

    return QvfFamily.from_param(family, unbiased_variance_term).unbiased_variance_term(y, tau, unbiased_variance_term)


def sample(family: FamilyT, point: ParamPoint, rng: np.random.Generator) -> float:
    """One draw of Y at ``point`` using the family's sampler."""

    family = QvfFamily.from_param(family, sample)

    point.validate(family, sample)

    return family.sample(point.theta, point.tau, rng)
