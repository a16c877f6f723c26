"""Generators of (θᵢ, τᵢ) populations for the risk experiments."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Callable, TypeAlias

import numpy as np
from numpy.typing import NDArray
from stgpytools import FuncExceptT

from ..exceptions import UnknownScenarioError
from ..families import (
    Binomial, Laplace, LocationScaleFamily, Logistic, Normal, Poisson, QvfFamily, StudentT, UniformLS
)

__all__ = [
    'ScenarioSpec', 'ScenarioT',

    'get_scenario', 'list_scenarios'
]

_Params: TypeAlias = tuple[NDArray[np.float64], NDArray[np.float64]]

ParamSampler: TypeAlias = Callable[[np.random.Generator, int], _Params]
"""Draws (θ, τ) for p units."""

LOCATION_SCALE_ESTIMATORS = ('naive', 'js', 'sm')
NEF_ESTIMATORS = ('oracle', 'eb_ml', 'eb_mm', 'pm', 'sm')


@dataclass(frozen=True)
class ScenarioSpec:
    """One simulation setup: a (θ, τ) generator, the family estimators assume and the family Y is drawn from."""

    id: str
    family: QvfFamily
    draw_params: ParamSampler = field(repr=False)
    sampler: QvfFamily | None = None
    """Family Y is drawn from when it differs from ``family``."""

    default_estimators: tuple[str, ...] = ()
    description: str = ''

    @property
    def misspecified(self) -> bool:
        return self.sampler is not None

    def draw(
        self, rng: np.random.Generator, p: int
    ) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        """Draw (θ, τ, Y) for ``p`` units from one stream."""

        theta, tau = self.draw_params(rng, p)

        y = (self.sampler or self.family).sample_many(theta, tau, rng)

        return theta, tau, y


ScenarioT: TypeAlias = ScenarioSpec | str


def _from_variances(a: NDArray[np.float64], theta: NDArray[np.float64]) -> _Params:
    return theta, 1.0 / a


def _independent_normal(rng: np.random.Generator, p: int) -> _Params:
    a = rng.uniform(0.1, 1.0, p)

    return _from_variances(a, rng.standard_normal(p))


def _location_equals_scale(rng: np.random.Generator, p: int) -> _Params:
    a = rng.uniform(0.1, 1.0, p)

    return _from_variances(a, a.copy())


def _two_groups_normal(rng: np.random.Generator, p: int) -> _Params:
    a = np.where(rng.random(p) < 0.5, 0.1, 0.5)

    # θ | A = 0.1 ~ N(2, 0.1) and θ | A = 0.5 ~ N(0, 0.5), second argument a variance
    theta = np.where(a == 0.1, 2.0, 0.0) + np.sqrt(a) * rng.standard_normal(p)

    return _from_variances(a, theta)


def _small_counts(rng: np.random.Generator, p: int) -> NDArray[np.float64]:
    return (rng.poisson(3.0, p) + 2).astype(np.float64)


def _mixed_counts(rng: np.random.Generator, p: int) -> tuple[NDArray[np.bool_], NDArray[np.float64]]:
    group = rng.random(p) < 0.5

    large, small = rng.poisson(10.0, p), rng.poisson(1.0, p)

    return group, (np.where(group, large, small) + 2).astype(np.float64)


def _beta_uniform(rng: np.random.Generator, p: int) -> _Params:
    tau = _small_counts(rng, p)

    return rng.beta(1.0, 1.0, p), tau


def _beta_bimodal(rng: np.random.Generator, p: int) -> _Params:
    tau = _small_counts(rng, p)

    low, high = rng.beta(1.0, 3.0, p), rng.beta(3.0, 1.0, p)

    return np.where(rng.random(p) < 0.5, low, high), tau


def _inverse_count(rng: np.random.Generator, p: int) -> _Params:
    tau = _small_counts(rng, p)

    return 1.0 / tau, tau


def _beta_grouped(rng: np.random.Generator, p: int) -> _Params:
    group, tau = _mixed_counts(rng, p)

    low, high = rng.beta(1.0, 3.0, p), rng.beta(3.0, 1.0, p)

    return np.where(group, low, high), tau


def _gamma_exponential(rng: np.random.Generator, p: int) -> _Params:
    tau = _small_counts(rng, p)

    return rng.gamma(1.0, 1.0, p), tau


def _uniform_rates(rng: np.random.Generator, p: int) -> _Params:
    tau = _small_counts(rng, p)

    return rng.uniform(0.1, 1.0, p), tau


def _gamma_grouped(rng: np.random.Generator, p: int) -> _Params:
    group, tau = _mixed_counts(rng, p)

    low, high = rng.gamma(1.0, 1.0, p), rng.gamma(5.0, 1.0, p)

    return np.where(group, low, high), tau


def _location_scale_scenarios(prefix: str, family: LocationScaleFamily) -> list[ScenarioSpec]:
    spec = partial(ScenarioSpec, family=family, default_estimators=LOCATION_SCALE_ESTIMATORS)

    return [
        spec(f'{prefix}-1', draw_params=_independent_normal, description='A ~ Unif(0.1, 1), theta ~ N(0, 1)'),
        spec(f'{prefix}-2', draw_params=_location_equals_scale, description='A ~ Unif(0.1, 1), theta = A'),
        spec(
            f'{prefix}-3', draw_params=_two_groups_normal,
            description='A in {0.1, 0.5}, theta | 0.1 ~ N(2, 0.1), theta | 0.5 ~ N(0, 0.5)'
        ),
        spec(
            f'{prefix}-4', draw_params=_location_equals_scale, sampler=UniformLS(family),
            description='as scenario 2, Y uniform with matching variance'
        )
    ]


def _build_registry() -> dict[str, ScenarioSpec]:
    binomial, poisson = Binomial(), Poisson()

    nef = [
        (binomial, 'binomial-ex1', _beta_uniform, 'tau ~ Poi(3) + 2, theta ~ Beta(1, 1)'),
        (binomial, 'binomial-ex2', _beta_bimodal, 'tau ~ Poi(3) + 2, theta ~ Beta(1, 3)/Beta(3, 1) mixture'),
        (binomial, 'binomial-ex3', _inverse_count, 'tau ~ Poi(3) + 2, theta = 1/tau'),
        (binomial, 'binomial-ex4', _beta_grouped, 'two groups, tau ~ Poi(10|1) + 2, theta ~ Beta(1, 3|3, 1)'),
        (poisson, 'poisson-ex5', _gamma_exponential, 'tau ~ Poi(3) + 2, theta ~ Gamma(1, 1)'),
        (poisson, 'poisson-ex6', _uniform_rates, 'tau ~ Poi(3) + 2, theta ~ Unif(0.1, 1)'),
        (poisson, 'poisson-ex7', _inverse_count, 'tau ~ Poi(3) + 2, theta = 1/tau'),
        (poisson, 'poisson-ex8', _gamma_grouped, 'two groups, tau ~ Poi(10|1) + 2, theta ~ Gamma(1|5, 1)')
    ]

    scenarios = [
        *_location_scale_scenarios('laplace', Laplace()),
        *_location_scale_scenarios('logistic', Logistic()),
        *_location_scale_scenarios('t7', StudentT(7.0)),
        *_location_scale_scenarios('normal', Normal()),
        *(
            ScenarioSpec(sid, family, sampler_fn, default_estimators=NEF_ESTIMATORS, description=description)
            for family, sid, sampler_fn, description in nef
        )
    ]

    return {scenario.id: scenario for scenario in scenarios}


_SCENARIOS = _build_registry()


def list_scenarios() -> list[str]:
    """Ids of every registered scenario."""

    return list(_SCENARIOS)


def get_scenario(scenario: ScenarioT, func_except: FuncExceptT | None = None) -> ScenarioSpec:
    if isinstance(scenario, ScenarioSpec):
        return scenario

    try:
        return _SCENARIOS[str(scenario).lower().strip()]
    except KeyError:
        raise UnknownScenarioError(func_except or get_scenario, str(scenario)) from None
