from __future__ import annotations

from numpy.typing import ArrayLike

from ..types import Dataset
from ._abstract import FitResult
from ._classic import GrandMean, JamesStein, Naive
from ._eb import EBMaximumLikelihood, EBMoments
from ._oracle import Oracle
from ._ure import ParametricGrandURE, ParametricURE, SemiparametricGrandURE, SemiparametricURE

__all__ = [
    'fit_semi', 'fit_semi_grand',
    'fit_param', 'fit_param_grand',

    'fit_eb_mm', 'fit_eb_ml',

    'fit_james_stein', 'fit_naive', 'fit_grand_mean',

    'fit_oracle'
]


def fit_semi(data: Dataset, mu_grid_size: int = 201) -> FitResult:
    return SemiparametricURE(mu_grid_size=mu_grid_size, check=True).fit(data, func=fit_semi)


def fit_semi_grand(data: Dataset) -> FitResult:
    return SemiparametricGrandURE(check=True).fit(data, func=fit_semi_grand)


def fit_param(data: Dataset) -> FitResult:
    return ParametricURE(check=True).fit(data, func=fit_param)


def fit_param_grand(data: Dataset) -> FitResult:
    return ParametricGrandURE(check=True).fit(data, func=fit_param_grand)


def fit_eb_mm(data: Dataset) -> FitResult:
    return EBMoments(check=True).fit(data, func=fit_eb_mm)


def fit_eb_ml(data: Dataset) -> FitResult:
    return EBMaximumLikelihood(check=True).fit(data, func=fit_eb_ml)


def fit_james_stein(data: Dataset, literal: bool = False) -> FitResult:
    return JamesStein(literal=literal, check=True).fit(data, func=fit_james_stein)


def fit_naive(data: Dataset) -> FitResult:
    return Naive(check=True).fit(data, func=fit_naive)


def fit_grand_mean(data: Dataset) -> FitResult:
    return GrandMean(check=True).fit(data, func=fit_grand_mean)


def fit_oracle(data: Dataset, truth: ArrayLike) -> FitResult:
    return Oracle(check=True).fit(data, truth, func=fit_oracle)
