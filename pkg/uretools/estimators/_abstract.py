from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar, TypeAlias

import numpy as np
from numpy.typing import ArrayLike
from stgpytools import CustomValueError, FuncExceptT, inject_self

from ..exceptions import DimensionMismatchError, UnknownEstimatorError, UnsupportedFamilyError
from ..families import HyperParams, QvfFamily, check_regularity
from ..types import Dataset, FloatArray, ParamRule, RuleT

__all__ = [
    'FitResult',

    'Estimator', 'EstimatorT',

    'list_estimators'
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Estimates of one fitter together with the rule that produced them."""

    estimates: FloatArray
    """θ̂, reproducing ``rule.apply(data)`` exactly when a rule is present."""

    rule: RuleT | None
    """Shrinkage rule, ``None`` for estimators that are not of the (b, μ) form."""

    objective_value: float
    """URE of the rule (or the exact risk for the oracle); ``nan`` when undefined."""

    estimator: str
    family: QvfFamily
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        estimates = np.array(self.estimates, np.float64)
        estimates.setflags(write=False)

        object.__setattr__(self, 'estimates', estimates)

    @property
    def hyperparams(self) -> HyperParams:
        """Conjugate prior hyper-parameters implied by a parametric rule."""

        if not isinstance(self.rule, ParamRule):
            raise UnsupportedFamilyError(
                FitResult, self.family, 'The "{estimator}" fit has no parametric rule to map!',
                estimator=self.estimator
            )

        return self.family.to_hyperparams(self.rule.gamma, self.rule.mu)


@dataclass
class Estimator(ABC):
    """Abstract shrinkage estimator, fitted on a :py:class:`Dataset`."""

    name: ClassVar[str]
    """Registry name used by :py:meth:`from_param` and the command line."""

    requires_truth: ClassVar[bool] = False

    check: bool = field(default=False, kw_only=True)
    """Emit a :py:class:`RegularityWarning` for each failed regularity condition before fitting."""

    @classmethod
    def from_param(
        cls, estimator: EstimatorT, func_except: FuncExceptT | None = None, **kwargs: Any
    ) -> Estimator:
        """
        Resolve an estimator from an instance, a class or a registry name.

        :param estimator:       Estimator instance, class or name (``"sm"``, ``"eb-ml"``, ...).
        :param func_except:     Function reported as the error origin.
        :param kwargs:          Options forwarded to the constructor.

        :return:                Estimator instance.
        """
        if isinstance(estimator, Estimator):
            return estimator

        if isinstance(estimator, type) and issubclass(estimator, Estimator):
            return estimator(**kwargs)

        search_str = str(estimator).lower().strip().replace('-', '_')

        for estimator_cls in _concrete_estimators():
            if estimator_cls.name == search_str:
                return estimator_cls(**kwargs)

        raise UnknownEstimatorError(func_except or cls.from_param, str(estimator))

    @inject_self
    def fit(self, data: Dataset, truth: ArrayLike | None = None, func: FuncExceptT | None = None) -> FitResult:
        """
        Fit the estimator.

        :param data:    Observations and their τ.
        :param truth:   True means, only used by estimators that require them.
        :param func:    Function reported as the error origin.

        :return:        Estimates and the fitted rule.
        """

        func = func or self.fit

        if self.check:
            check_regularity(data, warn=True)

        truth_array: FloatArray | None = None

        if truth is not None:
            truth_array = np.asarray(truth, np.float64).ravel()

            if truth_array.size != data.p:
                raise DimensionMismatchError(func, data.p, truth_array.size)
        elif self.requires_truth:
            raise CustomValueError('The "{name}" estimator needs the true means!', func, name=self.name)

        result = self._fit(data, truth_array, func)

        logger.debug('%s on %s (p=%d): objective=%.6g', self.name, data.family, data.p, result.objective_value)

        return result

    @abstractmethod
    def _fit(self, data: Dataset, truth: FloatArray | None, func: FuncExceptT) -> FitResult:
        ...

    def _result(
        self, data: Dataset, rule: RuleT | None, objective_value: float,
        estimates: FloatArray | None = None, **diagnostics: Any
    ) -> FitResult:
        if estimates is None:
            assert rule is not None

            estimates = rule.apply(data)

        return FitResult(estimates, rule, objective_value, self.name, data.family, diagnostics)


EstimatorT: TypeAlias = Estimator | type[Estimator] | str


def _concrete_estimators() -> list[type[Estimator]]:
    def _all_subclasses(cls: type[Estimator] = Estimator) -> set[type[Estimator]]:
        return set(cls.__subclasses__()).union(s for c in cls.__subclasses__() for s in _all_subclasses(c))

    return sorted((s for s in _all_subclasses() if 'name' in s.__dict__), key=lambda s: s.name)


def list_estimators() -> list[str]:
    """Registry names of every estimator."""

    return [estimator.name for estimator in _concrete_estimators()]
