from __future__ import annotations

from typing import Any

from stgpytools import (
    CustomIndexError, CustomNotImplementedError, CustomRuntimeError, CustomValueError, FuncExceptT
)

__all__ = [
    'UnknownFamilyError',
    'UnknownEstimatorError',
    'UnknownScenarioError',

    'DomainError',
    'DimensionMismatchError',
    'DatasetError',
    'UnsupportedFamilyError',
    'OptimizationFailedError',
    'RecordError',

    'RegularityWarning'
]


class UnknownFamilyError(CustomValueError):
    """Raised when an unknown distribution family is passed."""

    def __init__(
        self, func: FuncExceptT, family: str,
        message: str = 'Unknown family "{family}"! Valid names: {valid}', **kwargs: Any
    ) -> None:
        from .families import list_families

        super().__init__(message, func, family=family, valid=', '.join(list_families()), **kwargs)


class UnknownEstimatorError(CustomValueError):
    """Raised when an unknown estimator name is passed."""

    def __init__(
        self, func: FuncExceptT, estimator: str,
        message: str = 'Unknown estimator "{estimator}"! Valid names: {valid}', **kwargs: Any
    ) -> None:
        from .estimators import list_estimators

        super().__init__(message, func, estimator=estimator, valid=', '.join(list_estimators()), **kwargs)


class UnknownScenarioError(CustomValueError):
    """Raised when an unknown simulation scenario id is passed."""

    def __init__(
        self, func: FuncExceptT, scenario: str,
        message: str = 'Unknown scenario "{scenario}"! Valid ids: {valid}', **kwargs: Any
    ) -> None:
        from .sim import list_scenarios

        super().__init__(message, func, scenario=scenario, valid=', '.join(list_scenarios()), **kwargs)


class DomainError(CustomValueError):
    """Raised when a value lies outside the domain an operation is defined on."""


class DimensionMismatchError(CustomIndexError):
    """Raised when paired vectors do not have the same length."""

    def __init__(
        self, func: FuncExceptT, expected: int, got: int,
        message: str = 'Length mismatch, expected {expected} values but got {got}!', **kwargs: Any
    ) -> None:
        super().__init__(message, func, expected=expected, got=got, **kwargs)


class DatasetError(CustomValueError):
    """Raised when a dataset violates its invariants."""


class UnsupportedFamilyError(CustomNotImplementedError):
    """Raised when an operation is not available for a family."""

    def __init__(
        self, func: FuncExceptT, family: Any,
        message: str = '"{family}" is not supported here!', **kwargs: Any
    ) -> None:
        super().__init__(message, func, family=str(family), **kwargs)


class OptimizationFailedError(CustomRuntimeError):
    """Raised when no optimizer start reached a finite objective."""


class RecordError(CustomValueError):
    """Raised when a batting record can't be parsed or is inconsistent."""


class RegularityWarning(UserWarning):
    """Emitted when a dataset fails an advisory regularity condition."""
