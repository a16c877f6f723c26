"""
Half-season prediction of batting averages.

First-half records are used to estimate each player's ability and the estimates are
scored against the second half on the arcsine scale, where proportions with N at-bats
are approximately normal with variance 1/(4N).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray
from stgpytools import FileNotExistsError, FuncExceptT

from .estimators import Estimator, EstimatorT
from .exceptions import DatasetError, DimensionMismatchError, RecordError
from .families import Binomial, Normal
from .types import Dataset, FloatArray

__all__ = [
    'PlayerRecord',
    'EvaluationSet', 'HalfSeasonData',

    'load_records', 'write_records',

    'arcsin_transform', 'transform',

    'group_records',

    'tse', 'evaluate', 'emit_table',

    'GROUPS', 'BINOMIAL_ESTIMATORS', 'DEFAULT_ESTIMATORS'
]

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ('player', 'pitcher', 'H1', 'N1', 'H2', 'N2')

GROUPS = ('all', 'pitchers', 'nonpitchers')

BINOMIAL_ESTIMATORS = frozenset({'sm', 'sg', 'pm', 'pg'})
"""Fitted on first-half proportions under the binomial family, then mapped to the arcsine scale."""

DEFAULT_ESTIMATORS = ('naive', 'grand_mean', 'eb_mm', 'eb_ml', 'js', 'pg', 'pm', 'sg', 'sm')

_TRUE, _FALSE = frozenset({'1', 'true', 't', 'yes', 'y'}), frozenset({'0', 'false', 'f', 'no', 'n'})


@dataclass(frozen=True)
class PlayerRecord:
    """Hits and at-bats of one player in each half of the season."""

    player: str
    pitcher: bool
    h1: int
    n1: int
    h2: int
    n2: int

    def __post_init__(self) -> None:
        for hits, at_bats, half in ((self.h1, self.n1, 'first'), (self.h2, self.n2, 'second')):
            if not 0 <= hits <= at_bats:
                raise RecordError(
                    'Player "{player}" has {hits} hits in {at_bats} at-bats in the {half} half!', PlayerRecord,
                    player=self.player, hits=hits, at_bats=at_bats, half=half
                )


@dataclass(frozen=True, eq=False)
class EvaluationSet:
    """Second-half values of the players eligible for scoring."""

    index: NDArray[np.intp]
    """Positions in the estimation dataset."""

    x2: FloatArray
    n2: FloatArray
    size: int
    """Number of players in the estimation dataset."""

    @property
    def noise(self) -> float:
        """Σ 1/(4N₂ⱼ), the expected squared error of a perfect predictor."""

        return math.fsum((1.0 / (4.0 * self.n2)).tolist())


@dataclass(frozen=True, eq=False)
class HalfSeasonData:
    """First-half data on both scales together with the evaluation set."""

    players: tuple[str, ...]
    normal: Dataset
    """X₁ with τ = 4N₁ under the normal family."""

    binomial: Dataset
    """H₁/N₁ with τ = N₁ under the binomial family."""

    evaluation: EvaluationSet


def _parse_bool(value: str, line: int, func: FuncExceptT) -> bool:
    lowered = value.strip().lower()

    if lowered in _TRUE:
        return True

    if lowered in _FALSE:
        return False

    raise RecordError('Line {line}: can\'t read "{value}" as a pitcher flag!', func, line=line, value=value)


def _parse_count(value: str, column: str, line: int, func: FuncExceptT) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise RecordError(
            'Line {line}: column {column} must be an integer, got "{value}"!', func,
            line=line, column=column, value=value
        ) from None


def load_records(path: str | PathLike[str], func: FuncExceptT | None = None) -> list[PlayerRecord]:
    """
    Read batting records from a CSV file with the header ``player,pitcher,H1,N1,H2,N2``.

    :param path:    CSV file.

    :return:        One record per row, in file order.
    """

    func = func or load_records

    if not Path(path).is_file():
        raise FileNotExistsError('"{path}" is not an existing file!', func, path=str(path))

    frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)

    if tuple(frame.columns) != RECORD_COLUMNS:
        raise RecordError(
            'Line 1: expected the header {expected}, got {got}!', func,
            expected=','.join(RECORD_COLUMNS), got=','.join(map(str, frame.columns))
        )

    records = list[PlayerRecord]()

    for index, row in enumerate(frame.itertuples(index=False, name=None)):
        line = index + 2
        player, pitcher, h1, n1, h2, n2 = row

        if not player.strip():
            raise RecordError('Line {line}: missing player id!', func, line=line)

        records.append(PlayerRecord(
            player.strip(), _parse_bool(pitcher, line, func),
            *(_parse_count(value, column, line, func) for value, column in zip((h1, n1, h2, n2), RECORD_COLUMNS[2:]))
        ))

    logger.debug('read %d records from %s', len(records), path)

    return records


def write_records(records: Iterable[PlayerRecord], path: str | PathLike[str]) -> None:
    frame = pd.DataFrame(
        [(r.player, int(r.pitcher), r.h1, r.n1, r.h2, r.n2) for r in records], columns=list(RECORD_COLUMNS)
    )

    frame.to_csv(path, index=False, lineterminator='\n')


def arcsin_transform(hits: ArrayLike, at_bats: ArrayLike) -> FloatArray:
    """X = arcsin √((H + 1/4)/(N + 1/2)), which lies in (0, π/2)."""

    hits, at_bats = np.asarray(hits, np.float64), np.asarray(at_bats, np.float64)

    return np.arcsin(np.sqrt((hits + 0.25) / (at_bats + 0.5)))


def transform(
    records: Sequence[PlayerRecord], min_n1: int = 11, min_n2: int | None = None, func: FuncExceptT | None = None
) -> HalfSeasonData:
    """
    Build the estimation datasets and the evaluation set.

    :param records:     Batting records.
    :param min_n1:      First-half at-bats needed to be estimated.
    :param min_n2:      Second-half at-bats needed to be scored, defaults to ``min_n1``.

    :return:            Estimation data on both scales and the evaluation set.
    """

    func = func or transform
    min_n2 = min_n1 if min_n2 is None else min_n2

    eligible = [r for r in records if r.n1 >= min_n1]

    if len(eligible) < len(records):
        logger.info('dropped %d of %d players with fewer than %d first-half at-bats',
                    len(records) - len(eligible), len(records), min_n1)

    if not eligible:
        raise DatasetError('No player has at least {min_n1} first-half at-bats!', func, min_n1=min_n1)

    h1, n1 = (np.array([getattr(r, a) for r in eligible], np.float64) for a in ('h1', 'n1'))
    h2, n2 = (np.array([getattr(r, a) for r in eligible], np.float64) for a in ('h2', 'n2'))

    index = np.flatnonzero(n2 >= min_n2)

    if not index.size:
        raise DatasetError('No player has at least {min_n2} second-half at-bats!', func, min_n2=min_n2)

    return HalfSeasonData(
        tuple(r.player for r in eligible),
        Dataset(arcsin_transform(h1, n1), 4.0 * n1, Normal()),
        Dataset(h1 / n1, n1, Binomial()),
        EvaluationSet(index, arcsin_transform(h2[index], n2[index]), n2[index], len(eligible))
    )


def tse(estimates: ArrayLike, evaluation: EvaluationSet, func: FuncExceptT | None = None) -> float:
    """TSE(θ̂) = Σⱼ(X₂ⱼ - θ̂ⱼ)² - Σⱼ 1/(4N₂ⱼ) over the evaluation set."""

    estimates = np.asarray(estimates, np.float64).ravel()

    if estimates.size != evaluation.size:
        raise DimensionMismatchError(func or tse, evaluation.size, estimates.size)

    return math.fsum(((evaluation.x2 - estimates[evaluation.index]) ** 2).tolist()) - evaluation.noise


def _predict(estimator: Estimator, data: HalfSeasonData) -> FloatArray:
    if estimator.name in BINOMIAL_ESTIMATORS:
        proportions = estimator.fit(data.binomial).estimates

        return np.arcsin(np.sqrt(np.clip(proportions, 0.0, 1.0)))

    return estimator.fit(data.normal).estimates


def group_records(
    records: Sequence[PlayerRecord], group: str, func: FuncExceptT | None = None
) -> list[PlayerRecord]:
    """Records of one of ``all``, ``pitchers`` or ``nonpitchers``."""

    if group == 'all':
        return list(records)

    if group == 'pitchers':
        return [r for r in records if r.pitcher]

    if group == 'nonpitchers':
        return [r for r in records if not r.pitcher]

    raise DatasetError(
        'Unknown group "{group}"! Valid groups: {valid}', func or group_records, group=group, valid=', '.join(GROUPS)
    )


def evaluate(
    records: Sequence[PlayerRecord], groups: Iterable[str] = GROUPS,
    estimators: Iterable[EstimatorT] = DEFAULT_ESTIMATORS, min_n1: int = 11, min_n2: int | None = None,
    func: FuncExceptT | None = None
) -> pd.DataFrame:
    """
    TSE of every estimator relative to the naive first-half prediction, per group.

    :param records:     Batting records.
    :param groups:      Any of ``all``, ``pitchers`` and ``nonpitchers``.
    :param estimators:  Estimators or names.
    :param min_n1:      First-half eligibility threshold.
    :param min_n2:      Second-half eligibility threshold, defaults to ``min_n1``.

    :return:            Frame with the columns ``group``, ``estimator``, ``tse`` and ``tse_ratio``.
    """

    func = func or evaluate

    fitters = [Estimator.from_param(e, func) for e in estimators]

    rows = list[tuple[str, str, float, float]]()

    for group in groups:
        data = transform(group_records(records, group, func), min_n1, min_n2, func)

        naive = tse(data.normal.y, data.evaluation, func)

        if naive == 0:
            logger.warning('naive TSE is zero for group %s, ratios are undefined', group)

        for estimator in fitters:
            error = tse(_predict(estimator, data), data.evaluation, func)

            rows.append((group, estimator.name, error, error / naive if naive else math.nan))

    return pd.DataFrame(rows, columns=['group', 'estimator', 'tse', 'tse_ratio'])


def emit_table(table: pd.DataFrame, path: str | PathLike[str] | TextIO) -> None:
    """Write ``group,estimator,tse_ratio`` with three decimals."""

    table[['group', 'estimator', 'tse_ratio']].to_csv(
        path, index=False, float_format='%.3f', na_rep='nan', lineterminator='\n'
    )
