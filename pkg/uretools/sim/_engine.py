from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from stgpytools import CustomValueError, FuncExceptT
from tqdm import tqdm

from ..estimators import Estimator, EstimatorT
from ..types import Dataset
from ..ure import loss
from ._scenarios import ScenarioSpec, ScenarioT, get_scenario

__all__ = [
    'RiskReport',
    'SimulationConfig',

    'replication_rng', 'default_threads',
    'run_scenario',
    'emit_csv',

    'THREADS_ENV'
]

logger = logging.getLogger(__name__)

THREADS_ENV = 'SHRINKAGE_URE_THREADS'

CSV_COLUMNS = ('scenario', 'p', 'estimator', 'risk', 'se', 'n_reps', 'seed')


@dataclass(frozen=True, eq=False)
class RiskReport:
    """Monte Carlo risk of every estimator at every p, with standard errors."""

    scenario: str
    p_values: tuple[int, ...]
    estimators: tuple[str, ...]
    risk: NDArray[np.float64]
    """Mean loss, shape (len(p_values), len(estimators))."""

    se: NDArray[np.float64]
    """Sample standard deviation of the loss over √N, ``nan`` for a single replication."""

    n_reps: int
    seed: int

    def rows(self) -> Iterator[tuple[str, int, str, float, float, int, int]]:
        for i, p in enumerate(self.p_values):
            for j, name in enumerate(self.estimators):
                yield self.scenario, p, name, float(self.risk[i, j]), float(self.se[i, j]), self.n_reps, self.seed

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.rows()), columns=list(CSV_COLUMNS))

    def get(self, p: int, estimator: str) -> tuple[float, float]:
        """(risk, se) of one estimator at one p."""

        i, j = self.p_values.index(p), self.estimators.index(estimator)

        return float(self.risk[i, j]), float(self.se[i, j])


def replication_rng(seed: int, p: int, rep: int) -> np.random.Generator:
    """Counter-based stream of one replication, independent of scheduling."""

    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, p, rep])))


def _run_chunk(
    scenario: ScenarioSpec, estimators: Sequence[Estimator], p: int, start: int, stop: int, seed: int
) -> tuple[int, NDArray[np.float64]]:
    losses = np.empty((stop - start, len(estimators)), np.float64)

    for row, rep in enumerate(range(start, stop)):
        rng = replication_rng(seed, p, rep)

        theta, tau, y = scenario.draw(rng, p)

        data = Dataset(y, tau, scenario.family)

        for col, estimator in enumerate(estimators):
            result = estimator.fit(data, theta if estimator.requires_truth else None)

            losses[row, col] = loss(theta, result.estimates)

    return start, losses


def _summarize(losses: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    n = losses.shape[0]

    risk = losses.mean(axis=0)

    if n < 2:
        return risk, np.full(losses.shape[1], math.nan)

    return risk, losses.std(axis=0, ddof=1) / math.sqrt(n)


def _chunks(n_reps: int, chunk_size: int) -> Iterable[tuple[int, int]]:
    for start in range(0, n_reps, chunk_size):
        yield start, min(start + chunk_size, n_reps)


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)

    if value:
        try:
            return max(int(value), 1)
        except ValueError:
            logger.warning('Ignoring %s=%r, expected an integer', THREADS_ENV, value)

    return os.cpu_count() or 1


def run_scenario(
    spec: ScenarioT, p_list: Sequence[int], n_reps: int, seed: int,
    estimators: Iterable[EstimatorT] | None = None, threads: int | None = None,
    chunk_size: int = 250, progress: bool = False, func: FuncExceptT | None = None
) -> RiskReport:
    """
    Estimate the risk of each estimator at each p by replication.

    Every replication draws from its own Philox stream keyed by (seed, p, rep) and
    losses are aggregated in replication order, so the report does not depend on
    ``threads`` or ``chunk_size``.

    :param spec:            Scenario or scenario id.
    :param p_list:          Numbers of units.
    :param n_reps:          Replications per p.
    :param seed:            Master seed.
    :param estimators:      Estimators or names; ``None`` takes the scenario's defaults.
    :param threads:         Worker processes, 1 runs in-process. Defaults to ``SHRINKAGE_URE_THREADS``
                            or the number of CPUs.
    :param chunk_size:      Replications per task.
    :param progress:        Show a progress bar.

    :return:                Risk report.
    """

    func = func or run_scenario

    scenario = get_scenario(spec, func)

    p_values = tuple(int(p) for p in p_list)

    if not p_values or any(p < 1 for p in p_values):
        raise CustomValueError('p_list must be a non-empty list of positive sizes, got {p_list}!', func, p_list=p_list)

    if n_reps < 1:
        raise CustomValueError('n_reps must be at least 1, got {n_reps}!', func, n_reps=n_reps)

    fitters = [
        Estimator.from_param(e, func) for e in (scenario.default_estimators if estimators is None else estimators)
    ]

    threads = default_threads() if threads is None else max(int(threads), 1)

    names = tuple(e.name for e in fitters)

    risk = np.full((len(p_values), len(fitters)), math.nan)
    se = np.full_like(risk, math.nan)

    logger.info(
        'simulating %s: p=%s, %d replications, seed %d, estimators %s, %d worker(s)',
        scenario.id, list(p_values), n_reps, seed, list(names), threads
    )

    if fitters:
        tasks = [(p, start, stop) for p in p_values for start, stop in _chunks(n_reps, max(chunk_size, 1))]
        losses = {p: np.empty((n_reps, len(fitters)), np.float64) for p in p_values}

        with tqdm(total=len(tasks), desc=scenario.id, disable=not progress) as bar:
            if threads == 1:
                for p, start, stop in tasks:
                    _, chunk = _run_chunk(scenario, fitters, p, start, stop, seed)
                    losses[p][start:stop] = chunk
                    bar.update()
            else:
                with ProcessPoolExecutor(max_workers=threads) as executor:
                    futures = {
                        executor.submit(_run_chunk, scenario, fitters, p, start, stop, seed): p
                        for p, start, stop in tasks
                    }

                    for future in as_completed(futures):
                        start, chunk = future.result()
                        losses[futures[future]][start:start + chunk.shape[0]] = chunk
                        bar.update()

        for i, p in enumerate(p_values):
            risk[i], se[i] = _summarize(losses[p])

    return RiskReport(scenario.id, p_values, names, risk, se, n_reps, seed)


def emit_csv(report: RiskReport, path: str | PathLike[str] | TextIO) -> None:
    """Write one row per (p, estimator) with ten significant digits."""

    report.to_frame().to_csv(path, index=False, float_format='%.10g', na_rep='nan', lineterminator='\n')


@dataclass
class SimulationConfig:
    """Options of a simulation run."""

    p_list: tuple[int, ...] = tuple(range(20, 501, 20))
    n_reps: int = 10_000
    seed: int = 0
    estimators: tuple[EstimatorT, ...] | None = None
    threads: int | None = None
    chunk_size: int = 250
    progress: bool = False

    def run(self, spec: ScenarioT) -> RiskReport:
        return run_scenario(
            spec, self.p_list, self.n_reps, self.seed, self.estimators, self.threads, self.chunk_size, self.progress
        )
