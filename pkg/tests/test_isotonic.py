from __future__ import annotations

from functools import cache
from itertools import combinations_with_replacement

import numpy as np
import pytest
from numpy.typing import NDArray

from uretools import DimensionMismatchError, DomainError, MonotoneProblem, monotone_objective, solve_monotone


@cache
def _monotone_grid(n_blocks: int, step: float) -> NDArray[np.float64]:
    values = np.round(np.arange(0.0, 1.0 + step / 2, step), 12)

    return np.array(list(combinations_with_replacement(values, n_blocks)), np.float64)


def _grid_minimum(problem: MonotoneProblem, step: float) -> float:
    weights, linear = (np.array(x) for x in problem.block_sums)

    grid = _monotone_grid(len(problem.groups), step)

    return float(np.min(grid * grid @ weights - 2.0 * grid @ linear))


def _random_problem(rng: np.random.Generator, p: int) -> MonotoneProblem:
    w = rng.exponential(1.0, p) * (rng.random(p) > 0.1)
    s = rng.normal(0.4, 0.6, p)

    return MonotoneProblem(w, s, rng.integers(1, 5, p).astype(np.float64))


def test_already_monotone() -> None:
    b = solve_monotone(MonotoneProblem([1.0, 1.0], [0.2, 0.8], [2.0, 1.0]))

    np.testing.assert_allclose(b, [0.2, 0.8])


def test_pools_violators() -> None:
    b = solve_monotone(MonotoneProblem([1.0, 1.0], [0.8, 0.2], [2.0, 1.0]))

    np.testing.assert_allclose(b, [0.5, 0.5])


def test_pools_and_clips() -> None:
    b = solve_monotone(MonotoneProblem([1.0, 1.0, 1.0], [2.0, -1.0, 0.5], [3.0, 2.0, 1.0]))

    np.testing.assert_allclose(b, [0.5, 0.5, 0.5])


def test_order_follows_tau_not_position() -> None:
    b = solve_monotone(MonotoneProblem([1.0, 1.0], [0.8, 0.2], [1.0, 2.0]))

    np.testing.assert_allclose(b, [0.8, 0.2])


def test_zero_weight_blocks() -> None:
    assert solve_monotone(MonotoneProblem([0.0], [0.3], [1.0]))[0] == 1.0
    assert solve_monotone(MonotoneProblem([0.0], [0.0], [1.0]))[0] == 0.0

    b = solve_monotone(MonotoneProblem([1.0, 0.0, 1.0], [0.3, 0.0, 0.6], [3.0, 2.0, 1.0]))
    assert np.all(np.diff(b) >= 0)
    assert b[0] == pytest.approx(0.3) and b[2] == pytest.approx(0.6)


def test_equal_tau_share_one_value() -> None:
    problem = MonotoneProblem([1.0, 2.0, 0.5, 1.0], [0.9, 0.1, 0.4, 0.2], [2.0, 2.0, 5.0, 2.0])

    b = solve_monotone(problem)

    assert b[0] == b[1] == b[3]
    assert len(problem.groups) == 2


def test_invalid_problems() -> None:
    with pytest.raises(DimensionMismatchError):
        MonotoneProblem([1.0, 1.0], [0.5], [1.0, 2.0])

    with pytest.raises(DimensionMismatchError):
        MonotoneProblem([1.0], [0.5], [1.0, 2.0])

    with pytest.raises(DomainError):
        MonotoneProblem([-1.0], [0.5], [1.0])

    with pytest.raises(DomainError):
        MonotoneProblem([], [], [])


def test_idempotent(rng: np.random.Generator) -> None:
    for _ in range(100):
        p = int(rng.integers(1, 12))
        problem = MonotoneProblem(rng.uniform(0.1, 2.0, p), rng.normal(0.5, 1.0, p), rng.integers(1, 6, p))

        b = solve_monotone(problem)

        np.testing.assert_allclose(solve_monotone(MonotoneProblem(problem.w, problem.w * b, problem.tau)), b)


def test_feasible_and_exact_structure(rng: np.random.Generator) -> None:
    for _ in range(200):
        problem = _random_problem(rng, int(rng.integers(1, 30)))

        b = solve_monotone(problem)

        assert np.all((b >= 0) & (b <= 1))
        assert np.all(np.diff(b[problem.order]) >= 0)

        for group in problem.groups:
            assert np.all(b[group] == b[group[0]])


@pytest.mark.parametrize('max_p, step', [(3, 0.02), (6, 0.1)])
def test_matches_grid_oracle(rng: np.random.Generator, max_p: int, step: float) -> None:
    for _ in range(500):
        problem = _random_problem(rng, int(rng.integers(1, max_p + 1)))

        b = solve_monotone(problem)

        value, grid_value = monotone_objective(problem, b), _grid_minimum(problem, step)

        slack = float(np.sum((np.abs(problem.w) + np.abs(problem.s)) * step + problem.w * step * step / 4))

        assert value <= grid_value + 1e-9
        assert grid_value - value <= slack + 1e-6
