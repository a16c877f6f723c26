from __future__ import annotations

import io
import math
from pathlib import Path
from typing import Any, Callable

import numpy as np
import pytest

import conftest
from uretools import (
    RiskReport, SimulationConfig, UniformLS, UnknownEstimatorError, UnknownScenarioError, default_threads, emit_csv,
    get_scenario, list_scenarios, replication_rng, run_scenario
)


def _csv(report: RiskReport) -> str:
    buffer = io.StringIO()
    emit_csv(report, buffer)

    return buffer.getvalue()


def test_registry() -> None:
    ids = list_scenarios()

    assert len(ids) == 24
    for family in ('laplace', 'logistic', 't7', 'normal'):
        assert all(f'{family}-{k}' in ids for k in range(1, 5))

    assert {f'binomial-ex{k}' for k in range(1, 5)} | {f'poisson-ex{k}' for k in range(5, 9)} <= set(ids)

    with pytest.raises(UnknownScenarioError, match='binomial-ex1'):
        get_scenario('binomial-ex9')


def test_draws_follow_generators() -> None:
    rng = replication_rng(0, 400, 0)

    theta, tau, y = get_scenario('binomial-ex3').draw(rng, 400)
    np.testing.assert_array_equal(theta, 1 / tau)
    assert np.all(tau >= 2) and np.all(tau == np.round(tau))
    assert np.all((y >= 0) & (y <= 1))

    theta, tau, _ = get_scenario('laplace-3').draw(rng, 400)
    assert set(np.round(1 / tau, 12)) == {0.1, 0.5}

    theta, tau, _ = get_scenario('logistic-2').draw(rng, 400)
    np.testing.assert_allclose(theta, 1 / tau)
    assert np.all((theta >= 0.1) & (theta <= 1))

    spec = get_scenario('t7-4')
    assert spec.misspecified and isinstance(spec.sampler, UniformLS)
    assert not get_scenario('t7-2').misspecified


def test_replication_streams_are_independent_of_order() -> None:
    first = replication_rng(7, 20, 3).random(5)

    replication_rng(7, 20, 2).random(100)

    np.testing.assert_array_equal(first, replication_rng(7, 20, 3).random(5))
    assert not np.array_equal(first, replication_rng(7, 20, 4).random(5))


# ν₀·E[A] with A ~ Unif(0.1, 1)
@pytest.mark.parametrize('scenario, expected', [
    *((f'normal-{k}', 0.55) for k in (1, 2, 4)),
    *((f'logistic-{k}', 0.55 * math.pi ** 2 / 3) for k in (1, 2, 4)),
    *((f't7-{k}', 0.55 * 7 / 5) for k in (1, 2, 4)),
    ('laplace-1', 1.1)
])
def test_naive_risk_is_mean_variance(scenario: str, expected: float) -> None:
    report = run_scenario(scenario, [50], 400, seed=3, estimators=['naive'], threads=1)

    risk, se = report.get(50, 'naive')

    assert abs(risk - expected) < 4 * se


def test_naive_risk_binomial_matches_noise() -> None:
    spec = get_scenario('binomial-ex1')

    # E[V(θ)/τ] for θ ~ Beta(1, 1) is E[1/τ]/6
    _, tau, _ = spec.draw(replication_rng(1, 10**6, 0), 10**6)
    expected = float(np.mean(1 / (6 * tau)))

    risk, se = run_scenario(spec, [40], 300, seed=5, estimators=['naive'], threads=1).get(40, 'naive')

    assert abs(risk - expected) < 4 * se


def test_deterministic_across_workers_and_chunks() -> None:
    kwargs: dict[str, Any] = dict(p_list=[10, 15], n_reps=12, seed=11, estimators=['naive', 'pm', 'js'])

    serial = run_scenario('logistic-3', threads=1, chunk_size=5, **kwargs)
    parallel = run_scenario('logistic-3', threads=2, chunk_size=4, **kwargs)

    assert _csv(serial) == _csv(parallel)
    assert _csv(serial) == _csv(run_scenario('logistic-3', threads=1, **kwargs))


def test_report_shape_and_values() -> None:
    report = run_scenario('poisson-ex5', [8, 12], 6, seed=2, threads=1)

    assert report.estimators == ('oracle', 'eb_ml', 'eb_mm', 'pm', 'sm')
    assert report.risk.shape == report.se.shape == (2, 5)
    assert np.all(report.risk >= 0)

    frame = report.to_frame()
    assert list(frame.columns) == ['scenario', 'p', 'estimator', 'risk', 'se', 'n_reps', 'seed']
    assert len(frame) == 10


def test_single_replication_has_no_se() -> None:
    report = run_scenario('normal-1', [5], 1, seed=0, estimators=['naive'], threads=1)

    assert math.isnan(report.get(5, 'naive')[1])
    assert 'nan' in _csv(report)


def test_empty_estimators_header_only() -> None:
    report = run_scenario('binomial-ex1', [20], 3, seed=0, estimators=[], threads=1)

    assert _csv(report) == 'scenario,p,estimator,risk,se,n_reps,seed\n'


def test_invalid_arguments() -> None:
    with pytest.raises(UnknownEstimatorError):
        run_scenario('normal-1', [5], 2, seed=0, estimators=['bayes'], threads=1)

    with pytest.raises(ValueError):
        run_scenario('normal-1', [], 2, seed=0, threads=1)

    with pytest.raises(ValueError):
        run_scenario('normal-1', [5], 0, seed=0, threads=1)


def test_threads_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv('SHRINKAGE_URE_THREADS', '3')
    assert default_threads() == 3

    monkeypatch.setenv('SHRINKAGE_URE_THREADS', 'many')
    assert default_threads() >= 1


def test_config_runs_the_same_report() -> None:
    config = SimulationConfig(p_list=(10,), n_reps=4, seed=9, estimators=('naive', 'grand_mean'), threads=1)

    assert _csv(config.run('normal-3')) == _csv(
        run_scenario('normal-3', [10], 4, 9, ['naive', 'grand_mean'], threads=1)
    )


def test_golden_csv(golden: Callable[[str, str], None]) -> None:
    report = run_scenario('binomial-ex1', [10, 20], 20, seed=7, threads=1)

    golden('binomial-ex1_seed7.csv', _csv(report))


def test_golden_files_are_never_written_implicitly(
    golden: Callable[[str, str], None], monkeypatch: pytest.MonkeyPatch, tmp_path: Path
) -> None:
    monkeypatch.setattr(conftest, 'GOLDEN_DIR', tmp_path)
    monkeypatch.delenv(conftest.UPDATE_GOLDEN_ENV, raising=False)

    with pytest.raises(pytest.fail.Exception, match='absent.csv'):
        golden('absent.csv', 'a,b\n')

    assert not (tmp_path / 'absent.csv').exists()

    monkeypatch.setenv(conftest.UPDATE_GOLDEN_ENV, '1')
    golden('absent.csv', 'a,b\n')

    monkeypatch.delenv(conftest.UPDATE_GOLDEN_ENV)
    golden('absent.csv', 'a,b\n')

    with pytest.raises(AssertionError):
        golden('absent.csv', 'a,c\n')


def _risks(scenario: str, estimators: list[str], n_reps: int) -> dict[str, tuple[float, float]]:
    report = run_scenario(scenario, [500], n_reps, seed=2024, estimators=estimators)

    return {name: report.get(500, name) for name in estimators}


@pytest.mark.slow
@pytest.mark.parametrize('scenario, expected, tolerance', [
    ('binomial-ex1', 0.0253, 0.05), ('binomial-ex2', 0.0248, 0.05), ('binomial-ex3', 0.0069, 0.10)
])
def test_oracle_risk(scenario: str, expected: float, tolerance: float) -> None:
    risk, _ = _risks(scenario, ['oracle'], 10_000)['oracle']

    assert risk == pytest.approx(expected, rel=tolerance)


@pytest.mark.slow
@pytest.mark.parametrize('scenario', ['binomial-ex1', 'poisson-ex5'])
def test_conjugate_scenarios_track_oracle(scenario: str) -> None:
    risks = _risks(scenario, ['oracle', 'eb_ml', 'eb_mm', 'pm', 'sm'], 1_000)

    oracle, oracle_se = risks['oracle']

    for name in ('eb_ml', 'eb_mm', 'pm', 'sm'):
        risk, se = risks[name]
        margin = 3 * max(se, oracle_se)

        assert 0.85 * oracle - margin <= risk <= 1.15 * oracle + margin, name


@pytest.mark.slow
@pytest.mark.parametrize('scenario', ['binomial-ex3', 'poisson-ex7'])
def test_eb_misses_inverse_count_structure(scenario: str) -> None:
    risks = _risks(scenario, ['oracle', 'eb_ml', 'eb_mm', 'pm'], 2_000)

    oracle, oracle_se = risks['oracle']

    for name in ('eb_ml', 'eb_mm'):
        risk, se = risks[name]
        assert risk > oracle + 3 * max(se, oracle_se), name

    pm, pm_se = risks['pm']
    assert pm <= oracle * 1.05 + 3 * max(pm_se, oracle_se)


@pytest.mark.slow
@pytest.mark.parametrize('scenario', ['binomial-ex4', 'poisson-ex8'])
def test_semiparametric_beats_oracle_on_grouped_data(scenario: str) -> None:
    risks = _risks(scenario, ['oracle', 'sm'], 1_000)

    (oracle, oracle_se), (sm, sm_se) = risks['oracle'], risks['sm']

    assert sm < oracle - 3 * max(sm_se, oracle_se)


@pytest.mark.slow
@pytest.mark.parametrize('scenario', [f'{family}-{k}' for family in ('laplace', 'logistic', 't7') for k in range(1, 5)])
def test_location_scale_ordering(scenario: str) -> None:
    risks = _risks(scenario, ['naive', 'js', 'sm'], 1_000)

    (naive, naive_se), (js, js_se), (sm, sm_se) = risks['naive'], risks['js'], risks['sm']

    assert sm < js - 3 * max(sm_se, js_se)
    assert js < naive - 3 * max(js_se, naive_se)
