from __future__ import annotations

import io
from pathlib import Path
from typing import Any, Callable

import pandas as pd
import pytest

from uretools import Dataset, DomainError, RegularityWarning, SemiparametricURE, emit_csv, run_scenario
from uretools.cli import fit_frame, main

DATA = 'y,tau\n0.2,5\n0.4,10\n0.5,2\n0.75,4\n0.5,8\n'


@pytest.fixture
def small_csv(tmp_path: Path) -> Path:
    path = tmp_path / 'small.csv'
    path.write_text(DATA)

    return path


def test_list(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['list']) == 0

    out = capsys.readouterr().out

    for heading in ('families:', 'estimators:', 'scenarios:'):
        assert heading in out

    assert '  binomial-ex1' in out and '  sm' in out


def test_unknown_scenario(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['simulate', '--scenario', 'binomial-ex0', '--reps', '2']) == 2

    assert 'poisson-ex5' in capsys.readouterr().err


@pytest.mark.parametrize('argv', [
    ['simulate'],
    ['simulate', '--scenario', 'normal-1', '--reps', 'two'],
    ['simulate', '--scenario', 'normal-1', '--reps', '0'],
    ['simulate', '--scenario', 'normal-1', '--p', '10,x'],
    ['simulate', '--scenario', 'normal-1', '--estimators', 'naive,bayes'],
    ['fit', '--input', 'data.csv'],
    ['frobnicate']
])
def test_bad_arguments(argv: list[str]) -> None:
    assert main(argv) == 2


def test_simulate(tmp_path: Path) -> None:
    argv = [
        'simulate', '--scenario', 'poisson-ex6', '--p', '10,20', '--reps', '5', '--seed', '4',
        '--estimators', 'naive,js', '--threads', '1'
    ]

    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'

    assert main([*argv, '--out', str(first)]) == 0
    assert main([*argv, '--out', str(second)]) == 0

    lines = first.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2
    assert lines[0] == 'scenario,p,estimator,risk,se,n_reps,seed'

    assert first.read_bytes() == second.read_bytes()

    buffer = io.StringIO()
    emit_csv(run_scenario('poisson-ex6', [10, 20], 5, 4, ['naive', 'js'], threads=1), buffer)

    assert first.read_text() == buffer.getvalue()


def test_fit_matches_library(small_csv: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['fit', '--input', str(small_csv), '--family', 'binomial', '--method', 'sm']) == 0

    frame = pd.read_csv(io.StringIO(DATA))
    data = Dataset.from_arrays(frame['y'], frame['tau'], 'binomial')

    expected = fit_frame(data, SemiparametricURE().fit(data)).to_csv(
        index=False, float_format='%.17g', na_rep='nan', lineterminator='\n'
    )

    assert capsys.readouterr().out == expected


def test_fit_naive_echoes(small_csv: Path, tmp_path: Path) -> None:
    out = tmp_path / 'fit.csv'

    assert main(['fit', '--input', str(small_csv), '--family', 'normal', '--method', 'naive', '--out', str(out)]) == 0

    frame = pd.read_csv(out)

    assert list(frame.columns) == ['index', 'y', 'tau', 'estimate', 'b', 'mu', 'gamma', 'ure']
    assert frame['estimate'].tolist() == frame['y'].tolist() == [0.2, 0.4, 0.5, 0.75, 0.5]


def test_fit_invalid_input(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / 'bad.csv'
    path.write_text('y,tau\n1.5,4\n0.5,4\n')

    assert main(['fit', '--input', str(path), '--family', 'binomial']) == 2
    assert 'error' in capsys.readouterr().err

    path.write_text('y,n\n0.5,4\n')
    assert main(['fit', '--input', str(path), '--family', 'binomial']) == 2

    assert main(['fit', '--input', str(tmp_path / 'missing.csv'), '--family', 'poisson']) == 2
    assert main(['fit', '--input', str(path), '--family', 'cauchy']) == 2


def test_check(small_csv: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['check', '--input', str(small_csv), '--family', 'poisson']) == 0

    assert 'regularity report' in capsys.readouterr().out


def test_eval_baseball(players_csv: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['eval-baseball', '--input', str(players_csv), '--groups', 'pitchers']) == 0

    table = pd.read_csv(io.StringIO(capsys.readouterr().out))

    assert set(table['group']) == {'pitchers'}
    assert len(table) == 9
    assert table.loc[table['estimator'] == 'naive', 'tse_ratio'].tolist() == [1.0]


def test_eval_baseball_errors(tmp_path: Path, players_csv: Path) -> None:
    assert main(['eval-baseball', '--input', str(tmp_path / 'missing.csv')]) == 2
    assert main(['eval-baseball', '--input', str(players_csv), '--groups', 'catchers']) == 2


def test_eval_baseball_golden(
    players_csv: Path, golden: Callable[[str, str], None], capsys: pytest.CaptureFixture[str]
) -> None:
    assert main(['-q', 'eval-baseball', '--input', str(players_csv), '--estimators', 'naive,js,sg,sm']) == 0

    golden('players_cli_table.csv', capsys.readouterr().out)


def test_list_describes_scenarios(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['list']) == 0

    assert '  binomial-ex1  tau ~ Poi(3) + 2, theta ~ Beta(1, 1)\n' in capsys.readouterr().out


def test_fit_warns_on_irregular_data(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / 'zeros.csv'
    path.write_text('y,tau\n0,2\n2,1\n1.5,2\n0.5,4\n')

    with pytest.warns(RegularityWarning):
        assert main(['fit', '--input', str(path), '--family', 'poisson']) == 0

    assert len(capsys.readouterr().out.splitlines()) == 1 + 4


def test_fit_undefined_variance_term(tmp_path: Path) -> None:
    path = tmp_path / 'single.csv'
    path.write_text('y,tau\n1,1\n0.5,2\n')

    assert main(['fit', '--input', str(path), '--family', 'binomial']) == 2


def test_failure_during_run_is_runtime_error(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    def _fail(*args: Any, **kwargs: Any) -> None:
        raise DomainError('theta left its domain mid-run!', _fail)

    monkeypatch.setattr('uretools.cli.run_scenario', _fail)

    assert main(['simulate', '--scenario', 'normal-1', '--p', '5', '--reps', '2', '--threads', '1']) == 1
    assert 'mid-run' in capsys.readouterr().err
