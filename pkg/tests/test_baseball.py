from __future__ import annotations

import io
import math
from pathlib import Path
from typing import Callable

import numpy as np
import pytest
from stgpytools import FileNotExistsError

from uretools import (
    DatasetError, DimensionMismatchError, EvaluationSet, PlayerRecord, RecordError, arcsin_transform, emit_table,
    evaluate, group_records, load_records, transform, tse, write_records
)


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding='utf-8')

    return path


def test_arcsin_transform_values() -> None:
    assert arcsin_transform(25, 100) == pytest.approx(math.asin(math.sqrt(25.25 / 100.5)))
    assert arcsin_transform(25, 100) == pytest.approx(0.52503, abs=1e-5)
    assert arcsin_transform(0, 11) > 0


def test_arcsin_transform_range_and_monotone() -> None:
    for n in (1, 11, 250):
        x = arcsin_transform(np.arange(n + 1), n)

        assert np.all(np.diff(x) > 0)
        assert np.all((x > 0) & (x < math.pi / 2))


def test_load_small_file(tmp_path: Path) -> None:
    path = _write(
        tmp_path / 'three.csv',
        'player,pitcher,H1,N1,H2,N2\na,0,10,40,12,45\nb,1,1,20,0,15\nc,false,30,100,25,90\n'
    )

    records = load_records(path)

    assert [r.player for r in records] == ['a', 'b', 'c']
    assert [r.pitcher for r in records] == [False, True, False]
    assert records[2] == PlayerRecord('c', False, 30, 100, 25, 90)


def test_load_errors(tmp_path: Path) -> None:
    with pytest.raises(FileNotExistsError):
        load_records(tmp_path / 'missing.csv')

    with pytest.raises(RecordError, match='bad'):
        load_records(_write(tmp_path / 'a.csv', 'player,pitcher,H1,N1,H2,N2\nok,0,1,2,1,2\nbad,0,5,4,1,2\n'))

    with pytest.raises(RecordError, match='Line 3'):
        load_records(_write(tmp_path / 'b.csv', 'player,pitcher,H1,N1,H2,N2\nok,0,1,2,1,2\nx,0,one,4,1,2\n'))

    with pytest.raises(RecordError, match='Line 2'):
        load_records(_write(tmp_path / 'c.csv', 'player,pitcher,H1,N1,H2,N2\nx,maybe,1,4,1,2\n'))

    with pytest.raises(RecordError, match='header'):
        load_records(_write(tmp_path / 'd.csv', 'name,pitcher,H1,N1,H2,N2\nx,0,1,4,1,2\n'))


def test_write_read_round_trip(players_csv: Path, tmp_path: Path) -> None:
    records = load_records(players_csv)

    write_records(records, tmp_path / 'copy.csv')

    assert load_records(tmp_path / 'copy.csv') == records
    assert (tmp_path / 'copy.csv').read_text() == players_csv.read_text()


def test_transform_filters_and_scales() -> None:
    records = [
        PlayerRecord('a', False, 10, 40, 12, 45),
        PlayerRecord('b', True, 1, 8, 0, 15),
        PlayerRecord('c', False, 30, 100, 2, 9),
        PlayerRecord('d', False, 0, 11, 3, 11)
    ]

    data = transform(records)

    assert data.players == ('a', 'c', 'd')
    np.testing.assert_array_equal(data.normal.tau, [160.0, 400.0, 44.0])
    np.testing.assert_allclose(data.binomial.y, [0.25, 0.3, 0.0])
    np.testing.assert_array_equal(data.binomial.tau, [40.0, 100.0, 11.0])

    np.testing.assert_array_equal(data.evaluation.index, [0, 2])
    np.testing.assert_allclose(data.evaluation.x2, arcsin_transform([12, 3], [45, 11]))
    assert data.evaluation.size == 3

    assert transform(records, min_n2=5).evaluation.index.tolist() == [0, 1, 2]


def test_transform_empty() -> None:
    with pytest.raises(DatasetError):
        transform([PlayerRecord('a', False, 1, 5, 1, 5)])

    with pytest.raises(DatasetError):
        transform([PlayerRecord('a', False, 5, 20, 1, 5)])


def test_tse_algebra() -> None:
    evaluation = EvaluationSet(np.array([0]), np.array([0.5]), np.array([25.0]), 1)

    assert tse([0.5], evaluation) == pytest.approx(-0.01)
    assert tse([0.7], evaluation) == pytest.approx(0.04 - 0.01)

    with pytest.raises(DimensionMismatchError):
        tse([0.5, 0.1], evaluation)


def test_tse_perfect_prediction(players_csv: Path) -> None:
    data = transform(load_records(players_csv))

    estimates = np.zeros(data.evaluation.size)
    estimates[data.evaluation.index] = data.evaluation.x2

    assert tse(estimates, data.evaluation) == pytest.approx(-data.evaluation.noise)
    assert tse(estimates, data.evaluation) < 0


def test_evaluate_fixture(players_csv: Path) -> None:
    table = evaluate(load_records(players_csv))

    assert list(table.columns) == ['group', 'estimator', 'tse', 'tse_ratio']
    assert set(table['group']) == {'all', 'pitchers', 'nonpitchers'}
    assert len(table) == 3 * 9

    naive = table[table['estimator'] == 'naive']
    np.testing.assert_array_equal(naive['tse_ratio'], 1.0)

    assert np.all(np.isfinite(table['tse']))


def test_evaluate_groups_and_estimators(players_csv: Path) -> None:
    table = evaluate(load_records(players_csv), groups=['pitchers'], estimators=['naive', 'sg', 'js'])

    assert table['group'].tolist() == ['pitchers'] * 3
    assert table['estimator'].tolist() == ['naive', 'sg', 'js']


def test_group_records_split(players_csv: Path) -> None:
    records = load_records(players_csv)

    pitchers, others = group_records(records, 'pitchers'), group_records(records, 'nonpitchers')

    assert pitchers and all(r.pitcher for r in pitchers)
    assert not any(r.pitcher for r in others)
    assert len(pitchers) + len(others) == len(group_records(records, 'all')) == len(records)

    with pytest.raises(DatasetError, match='catchers'):
        group_records(records, 'catchers')


def test_evaluate_unknown_group(players_csv: Path) -> None:
    with pytest.raises(DatasetError):
        evaluate(load_records(players_csv), groups=['catchers'])


def test_table_golden(players_csv: Path, golden: Callable[[str, str], None]) -> None:
    buffer = io.StringIO()
    emit_table(evaluate(load_records(players_csv)), buffer)

    assert buffer.getvalue().splitlines()[0] == 'group,estimator,tse_ratio'

    golden('players_table.csv', buffer.getvalue())


def test_pipeline_deterministic(players_csv: Path) -> None:
    first, second = (evaluate(load_records(players_csv)) for _ in range(2))

    assert first.equals(second)


SEASON_2005 = Path(__file__).parent / 'data' / 'season2005.csv'


@pytest.mark.skipif(not SEASON_2005.exists(), reason='the 2005 half-season file is not bundled')
def test_season_2005_ratios() -> None:
    table = evaluate(load_records(SEASON_2005), estimators=['naive', 'pg', 'pm', 'sg', 'sm'])

    expected = {
        'pg': (0.515, 0.105, 0.278), 'pm': (0.421, 0.105, 0.276),
        'sg': (0.414, 0.045, 0.259), 'sm': (0.422, 0.041, 0.273)
    }

    for estimator, values in expected.items():
        rows = table[table['estimator'] == estimator].set_index('group')['tse_ratio']

        for group, value in zip(('all', 'pitchers', 'nonpitchers'), values):
            assert rows[group] == pytest.approx(value, abs=0.05), (estimator, group)
