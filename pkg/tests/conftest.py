from __future__ import annotations

import os
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from uretools import Binomial, Dataset, Gamma, Normal, Poisson

DATA_DIR = Path(__file__).parent / 'data'
GOLDEN_DIR = Path(__file__).parent / 'golden'
UPDATE_GOLDEN_ENV = 'URETOOLS_UPDATE_GOLDEN'


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def players_csv() -> Path:
    return DATA_DIR / 'players.csv'


@pytest.fixture
def golden() -> Callable[[str, str], None]:
    """
    Compare text against a frozen file under ``tests/golden``.

    Files are only (re)written when ``URETOOLS_UPDATE_GOLDEN=1`` is set.
    """

    def _check(name: str, text: str) -> None:
        path = GOLDEN_DIR / name

        if os.environ.get(UPDATE_GOLDEN_ENV) == '1':
            path.parent.mkdir(exist_ok=True)
            path.write_bytes(text.encode('utf-8'))
        elif not path.exists():
            pytest.fail(f'{path} is missing, run the tests once with {UPDATE_GOLDEN_ENV}=1 to freeze it')

        assert path.read_bytes().decode('utf-8') == text

    return _check


def random_binomial(rng: np.random.Generator, p: int, max_n: int = 10) -> Dataset:
    tau = rng.integers(2, max_n + 1, p).astype(np.float64)
    theta = rng.uniform(0.05, 0.95, p)

    return Dataset(rng.binomial(tau.astype(np.int64), theta) / tau, tau, Binomial())


def random_poisson(rng: np.random.Generator, p: int) -> Dataset:
    tau = rng.integers(1, 8, p).astype(np.float64)

    return Dataset(rng.poisson(tau * rng.uniform(0.2, 3.0, p)) / tau, tau, Poisson())


def random_normal(rng: np.random.Generator, p: int) -> Dataset:
    tau = 1.0 / rng.uniform(0.1, 1.0, p)

    return Dataset(rng.normal(0.0, 1.0, p) + rng.standard_normal(p) / np.sqrt(tau), tau, Normal())


def random_gamma(rng: np.random.Generator, p: int) -> Dataset:
    family = Gamma(2.0)
    tau = rng.integers(1, 8, p).astype(np.float64)

    return Dataset(family.sample_many(rng.uniform(0.5, 3.0, p), tau, rng), tau, family)
