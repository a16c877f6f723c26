"""
Command line front end.

Exit codes: 0 on success, 1 when a run fails, 2 on bad arguments or invalid input.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Sequence, TextIO

import numpy as np
import pandas as pd
from stgpytools import CustomValueError, FileNotExistsError, FuncExceptT

from ._metadata import __version__
from .baseball import DEFAULT_ESTIMATORS as BASEBALL_ESTIMATORS
from .baseball import GROUPS, emit_table, evaluate, group_records, load_records, transform
from .estimators import Estimator, FitResult, JamesStein, SemiparametricURE, list_estimators
from .families import QvfFamily, check_regularity, list_families
from .sim import THREADS_ENV, emit_csv, get_scenario, list_scenarios, run_scenario
from .types import Dataset, ParamRule

__all__ = [
    'CliConfig',

    'fit_frame',

    'build_parser',
    'main'
]

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2

_USAGE_ERRORS = (ValueError, IndexError, NotImplementedError, FileNotExistsError, FileNotFoundError)


class _InvalidInputError(Exception):
    """Wraps a validation error raised while reading the input of a command."""


@contextmanager
def _validating() -> Iterator[None]:
    try:
        yield
    except _USAGE_ERRORS as e:
        raise _InvalidInputError(e) from e


def _split(value: str | None) -> tuple[str, ...]:
    if not value:
        return ()

    return tuple(item.strip() for item in value.split(',') if item.strip())


@dataclass
class CliConfig:
    """Validated options of one command line invocation."""

    command: str
    scenario: str | None = None
    input: Path | None = None
    out: str | None = None
    family: str = 'normal'
    family_kwargs: dict[str, float] = field(default_factory=dict)
    estimators: tuple[str, ...] = ()
    p_list: tuple[int, ...] = (20, 100, 500)
    n_reps: int = 10_000
    seed: int = 0
    threads: int | None = None
    mu_grid_size: int = 201
    min_n1: int = 11
    min_n2: int | None = None
    js_literal: bool = False
    groups: tuple[str, ...] = GROUPS
    progress: bool = False

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> CliConfig:
        func = cls.from_namespace

        config = cls(args.command)

        for name in ('seed', 'threads', 'mu_grid_size', 'min_n1', 'min_n2', 'js_literal', 'progress', 'out'):
            if (value := getattr(args, name, None)) is not None:
                setattr(config, name, value)

        if getattr(args, 'input', None) is not None:
            config.input = Path(args.input)

        if args.command == 'simulate':
            config.scenario = get_scenario(args.scenario, func).id
            config.n_reps = args.reps

            try:
                config.p_list = tuple(int(p) for p in _split(args.p))
            except ValueError:
                raise CustomValueError(
                    '--p must be a comma separated list of integers, got "{p}"!', func, p=args.p
                ) from None

        if (family := getattr(args, 'family', None)) is not None:
            config.family = family
            config.family_kwargs = {
                key: value for key in ('alpha', 'df') if (value := getattr(args, key, None)) is not None
            }

            QvfFamily.from_param(config.family, func, **config.family_kwargs)

        if (estimators := getattr(args, 'estimators', None)) is not None:
            config.estimators = _split(estimators)
        elif args.command == 'fit':
            config.estimators = (args.method,)

        for name in config.estimators:
            Estimator.from_param(name, func)

        if (groups := getattr(args, 'groups', None)) is not None:
            config.groups = _split(groups)

            if unknown := [g for g in config.groups if g not in GROUPS]:
                raise CustomValueError(
                    'Unknown group(s) {unknown}! Valid groups: {valid}', func,
                    unknown=', '.join(unknown), valid=', '.join(GROUPS)
                )

        if config.n_reps < 1 or not config.p_list or any(p < 1 for p in config.p_list):
            raise CustomValueError('--reps and every --p value must be positive!', func)

        if config.mu_grid_size < 2:
            raise CustomValueError('--mu-grid-size must be at least 2!', func)

        return config

    def make_estimator(self, name: str, func: FuncExceptT | None = None) -> Estimator:
        estimator = Estimator.from_param(name, func or self.make_estimator)

        if isinstance(estimator, SemiparametricURE):
            return replace(estimator, mu_grid_size=self.mu_grid_size)

        if isinstance(estimator, JamesStein):
            return replace(estimator, literal=self.js_literal)

        return estimator

    def make_family(self) -> QvfFamily:
        return QvfFamily.from_param(self.family, self.make_family, **self.family_kwargs)


@contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None or path == '-':
        yield sys.stdout
        return

    with open(path, 'w', newline='', encoding='utf-8') as file:
        yield file


def _read_dataset(config: CliConfig, func: FuncExceptT) -> Dataset:
    assert config.input is not None

    if not config.input.is_file():
        raise FileNotExistsError('"{path}" is not an existing file!', func, path=str(config.input))

    frame = pd.read_csv(config.input)

    if missing := {'y', 'tau'} - set(frame.columns):
        raise CustomValueError('Input is missing the column(s) {missing}!', func, missing=', '.join(sorted(missing)))

    return Dataset(frame['y'].to_numpy(np.float64), frame['tau'].to_numpy(np.float64), config.make_family())


def fit_frame(data: Dataset, result: FitResult) -> pd.DataFrame:
    """Per-index estimates with the rule that produced them."""

    rule = result.rule

    return pd.DataFrame({
        'index': np.arange(data.p),
        'y': data.y,
        'tau': data.tau,
        'estimate': result.estimates,
        'b': rule.shrinkage(data.tau) if rule is not None else np.full(data.p, math.nan),
        'mu': rule.mu if rule is not None else math.nan,
        'gamma': rule.gamma if isinstance(rule, ParamRule) else math.nan,
        'ure': result.objective_value
    })


def _simulate(config: CliConfig) -> int:
    assert config.scenario is not None

    scenario = get_scenario(config.scenario)

    estimators = [
        config.make_estimator(name) for name in (config.estimators or scenario.default_estimators)
    ]

    report = run_scenario(
        scenario, config.p_list, config.n_reps, config.seed, estimators, config.threads, progress=config.progress
    )

    with _output(config.out) as out:
        emit_csv(report, out)

    return EXIT_OK


def _fit(config: CliConfig) -> int:
    with _validating():
        data = _read_dataset(config, _fit)

        # the unbiased variance term is undefined for some (y, τ), e.g. binomial τ = 1
        data.variance_terms

    result = replace(config.make_estimator(config.estimators[0]), check=True).fit(data)

    with _output(config.out) as out:
        fit_frame(data, result).to_csv(out, index=False, float_format='%.17g', na_rep='nan', lineterminator='\n')

    return EXIT_OK


def _eval_baseball(config: CliConfig) -> int:
    assert config.input is not None

    with _validating():
        records = load_records(config.input, _eval_baseball)

        for group in config.groups:
            transform(group_records(records, group, _eval_baseball), config.min_n1, config.min_n2, _eval_baseball)

    table = evaluate(
        records, config.groups,
        [config.make_estimator(name) for name in (config.estimators or BASEBALL_ESTIMATORS)],
        config.min_n1, config.min_n2
    )

    with _output(config.out) as out:
        emit_table(table, out)

    return EXIT_OK


def _check(config: CliConfig) -> int:
    with _validating():
        data = _read_dataset(config, _check)

    report = check_regularity(data)

    with _output(config.out) as out:
        print(report, file=out)

    return EXIT_OK


def _list(config: CliConfig) -> int:
    with _output(config.out) as out:
        for title, names in (('families', list_families()), ('estimators', list_estimators())):
            print(f'{title}:', file=out)

            for name in names:
                print(f'  {name}', file=out)

        print('scenarios:', file=out)

        for scenario in map(get_scenario, list_scenarios()):
            print(f'  {scenario.id:<14}{scenario.description}'.rstrip(), file=out)

    return EXIT_OK


_COMMANDS = {
    'simulate': _simulate,
    'fit': _fit,
    'eval-baseball': _eval_baseball,
    'check': _check,
    'list': _list
}


def _add_family_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--family', required=True, help='distribution family of the data')
    parser.add_argument('--alpha', type=float, help='shape constant of the gamma and ghs families')
    parser.add_argument('--df', type=float, help='degrees of freedom of the student_t family')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='uretools', description='Shrinkage estimation by minimizing unbiased risk estimates.'
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='log debug messages')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='only log warnings and errors')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', help='output file, standard output when omitted or "-"')

    estimator_options = argparse.ArgumentParser(add_help=False)
    estimator_options.add_argument('--mu-grid-size', type=int, help='grid points of the semiparametric mu search')
    estimator_options.add_argument(
        '--js-literal', action='store_true', default=None,
        help='James-Stein shrinks Y instead of Y - mu, as the formula is sometimes printed'
    )

    commands = parser.add_subparsers(dest='command', required=True)

    simulate = commands.add_parser(
        'simulate', parents=[common, estimator_options], help='estimate risk curves of a scenario'
    )
    simulate.add_argument('--scenario', required=True, help='scenario id, see "list"')
    simulate.add_argument('--p', default='20,100,500', help='comma separated numbers of units')
    simulate.add_argument('--reps', type=int, default=10_000, help='replications per p')
    simulate.add_argument('--seed', type=int, default=0)
    simulate.add_argument('--estimators', help='comma separated estimator names, scenario defaults when omitted')
    simulate.add_argument('--threads', type=int, help=f'worker processes, defaults to ${THREADS_ENV} or the CPU count')
    simulate.add_argument('--progress', action='store_true', default=None, help='show a progress bar')

    fit = commands.add_parser('fit', parents=[common, estimator_options], help='fit one estimator to a y,tau file')
    fit.add_argument('--input', required=True, help='CSV file with the columns y and tau')
    fit.add_argument('--method', default='sm', help='estimator name, see "list"')
    _add_family_options(fit)

    baseball = commands.add_parser(
        'eval-baseball', parents=[common, estimator_options], help='score half-season batting predictions'
    )
    baseball.add_argument('--input', required=True, help='CSV file with the columns player,pitcher,H1,N1,H2,N2')
    baseball.add_argument('--groups', help='comma separated subset of all,pitchers,nonpitchers')
    baseball.add_argument('--estimators', help='comma separated estimator names')
    baseball.add_argument('--min-n1', type=int, help='first-half at-bats needed to be estimated (default 11)')
    baseball.add_argument('--min-n2', type=int, help='second-half at-bats needed to be scored (default --min-n1)')

    check = commands.add_parser('check', parents=[common], help='check a y,tau file against regularity conditions')
    check.add_argument('--input', required=True, help='CSV file with the columns y and tau')
    _add_family_options(check)

    commands.add_parser('list', parents=[common], help='list families, estimators and scenarios')

    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO

    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr, force=True)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args)

    try:
        config = CliConfig.from_namespace(args)
    except _USAGE_ERRORS as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_USAGE

    try:
        return _COMMANDS[config.command](config)
    except _InvalidInputError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.debug('run failed', exc_info=True)
        print(f'error: {e}', file=sys.stderr)
        return EXIT_RUNTIME
