from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike

from ..types import Dataset, FloatArray, ParamRule, RuleT, SemiRule
from ..ure import evaluate_ure, loss

__all__ = [
    'random_rules',
    'concentration_gap'
]


def random_rules(data: Dataset, rng: np.random.Generator, n_rules: int = 50) -> dict[str, list[RuleT]]:
    """
    Random feasible rules of each kind: monotone b with μ in the constraint interval,
    b with the grand mean, and γ = t/(1 - t) for t uniform on [0, 1) with and without the grand mean.
    """

    lo, hi = data.mean_interval()
    order = np.argsort(-data.tau, kind='stable')

    def _monotone_b() -> FloatArray:
        # nondecreasing along τ descending, with equal τ sharing one value
        sorted_tau = data.tau[order]
        draws = np.sort(rng.random(data.p))

        starts = np.r_[0, np.flatnonzero(np.diff(sorted_tau) != 0) + 1]
        block_values = draws[starts]

        b = np.empty(data.p)
        b[order] = np.repeat(block_values, np.diff(np.r_[starts, data.p]))

        return b

    def _gamma() -> float:
        t = rng.random()

        return t / (1.0 - t)

    return {
        'semi': [SemiRule(_monotone_b(), rng.uniform(lo, hi)) for _ in range(n_rules)],
        'grand': [SemiRule(_monotone_b(), data.grand_mean, grand=True) for _ in range(n_rules)],
        'param': [ParamRule(_gamma(), rng.uniform(lo, hi)) for _ in range(n_rules)],
        'param_grand': [ParamRule(_gamma(), data.grand_mean, grand=True) for _ in range(n_rules)]
    }


def concentration_gap(
    data: Dataset, theta: ArrayLike, rng: np.random.Generator, n_rules: int = 50
) -> dict[str, float]:
    """
    Largest |URE - loss| over random feasible rules, per objective.

    :param data:        Observations drawn at ``theta``.
    :param theta:       True means.
    :param rng:         Stream the rules are drawn from.
    :param n_rules:     Rules per objective.

    :return:            Sup-type gap keyed by ``semi``, ``grand``, ``param`` and ``param_grand``.
    """

    theta = np.asarray(theta, np.float64)

    return {
        kind: max(
            (abs(evaluate_ure(data, rule) - loss(theta, rule.apply(data))) for rule in rules), default=math.nan
        )
        for kind, rules in random_rules(data, rng, n_rules).items()
    }
