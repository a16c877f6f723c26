"""
Monotone box-constrained quadratic programs solved by pool-adjacent-violators.

The problem is::

    minimize  Σᵢ (wᵢbᵢ² - 2sᵢbᵢ)
    over      b ∈ [0, 1]^p, nondecreasing along τ descending, constant on equal τ
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import DimensionMismatchError, DomainError

__all__ = [
    'MonotoneProblem',
    'solve_monotone',
    'monotone_objective'
]


@dataclass(frozen=True, eq=False)
class MonotoneProblem:
    """
    Weights ``w`` and linear terms ``s`` of the quadratic, and the ``tau`` that orders it.

    ``order`` sorts τ descending (stable, so equal τ keep their input order) and
    ``groups`` holds the runs of equal τ along that order.
    """

    w: NDArray[np.float64]
    s: NDArray[np.float64]
    tau: NDArray[np.float64]

    order: NDArray[np.intp] = field(init=False, repr=False)
    groups: tuple[NDArray[np.intp], ...] = field(init=False, repr=False)
    starts: NDArray[np.intp] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        w, s, tau = (np.asarray(x, np.float64).ravel() for x in (self.w, self.s, self.tau))

        if s.size != w.size:
            raise DimensionMismatchError(MonotoneProblem, w.size, s.size)

        if tau.size != w.size:
            raise DimensionMismatchError(MonotoneProblem, w.size, tau.size)

        if w.size < 1:
            raise DomainError('A monotone problem needs at least one block!', MonotoneProblem)

        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise DomainError('Quadratic weights must be finite and non-negative!', MonotoneProblem)

        if not np.all(np.isfinite(s)):
            raise DomainError('Linear terms must be finite!', MonotoneProblem)

        order = np.argsort(-tau, kind='stable')
        breaks = np.flatnonzero(np.diff(tau[order]) != 0) + 1

        object.__setattr__(self, 'w', w)
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'tau', tau)
        object.__setattr__(self, 'order', order)
        object.__setattr__(self, 'groups', tuple(np.split(order, breaks)))
        object.__setattr__(self, 'starts', np.concatenate(([0], breaks)))

    @property
    def p(self) -> int:
        return int(self.w.size)

    @cached_property
    def block_sums(self) -> tuple[list[float], list[float]]:
        """Pooled (Σw, Σs) of every equal-τ block, in order."""

        return (
            np.add.reduceat(self.w[self.order], self.starts).tolist(),
            np.add.reduceat(self.s[self.order], self.starts).tolist()
        )


def _pooled_value(w: float, s: float) -> float:
    if w > 0:
        return s / w

    if s > 0:
        return math.inf

    if s < 0:
        return -math.inf

    return 0.0


def solve_monotone(problem: MonotoneProblem) -> NDArray[np.float64]:
    """
    Exact minimizer of the monotone box-constrained quadratic.

    Blocks are merged on a stack while the previous pooled value exceeds the top one,
    then every pooled value is clipped to [0, 1]. A block without weight pools only its
    linear term: alone it goes to 1 when its linear term is positive and 0 otherwise,
    and when merged it takes the value of its neighbours.

    :param problem:     Problem to solve.

    :return:            b in the original index order.
    """

    weights, linear = problem.block_sums

    # stack of [w, s, n_blocks]
    stack: list[list[float]] = []

    for w, s in zip(weights, linear):
        stack.append([w, s, 1])

        while len(stack) > 1 and _pooled_value(*stack[-2][:2]) > _pooled_value(*stack[-1][:2]):
            w_top, s_top, n_top = stack.pop()

            stack[-1][0] += w_top
            stack[-1][1] += s_top
            stack[-1][2] += n_top

    b = np.empty(problem.p, np.float64)

    groups = iter(problem.groups)

    for w, s, n in stack:
        value = min(max(_pooled_value(w, s), 0.0), 1.0)

        for _ in range(int(n)):
            b[next(groups)] = value

    return b


def monotone_objective(problem: MonotoneProblem, b: ArrayLike) -> float:
    """Σᵢ (wᵢbᵢ² - 2sᵢbᵢ) with compensated summation."""

    b = np.asarray(b, np.float64)

    if b.size != problem.p:
        raise DimensionMismatchError(monotone_objective, problem.p, b.size)

    return math.fsum((problem.w * b * b - 2.0 * problem.s * b).tolist())
