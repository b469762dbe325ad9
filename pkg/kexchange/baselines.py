"""Reference algorithms: greedy, oblivious local search, the linear
non-oblivious search and the naive marginal-weight variant that can cycle.

All of them share the k-replacement neighbourhood and its enumeration order
with :mod:`kexchange.search`.
"""

__all__ = [
    "BaselineResult",
    "greedy",
    "oblivious_ls",
    "linear_nols",
    "marginal_weights",
    "naive_marginal_nols",
]

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from kexchange import consts
from kexchange.enums import Algorithm, PivotRule
from kexchange.errors import PreconditionError
from kexchange.instance import Instance
from kexchange.objective import Element, LinearObjective
from kexchange.rational import RationalLike
from kexchange.search import check_epsilon, enumerate_k_replacements, init_solution

logger = logging.getLogger(__name__)


@dataclass
class BaselineResult:
    """Outcome of a baseline run.

    Attributes:
        algorithm: Which baseline produced the result.
        solution: Final solution.
        value: f(solution).
        iterations: Number of moves (additions for greedy).
        terminated: False when the run stopped on a cycle or the iteration cap.
        history: Every solution visited, starting solution first.
        cycle_length: Period of the detected cycle, if any.
        oracle_calls: Value-oracle calls made by the run.
    """

    algorithm: Algorithm
    solution: frozenset[Element]
    value: Fraction
    iterations: int = 0
    terminated: bool = True
    history: list[frozenset[Element]] = field(default_factory=list)
    cycle_length: Optional[int] = None
    oracle_calls: int = 0


def _start(instance: Instance, start: Optional[Iterable[Element]]):
    start = frozenset(start)
    if not instance.system.is_independent(start):
        raise PreconditionError(f"Start set {sorted(start)} is not independent.")
    return start


def greedy(instance: Instance) -> BaselineResult:
    """Add the feasible element of largest positive gain until none is left.

    Ties go to the smallest element id.
    """
    objective, system = instance.objective, instance.system
    calls = objective.calls
    solution: frozenset[Element] = frozenset()
    value = objective.evaluate(solution)
    history = [solution]
    while True:
        best, best_value = None, value
        for e in instance.ground:
            if e in solution or not system.is_independent(solution | {e}):
                continue
            candidate = objective.evaluate(solution | {e})
            if candidate > best_value:
                best, best_value = e, candidate
        if best is None:
            break
        solution, value = solution | {best}, best_value
        history.append(solution)
    return BaselineResult(
        algorithm=Algorithm.greedy,
        solution=solution,
        value=value,
        iterations=len(history) - 1,
        history=history,
        oracle_calls=objective.calls - calls,
    )


def oblivious_ls(
    instance: Instance,
    epsilon: RationalLike,
    cap: int = consts.DEFAULT_CAP_CANDIDATES,
    start: Optional[Iterable[Element]] = None,
) -> BaselineResult:
    """Oblivious local search over k-replacements, started from greedy.

    A candidate is taken when it raises f by more than a factor
    (1 + epsilon / n); the first such candidate in enumeration order wins.
    """
    epsilon = check_epsilon(epsilon)
    objective = instance.objective
    calls = objective.calls
    if start is None:
        solution = greedy(instance).solution
    else:
        solution = _start(instance, start)
    value = objective.evaluate(solution)
    history = [solution]
    if instance.n == 0:
        return BaselineResult(
            algorithm=Algorithm.oblivious, solution=solution, value=value
        )
    factor = 1 + epsilon / instance.n

    improved = True
    while improved:
        improved = False
        for added, removed in enumerate_k_replacements(instance, solution, cap):
            if not added:
                continue
            candidate = (solution - frozenset(removed)) | frozenset(added)
            candidate_value = objective.evaluate(candidate)
            if candidate_value > factor * value:
                solution, value = candidate, candidate_value
                history.append(solution)
                improved = True
                break

    return BaselineResult(
        algorithm=Algorithm.oblivious,
        solution=solution,
        value=value,
        iterations=len(history) - 1,
        history=history,
        oracle_calls=objective.calls - calls,
    )


def linear_nols(
    instance: Instance,
    epsilon: RationalLike,
    cap: int = consts.DEFAULT_CAP_CANDIDATES,
    start: Optional[Iterable[Element]] = None,
) -> BaselineResult:
    """Non-oblivious local search for additive objectives.

    Weights are rounded down once, to multiples of
    alpha = w(S_init) * epsilon / n, and a candidate (A, B) is taken when the
    squared weights of A beat the squared weights of B.
    """
    epsilon = check_epsilon(epsilon)
    objective = instance.objective
    if not isinstance(objective, LinearObjective):
        raise PreconditionError(
            f"Linear search needs a linear objective, got {objective.kind.value}."
        )
    calls = objective.calls
    initial = init_solution(instance)
    solution = initial if start is None else _start(instance, start)
    history = [solution]

    alpha = objective.evaluate(initial) * epsilon / instance.n
    if alpha == 0:
        logger.warning("Every element has weight 0; nothing to improve.")
        return BaselineResult(
            algorithm=Algorithm.linear_nols,
            solution=solution,
            value=objective.evaluate(solution),
            history=history,
            oracle_calls=objective.calls - calls,
        )
    rounded = {e: objective.weight(e) // alpha for e in instance.ground}

    improved = True
    while improved:
        improved = False
        for added, removed in enumerate_k_replacements(instance, solution, cap):
            gain = sum(rounded[a] ** 2 for a in added)
            loss = sum(rounded[b] ** 2 for b in removed)
            if gain > loss:
                solution = (solution - frozenset(removed)) | frozenset(added)
                history.append(solution)
                improved = True
                break

    return BaselineResult(
        algorithm=Algorithm.linear_nols,
        solution=solution,
        value=objective.evaluate(solution),
        iterations=len(history) - 1,
        history=history,
        oracle_calls=objective.calls - calls,
    )


def marginal_weights(
    instance: Instance, solution: Iterable[Element]
) -> dict[Element, Fraction]:
    """f(S) - f(S - e) for e in S, and f(S + e) - f(S) for every other e."""
    objective = instance.objective
    solution = frozenset(solution)
    value = objective.evaluate(solution)
    weights = {}
    for e in instance.ground:
        if e in solution:
            weights[e] = value - objective.evaluate(solution - {e})
        else:
            weights[e] = objective.evaluate(solution | {e}) - value
    return weights


def naive_marginal_nols(
    instance: Instance,
    max_iters: int = consts.DEFAULT_NAIVE_MAX_ITERS,
    start: Optional[Iterable[Element]] = None,
    pivot: PivotRule = PivotRule.best,
    cap: int = consts.DEFAULT_CAP_CANDIDATES,
) -> BaselineResult:
    """Squared-weight search with weights f(S + e) - f(S - e) taken afresh.

    The weights depend on the current solution, so the potential can move
    back and forth and the search may never settle. The run stops at a fixed
    point, when a solution repeats (a cycle), or after ``max_iters`` moves.
    """
    if max_iters < 1:
        raise PreconditionError(f"max_iters must be at least 1, got {max_iters}.")
    objective = instance.objective
    calls = objective.calls
    solution = init_solution(instance) if start is None else _start(instance, start)
    seen = {solution: 0}
    history = [solution]
    cycle_length = None
    terminated = False

    for iteration in range(1, max_iters + 1):
        weights = marginal_weights(instance, solution)

        move, move_margin = None, None
        for added, removed in enumerate_k_replacements(instance, solution, cap):
            margin = sum(weights[a] ** 2 for a in added) - sum(
                weights[b] ** 2 for b in removed
            )
            if margin <= 0:
                continue
            if move is None or margin > move_margin:
                move, move_margin = (added, removed), margin
            if pivot == PivotRule.first:
                break

        if move is None:
            terminated = True
            break
        added, removed = move
        solution = (solution - frozenset(removed)) | frozenset(added)
        history.append(solution)
        if solution in seen:
            cycle_length = iteration - seen[solution]
            logger.info(
                "Solution %s repeats after %d moves.", sorted(solution), cycle_length
            )
            break
        seen[solution] = iteration

    return BaselineResult(
        algorithm=Algorithm.naive,
        solution=solution,
        value=objective.evaluate(solution),
        iterations=len(history) - 1,
        terminated=terminated,
        history=history,
        cycle_length=cycle_length,
        oracle_calls=objective.calls - calls,
    )
