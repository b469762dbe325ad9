"""Non-oblivious local search over k-replacements.

Weights of solution elements are prefix marginals along a total order ≺,
floored to integer multiples of a rounding step α. A candidate (A, B) is
scored with its own prefix-marginal weights computed on top of S \\ B, and is
accepted when the sum of its squared weights beats the squared weights of B.
After each move the order is updated so that the kept elements precede the
added ones; this makes the squared-weight potential grow by at least α² per
move, which bounds the number of moves.

Weights are stored as integers m with weight = m·α, and potentials as integers
in units of α², so every comparison is exact.
"""

__all__ = [
    "Ordering",
    "SolutionState",
    "KReplacement",
    "Improvement",
    "SearchTrace",
    "check_epsilon",
    "init_solution",
    "compute_scale",
    "solution_weights",
    "replacement_weights",
    "make_state",
    "max_removed",
    "estimate_candidates",
    "enumerate_k_replacements",
    "find_improvement",
    "apply_replacement",
    "oracle_ceiling",
    "run",
]

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from kexchange import consts
from kexchange.errors import (
    CapExceeded,
    DegenerateInstance,
    DomainError,
    InternalInvariantError,
    PreconditionError,
)
from kexchange.instance import Instance
from kexchange.objective import Element, Objective
from kexchange.rational import RationalLike, require_rational
from kexchange.systems import IndependenceSystem

logger = logging.getLogger(__name__)

# A rounded weight, as the integer m in m·α.
Multiple = int
Candidate = tuple[tuple[Element, ...], tuple[Element, ...]]


class Ordering:
    """Total order ≺ on the ground set, stored as a rank per element."""

    __slots__ = ("_rank",)

    def __init__(self, elements: Sequence[Element]):
        self._rank: dict[Element, int] = {e: i for i, e in enumerate(elements)}
        if len(self._rank) != len(elements):
            raise DomainError("An ordering cannot list an element twice.")

    @classmethod
    def ascending(cls, ground: Iterable[Element]) -> "Ordering":
        return cls(sorted(ground))

    @property
    def elements(self) -> tuple[Element, ...]:
        return tuple(sorted(self._rank, key=self._rank.__getitem__))

    def rank(self, e: Element) -> int:
        try:
            return self._rank[e]
        except KeyError:
            raise DomainError(f"Element {e} is not ordered.") from None

    def precedes(self, x: Element, y: Element) -> bool:
        return self.rank(x) < self.rank(y)

    def sort(self, subset: Iterable[Element]) -> tuple[Element, ...]:
        return tuple(sorted(subset, key=self.rank))

    def promote(
        self, kept: Iterable[Element], added: Iterable[Element]
    ) -> "Ordering":
        """Order every kept element before every added one.

        Added elements that already follow the last kept element stay where
        they are; the others move, in their current relative order, to just
        behind the last kept element. Order within the kept and within the
        added elements is unchanged.
        """
        kept = set(kept)
        added = set(added) - kept
        if not kept or not added:
            return self
        last = max(kept, key=self.rank)
        moving = [y for y in self.sort(added) if self.precedes(y, last)]
        if not moving:
            return self
        moved = set(moving)
        order = [e for e in self.elements if e not in moved]
        at = order.index(last) + 1
        return Ordering(order[:at] + moving + order[at:])

    def __eq__(self, other) -> bool:
        return isinstance(other, Ordering) and self._rank == other._rank

    def __repr__(self):
        return f"Ordering({list(self.elements)})"


@dataclass(frozen=True)
class SolutionState:
    """Current solution with its rounded weight table.

    Attributes:
        solution: Independent set S.
        weights: Rounded weight of each element of S, as multiples of alpha.
        value: f(S).
        alpha: Rounding step.
        potential: Sum of squared weights, in units of alpha squared.
    """

    solution: frozenset[Element]
    weights: Mapping[Element, Multiple]
    value: Fraction
    alpha: Fraction
    potential: int

    def weight(self, e: Element) -> Fraction:
        return self.weights[e] * self.alpha

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights.values()) * self.alpha


@dataclass(frozen=True)
class KReplacement:
    """Candidate move (A, B) with the weights w_(A,B) of the added elements."""

    added: tuple[Element, ...]
    removed: tuple[Element, ...]
    weights: Mapping[Element, Multiple]

    @property
    def gain(self) -> int:
        """Sum of squared w_(A,B) weights, in units of alpha squared."""
        return sum(m * m for m in self.weights.values())


@dataclass(frozen=True)
class Improvement:
    step: int
    added: tuple[Element, ...]
    removed: tuple[Element, ...]
    potential_before: int
    potential_after: int
    value_before: Fraction
    value_after: Fraction

    def to_line(self) -> str:
        return (
            f"step={self.step} added={len(self.added)} removed={len(self.removed)} "
            f"potential_delta={self.potential_after - self.potential_before} "
            f"value_before={self.value_before} value_after={self.value_after}"
        )


@dataclass
class SearchTrace:
    """Record of one search run.

    ``bound`` is the largest number of improvements the run may make.
    """

    n: int
    k: int
    epsilon: Fraction
    delta: Fraction
    alpha: Fraction
    improvements: list[Improvement] = field(default_factory=list)
    oracle_calls: int = 0
    scans: int = 0
    degenerate: bool = False
    ordering: Optional[Ordering] = None

    @property
    def count(self) -> int:
        return len(self.improvements)

    @property
    def bound(self) -> Fraction:
        return (self.n - 1) * (self.n / self.delta) ** 2

    def to_lines(self) -> list[str]:
        return [improvement.to_line() for improvement in self.improvements]


def check_epsilon(epsilon: RationalLike) -> Fraction:
    epsilon = require_rational(epsilon, "epsilon")
    if not 0 < epsilon <= 1:
        raise PreconditionError(f"Epsilon must lie in (0, 1], got {epsilon}.")
    return epsilon


def init_solution(
    instance: Instance, ordering: Optional[Ordering] = None
) -> frozenset[Element]:
    """Singleton of largest value; ties go to the element ranked first.

    Returns the starting set only. Its weights depend on alpha, which is
    scaled from f of this set, so callers build the state with
    :func:`make_state` once alpha is known.
    """
    if instance.n == 0:
        raise DomainError("The ground set is empty.")
    ordering = ordering or Ordering.ascending(instance.ground)
    best, best_value = None, None
    for e in ordering.sort(instance.ground):
        if not instance.system.is_independent((e,)):
            continue
        value = instance.objective.evaluate((e,))
        if best_value is None or value > best_value:
            best, best_value = e, value
    if best is None:
        raise DomainError("No element is independent on its own.")
    return frozenset((best,))


def compute_scale(
    k: int, n: int, epsilon: RationalLike, f_init: Fraction
) -> tuple[Fraction, Fraction]:
    """Return (delta, alpha) for the given exchange parameter and epsilon.

    delta = (1 + (k + 3) / (2 epsilon))^-1 and alpha = f_init * delta / n.

    Raises:
        DegenerateInstance: ``f_init`` is zero, so alpha would be zero.
    """
    epsilon = check_epsilon(epsilon)
    if f_init <= 0:
        raise DegenerateInstance("The best singleton has value 0.")
    delta = 1 / (1 + Fraction(k + 3) / (2 * epsilon))
    alpha = Fraction(f_init) * delta / n
    return delta, alpha


def _prefix_weights(
    base: frozenset[Element],
    base_value: Fraction,
    elements: Sequence[Element],
    alpha: Fraction,
    objective: Objective,
) -> tuple[dict[Element, Multiple], Fraction]:
    weights: dict[Element, Multiple] = {}
    current, value = set(base), base_value
    for e in elements:
        current.add(e)
        next_value = objective.evaluate(current)
        weights[e] = (next_value - value) // alpha
        value = next_value
    return weights, value


def solution_weights(
    solution: Iterable[Element],
    ordering: Ordering,
    alpha: Fraction,
    objective: Objective,
) -> dict[Element, Multiple]:
    """Prefix-marginal weights of the solution along ≺, floored to alpha."""
    if alpha <= 0:
        raise PreconditionError("The rounding step must be positive.")
    weights, _ = _prefix_weights(
        frozenset(),
        objective.evaluate(()),
        ordering.sort(solution),
        alpha,
        objective,
    )
    return weights


def max_removed(k: int) -> int:
    return k * k - k + 1


def _check_candidate(
    system: IndependenceSystem,
    solution: frozenset[Element],
    added: frozenset[Element],
    removed: frozenset[Element],
):
    k = system.k
    if len(added) > k:
        raise PreconditionError(f"|A| = {len(added)} exceeds k = {k}.")
    if len(removed) > max_removed(k):
        raise PreconditionError(
            f"|B| = {len(removed)} exceeds k^2 - k + 1 = {max_removed(k)}."
        )
    if not removed <= solution:
        raise PreconditionError("B must be a subset of the current solution.")
    if added & (solution - removed):
        raise PreconditionError("A must avoid the elements kept from S.")
    if not system.is_independent((solution - removed) | added):
        raise PreconditionError("(S \\ B) ∪ A is not independent.")


def replacement_weights(
    solution: Iterable[Element],
    added: Iterable[Element],
    removed: Iterable[Element],
    ordering: Ordering,
    alpha: Fraction,
    objective: Objective,
    system: Optional[IndependenceSystem] = None,
) -> dict[Element, Multiple]:
    """Weights w_(A,B) of the added elements, as prefix marginals over S \\ B.

    When ``system`` is given the candidate is checked to be a k-replacement
    first.
    """
    solution = frozenset(solution)
    added, removed = frozenset(added), frozenset(removed)
    if system is not None:
        _check_candidate(system, solution, added, removed)
    if not added:
        return {}
    kept = solution - removed
    weights, _ = _prefix_weights(
        kept, objective.evaluate(kept), ordering.sort(added), alpha, objective
    )
    return weights


def make_state(
    solution: Iterable[Element],
    ordering: Ordering,
    alpha: Fraction,
    objective: Objective,
    check: bool = True,
) -> SolutionState:
    """Compute weights, value and potential of a solution from scratch."""
    solution = frozenset(solution)
    empty_value = objective.evaluate(())
    weights, value = _prefix_weights(
        frozenset(), empty_value, ordering.sort(solution), alpha, objective
    )
    state = SolutionState(
        solution=solution,
        weights=weights,
        value=value,
        alpha=alpha,
        potential=sum(m * m for m in weights.values()),
    )
    if check:
        if any(m < 0 for m in weights.values()):
            raise InternalInvariantError(f"Negative weight in {weights}.")
        total = state.total_weight
        gain = value - empty_value
        if not gain - len(solution) * alpha <= total <= gain:
            raise InternalInvariantError(
                f"Weight sum {total} is outside "
                f"[{gain - len(solution) * alpha}, {gain}]."
            )
    return state


def estimate_candidates(n: int, solution_size: int, k: int) -> int:
    """Number of (A, B) pairs the enumeration may look at."""
    adds = sum(math.comb(n, a) for a in range(k + 1))
    removes = sum(
        math.comb(solution_size, b)
        for b in range(min(solution_size, max_removed(k)) + 1)
    )
    return adds * removes


def enumerate_k_replacements(
    instance: Instance,
    solution: Iterable[Element],
    cap: int = consts.DEFAULT_CAP_CANDIDATES,
) -> Iterator[Candidate]:
    """Yield every k-replacement of ``solution`` in a fixed order.

    Pairs come ordered by |A|, then A, then |B|, then B, with A and B as
    ascending tuples of element ids. An A is only tried when A minus its
    largest element is independent, since every subset of a feasible A is.

    Raises:
        CapExceeded: The candidate estimate is larger than ``cap``.
    """
    system = instance.system
    solution = frozenset(solution)
    k = system.k
    estimate = estimate_candidates(instance.n, len(solution), k)
    if estimate > cap:
        raise CapExceeded("k-replacement candidates", estimate, cap)

    members = sorted(solution)
    largest_b = min(len(members), max_removed(k))
    frontier: set[tuple[Element, ...]] = {()}
    for size_a in range(k + 1):
        if size_a == 0:
            layer = [()]
        else:
            layer = [
                combo
                for combo in itertools.combinations(instance.ground, size_a)
                if combo[:-1] in frontier and system.is_independent(combo)
            ]
        frontier = set(layer)
        for added in layer:
            forced = solution.intersection(added)
            for size_b in range(len(forced), largest_b + 1):
                for removed in itertools.combinations(members, size_b):
                    if not forced.issubset(removed):
                        continue
                    if system.is_independent(
                        (solution - frozenset(removed)) | frozenset(added)
                    ):
                        yield added, removed


def find_improvement(
    instance: Instance,
    state: SolutionState,
    ordering: Ordering,
    cap: int = consts.DEFAULT_CAP_CANDIDATES,
    literal_pseudocode: bool = False,
) -> Optional[KReplacement]:
    """First candidate whose squared w_(A,B) weights beat those of B.

    With ``literal_pseudocode`` the candidate has to beat the potential of
    the whole solution instead.
    """
    for added, removed in enumerate_k_replacements(instance, state.solution, cap):
        if not added:
            continue
        weights = replacement_weights(
            state.solution,
            added,
            removed,
            ordering,
            state.alpha,
            instance.objective,
        )
        gain = sum(m * m for m in weights.values())
        if literal_pseudocode:
            loss = state.potential
        else:
            loss = sum(state.weights[b] ** 2 for b in removed)
        if gain > loss:
            return KReplacement(added=added, removed=removed, weights=weights)
    return None


def _check_replacement_sum(
    instance: Instance, state: SolutionState, replacement: KReplacement
):
    objective = instance.objective
    union = objective.evaluate(state.solution | frozenset(replacement.added))
    floor = union - state.value - len(replacement.added) * state.alpha
    total = sum(replacement.weights.values()) * state.alpha
    if total < floor:
        raise InternalInvariantError(
            f"Replacement weights of {replacement.added} sum to {total} < {floor}."
        )


def apply_replacement(
    instance: Instance,
    state: SolutionState,
    ordering: Ordering,
    replacement: KReplacement,
    check: bool = True,
) -> tuple[SolutionState, Ordering]:
    """Move to (S \\ B) ∪ A, reorder and recompute all weights.

    With ``check`` the potential has to grow by at least one unit of alpha
    squared, and no kept or added element may lose weight.
    """
    added, removed = frozenset(replacement.added), frozenset(replacement.removed)
    _check_candidate(instance.system, state.solution, added, removed)
    kept = state.solution - removed
    new_ordering = ordering.promote(kept, added)
    new_state = make_state(
        kept | added, new_ordering, state.alpha, instance.objective, check=check
    )
    if check:
        for x in kept:
            if new_state.weights[x] < state.weights[x]:
                raise InternalInvariantError(
                    f"Weight of kept element {x} fell from "
                    f"{state.weights[x]} to {new_state.weights[x]}."
                )
        for y in added:
            if new_state.weights[y] < replacement.weights[y]:
                raise InternalInvariantError(
                    f"Weight of added element {y} fell from "
                    f"{replacement.weights[y]} to {new_state.weights[y]}."
                )
        if new_state.potential < state.potential + 1:
            raise InternalInvariantError(
                f"Potential went from {state.potential} to {new_state.potential}."
            )
    return new_state, new_ordering


def oracle_ceiling(improvements: int, n: int, k: int) -> int:
    """Soft ceiling on oracle calls for a run with the given improvement count."""
    return consts.ORACLE_CEILING_CONSTANT * max(improvements, 1) * k * k * (
        max(n, 1) ** (k * k + 1)
    )


def run(
    instance: Instance,
    epsilon: RationalLike,
    cap_candidates: int = consts.DEFAULT_CAP_CANDIDATES,
    literal_pseudocode: bool = False,
    check_invariants: bool = True,
) -> tuple[SolutionState, SearchTrace]:
    """Run the search to a local optimum.

    Args:
        instance: Instance to solve.
        epsilon: Approximation parameter in (0, 1].
        cap_candidates: Largest candidate count a scan may enumerate.
        literal_pseudocode: Compare candidates against the whole potential.
        check_invariants: Verify weight sums, potential growth and the
            improvement bound while running.

    Returns:
        Final state and the trace of accepted improvements.
    """
    epsilon = check_epsilon(epsilon)
    objective = instance.objective
    calls_before = objective.calls
    ordering = Ordering.ascending(instance.ground)
    start = init_solution(instance, ordering)
    f_init = objective.evaluate(start)

    try:
        delta, alpha = compute_scale(instance.k, instance.n, epsilon, f_init)
    except DegenerateInstance:
        logger.warning("Every singleton has value 0; returning %s.", sorted(start))
        delta = 1 / (1 + Fraction(instance.k + 3) / (2 * epsilon))
        state = SolutionState(
            solution=start,
            weights={e: 0 for e in start},
            value=f_init,
            alpha=Fraction(0),
            potential=0,
        )
        trace = SearchTrace(
            n=instance.n,
            k=instance.k,
            epsilon=epsilon,
            delta=delta,
            alpha=Fraction(0),
            degenerate=True,
            ordering=ordering,
            oracle_calls=objective.calls - calls_before,
        )
        return state, trace

    trace = SearchTrace(
        n=instance.n, k=instance.k, epsilon=epsilon, delta=delta, alpha=alpha
    )
    state = make_state(start, ordering, alpha, objective, check=check_invariants)
    while True:
        trace.scans += 1
        replacement = find_improvement(
            instance,
            state,
            ordering,
            cap=cap_candidates,
            literal_pseudocode=literal_pseudocode,
        )
        if replacement is None:
            break
        if check_invariants:
            _check_replacement_sum(instance, state, replacement)
        new_state, ordering = apply_replacement(
            instance, state, ordering, replacement, check=check_invariants
        )
        trace.improvements.append(
            Improvement(
                step=trace.count + 1,
                added=replacement.added,
                removed=replacement.removed,
                potential_before=state.potential,
                potential_after=new_state.potential,
                value_before=state.value,
                value_after=new_state.value,
            )
        )
        logger.debug(trace.improvements[-1].to_line())
        state = new_state
        if check_invariants and trace.count > trace.bound:
            raise InternalInvariantError(
                f"{trace.count} improvements exceed the bound {trace.bound}."
            )

    trace.ordering = ordering
    trace.oracle_calls = objective.calls - calls_before
    ceiling = oracle_ceiling(trace.count, instance.n, instance.k)
    if trace.oracle_calls > ceiling:
        logger.warning(
            "Run used %d oracle calls, above the soft ceiling of %d.",
            trace.oracle_calls,
            ceiling,
        )
    return state, trace
