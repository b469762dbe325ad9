"""Independence systems and exchange witnesses.

Two systems are provided: k-set packing, where a collection of sets is
independent when the sets are pairwise disjoint, and an explicit system given
by its maximal sets. Both are immutable once built.
"""

__all__ = [
    "IndependenceSystem",
    "SetPackingSystem",
    "ExplicitSystem",
    "ExchangeWitness",
    "WitnessReport",
    "verify_witness",
]

import abc
import itertools
from dataclasses import dataclass, field
from typing import ClassVar, Iterable, Mapping, Optional

from kexchange import consts
from kexchange.enums import ExchangeAxiom, SystemKind
from kexchange.errors import CapExceeded, DomainError, PreconditionError
from kexchange.objective import Element


class IndependenceSystem(abc.ABC):
    """Hereditary family of subsets of a finite ground set.

    Attributes:
        ground: Ground elements in ascending order.
        k: Exchange parameter of the system.
    """

    kind: ClassVar[SystemKind]

    def __init__(self, ground: Iterable[Element], k: int):
        if k < 1:
            raise DomainError(f"Exchange parameter must be at least 1, got {k}.")
        self.ground: tuple[Element, ...] = tuple(sorted(set(ground)))
        self._members = frozenset(self.ground)
        self.k = k

    @property
    def n(self) -> int:
        return len(self.ground)

    def _check(self, subset: Iterable[Element]) -> frozenset[Element]:
        subset = frozenset(subset)
        unknown = subset - self._members
        if unknown:
            raise DomainError(f"Unknown elements: {sorted(unknown)}.")
        return subset

    def is_independent(self, subset: Iterable[Element]) -> bool:
        """Membership oracle; the empty set is always independent."""
        subset = self._check(subset)
        if not subset:
            return True
        return self._independent(subset)

    @abc.abstractmethod
    def _independent(self, subset: frozenset[Element]) -> bool:
        pass


class SetPackingSystem(IndependenceSystem):
    """k-set packing: independent iff the chosen sets are pairwise disjoint.

    Args:
        sets: Items of each ground element.
        k: Maximum set size. Defaults to the largest given set.
    """

    kind = SystemKind.set_packing

    def __init__(
        self, sets: Mapping[Element, Iterable[str]], k: Optional[int] = None
    ):
        self.sets: dict[Element, frozenset[str]] = {
            e: frozenset(items) for e, items in sets.items()
        }
        largest = max((len(items) for items in self.sets.values()), default=1)
        super().__init__(self.sets.keys(), largest if k is None else k)
        for e, items in self.sets.items():
            if not 1 <= len(items) <= self.k:
                raise DomainError(
                    f"Set of element {e} has {len(items)} items, "
                    f"expected between 1 and {self.k}."
                )

    @property
    def universe(self) -> frozenset[str]:
        return frozenset().union(*self.sets.values())

    def _independent(self, subset: frozenset[Element]) -> bool:
        seen: set[str] = set()
        for e in subset:
            items = self.sets[e]
            if not seen.isdisjoint(items):
                return False
            seen |= items
        return True

    def conflicts(self, e: Element, others: Iterable[Element]) -> frozenset[Element]:
        """Elements of ``others`` whose sets meet the set of ``e``."""
        items = self.sets[e]
        return frozenset(b for b in others if not items.isdisjoint(self.sets[b]))

    def build_witness(
        self, a: Iterable[Element], b: Iterable[Element]
    ) -> "ExchangeWitness":
        """Neighbourhood of every element of ``a`` inside ``b``.

        Elements of a \\ b get the elements of b \\ a whose sets intersect
        theirs; elements shared by both sets get themselves.
        """
        a, b = self._check(a), self._check(b)
        if not self.is_independent(a):
            raise PreconditionError(f"Set {sorted(a)} is not independent.")
        if not self.is_independent(b):
            raise PreconditionError(f"Set {sorted(b)} is not independent.")
        only_b = b - a
        neighborhoods = {e: self.conflicts(e, only_b) for e in sorted(a - b)}
        shared = {x: frozenset((x,)) for x in sorted(a & b)}
        return ExchangeWitness(neighborhoods=neighborhoods, shared=shared)


class ExplicitSystem(IndependenceSystem):
    """Downward closure of a list of maximal sets.

    ``declared_k`` is taken on trust: checking it globally is exponential, so
    only individual pairs are checked, through :func:`verify_witness`.
    """

    kind = SystemKind.explicit

    def __init__(
        self,
        maximal_sets: Iterable[Iterable[Element]],
        declared_k: int,
        ground: Optional[Iterable[Element]] = None,
    ):
        self.maximal_sets: tuple[frozenset[Element], ...] = tuple(
            frozenset(s) for s in maximal_sets
        )
        listed = frozenset().union(*self.maximal_sets)
        ground = listed if ground is None else frozenset(ground)
        if not listed <= ground:
            raise DomainError(
                f"Maximal sets use elements outside the ground set: "
                f"{sorted(listed - ground)}."
            )
        super().__init__(ground, declared_k)

    def _independent(self, subset: frozenset[Element]) -> bool:
        return any(subset <= basis for basis in self.maximal_sets)


@dataclass(frozen=True)
class ExchangeWitness:
    """Neighbourhoods Y_e of the elements of A inside B.

    Attributes:
        neighborhoods: Y_e ⊆ B \\ A for every e ∈ A \\ B.
        shared: Y_x = {x} for every x ∈ A ∩ B.
    """

    neighborhoods: Mapping[Element, frozenset[Element]]
    shared: Mapping[Element, frozenset[Element]] = field(default_factory=dict)

    def __getitem__(self, e: Element) -> frozenset[Element]:
        if e in self.neighborhoods:
            return self.neighborhoods[e]
        return self.shared[e]

    def all(self) -> dict[Element, frozenset[Element]]:
        return {**self.neighborhoods, **self.shared}


@dataclass(frozen=True)
class WitnessReport:
    passed: bool
    axiom: Optional[ExchangeAxiom] = None
    detail: str = ""
    subset: Optional[frozenset[Element]] = None


def verify_witness(
    system: IndependenceSystem,
    a: Iterable[Element],
    b: Iterable[Element],
    witness: ExchangeWitness,
    k: Optional[int] = None,
    c_cap: int = consts.DEFAULT_WITNESS_CAP,
) -> WitnessReport:
    """Check the size, load and exchange properties of a witness for (a, b).

    The exchange property is checked for every C ⊆ a \\ b in order of
    increasing size, stopping at the first failing C.

    Raises:
        CapExceeded: |a \\ b| is larger than ``c_cap``.
    """
    a, b = frozenset(a), frozenset(b)
    k = system.k if k is None else k
    only_a = sorted(a - b)
    only_b = b - a
    if len(only_a) > c_cap:
        raise CapExceeded("exchange subsets of A \\ B", len(only_a), c_cap)

    if set(witness.neighborhoods) != set(only_a):
        return WitnessReport(
            passed=False,
            axiom=ExchangeAxiom.shape,
            detail="Neighbourhoods are not indexed by A \\ B.",
        )
    for e in only_a:
        if not witness.neighborhoods[e] <= only_b:
            return WitnessReport(
                passed=False,
                axiom=ExchangeAxiom.shape,
                detail=f"Neighbourhood of {e} is not inside B \\ A.",
                subset=frozenset((e,)),
            )

    for e, ys in witness.all().items():
        if len(ys) > k:
            return WitnessReport(
                passed=False,
                axiom=ExchangeAxiom.size,
                detail=f"Neighbourhood of {e} has {len(ys)} > {k} elements.",
                subset=frozenset((e,)),
            )

    for y in sorted(only_b):
        load = sum(1 for e in only_a if y in witness.neighborhoods[e])
        if load > k:
            return WitnessReport(
                passed=False,
                axiom=ExchangeAxiom.load,
                detail=f"Element {y} appears in {load} > {k} neighbourhoods.",
                subset=frozenset((y,)),
            )

    for size in range(len(only_a) + 1):
        for chosen in itertools.combinations(only_a, size):
            removed = frozenset().union(*(witness.neighborhoods[e] for e in chosen))
            if not system.is_independent((b - removed) | frozenset(chosen)):
                return WitnessReport(
                    passed=False,
                    axiom=ExchangeAxiom.exchange,
                    detail=f"Exchanging {list(chosen)} into B is not independent.",
                    subset=frozenset(chosen),
                )

    return WitnessReport(passed=True)
