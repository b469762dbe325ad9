"""Value oracles for monotone submodular objectives.

All values are :class:`fractions.Fraction`, so every comparison made by the
search and the auditor is exact. Each oracle counts its own evaluations;
counters are per process and are summed by the caller when work is spread
over a worker pool.
"""

__all__ = [
    "Element",
    "Objective",
    "CoverageObjective",
    "LinearObjective",
    "SetFunctionObjective",
    "Violation",
    "CertificationReport",
    "certify_monotone_submodular",
]

import abc
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, ClassVar, Iterable, Mapping, Optional

from kexchange import consts
from kexchange.enums import ObjectiveKind
from kexchange.errors import CapExceeded, DomainError, PreconditionError
from kexchange.rational import RationalLike, parse_rational
from kexchange.table import Column, RichTableMixin

logger = logging.getLogger(__name__)

Element = int


class Objective(abc.ABC):
    """Monotone submodular set function on a finite ground set."""

    kind: ClassVar[ObjectiveKind]

    def __init__(self, ground: Iterable[Element]):
        self.ground: frozenset[Element] = frozenset(ground)
        self.calls = 0

    def _check(self, subset: Iterable[Element]) -> frozenset[Element]:
        subset = frozenset(subset)
        unknown = subset - self.ground
        if unknown:
            raise DomainError(f"Unknown elements: {sorted(unknown)}.")
        return subset

    @abc.abstractmethod
    def _value(self, subset: frozenset[Element]) -> Fraction:
        """Uncounted evaluation of an already validated subset."""

    def evaluate(self, subset: Iterable[Element]) -> Fraction:
        """Return f(subset)."""
        subset = self._check(subset)
        self.calls += 1
        return self._value(subset)

    def marginal(self, base: Iterable[Element], element: Element) -> Fraction:
        """Return f(base + element) - f(base)."""
        base = self._check(base)
        self._check((element,))
        if element in base:
            raise PreconditionError(f"Element {element} is already in the base set.")
        return self.evaluate(base | {element}) - self.evaluate(base)

    def reset_calls(self) -> int:
        """Zero the call counter and return its previous value."""
        calls, self.calls = self.calls, 0
        return calls


class CoverageObjective(Objective):
    """Weighted coverage: total weight of the items covered by the chosen sets.

    Args:
        covers: Items covered by each ground element.
        universe: Declared item universe. Defaults to the union of the covers.
        item_weight: Weight per item; missing items weigh 1.
    """

    kind = ObjectiveKind.coverage

    def __init__(
        self,
        covers: Mapping[Element, Iterable[str]],
        universe: Optional[Iterable[str]] = None,
        item_weight: Optional[Mapping[str, RationalLike]] = None,
    ):
        super().__init__(covers.keys())
        self.covers: dict[Element, frozenset[str]] = {
            e: frozenset(items) for e, items in covers.items()
        }
        if universe is None:
            universe = frozenset().union(*self.covers.values())
        self.universe: frozenset[str] = frozenset(universe)

        for e, items in self.covers.items():
            if not items:
                raise DomainError(f"Element {e} covers no items.")
            outside = items - self.universe
            if outside:
                raise DomainError(
                    f"Element {e} covers items outside the universe: "
                    f"{sorted(outside)}."
                )

        self.item_weight: dict[str, Fraction] = {
            item: Fraction(1) for item in self.universe
        }
        for item, weight in (item_weight or {}).items():
            if item not in self.universe:
                raise DomainError(f"Weight given for unknown item '{item}'.")
            weight = parse_rational(weight)
            if weight < 0:
                raise DomainError(f"Item '{item}' has negative weight {weight}.")
            self.item_weight[item] = weight

    def _value(self, subset: frozenset[Element]) -> Fraction:
        covered: set[str] = set()
        for e in subset:
            covered |= self.covers[e]
        return sum((self.item_weight[item] for item in covered), Fraction(0))


class LinearObjective(Objective):
    """Additive objective f(A) = sum of w(e) over A."""

    kind = ObjectiveKind.linear

    def __init__(self, elem_weight: Mapping[Element, RationalLike]):
        super().__init__(elem_weight.keys())
        self.elem_weight: dict[Element, Fraction] = {}
        for e, weight in elem_weight.items():
            weight = parse_rational(weight)
            if weight < 0:
                raise DomainError(f"Element {e} has negative weight {weight}.")
            self.elem_weight[e] = weight

    def _value(self, subset: frozenset[Element]) -> Fraction:
        return sum((self.elem_weight[e] for e in subset), Fraction(0))

    def weight(self, element: Element) -> Fraction:
        self._check((element,))
        return self.elem_weight[element]


class SetFunctionObjective(Objective):
    """Counted oracle around an in-process callable.

    Nothing about ``func`` is assumed; run :func:`certify_monotone_submodular`
    before trusting it with the search.
    """

    kind = ObjectiveKind.function

    def __init__(
        self,
        ground: Iterable[Element],
        func: Callable[[frozenset[Element]], RationalLike],
    ):
        super().__init__(ground)
        self.func = func

    def _value(self, subset: frozenset[Element]) -> Fraction:
        return parse_rational(self.func(subset))


@dataclass(frozen=True)
class Violation:
    """A concrete counterexample to monotonicity or diminishing returns.

    For ``monotone`` the witness is ``smaller`` ⊂ ``larger`` with
    f(smaller) > f(larger). For ``submodular`` the marginal of ``element``
    over ``smaller`` is below its marginal over ``larger``.
    """

    kind: str
    smaller: frozenset[Element]
    larger: frozenset[Element]
    element: Optional[Element]
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class CertificationReport(RichTableMixin):
    HEADERS = [
        Column(title="Elements", path="size", align=Column.Align.right),
        Column(title="Subsets", path="subsets", align=Column.Align.right),
        Column(title="Passed", path="passed"),
        Column(title="Violation", path=lambda r: r.describe()),
    ]

    size: int
    subsets: int
    violation: Optional[Violation] = None

    @property
    def passed(self) -> bool:
        return self.violation is None

    def describe(self) -> str:
        v = self.violation
        if v is None:
            return "-"
        return (
            f"{v.kind}: S={sorted(v.smaller)} T={sorted(v.larger)} "
            f"x={v.element} ({v.lhs} < {v.rhs})"
        )


def certify_monotone_submodular(
    objective: Objective,
    ground: Optional[Iterable[Element]] = None,
    max_n: int = consts.DEFAULT_CERTIFY_CAP,
) -> CertificationReport:
    """Exhaustively check monotonicity and diminishing returns.

    Every subset is evaluated once. Monotonicity is checked on every covering
    pair S ⊂ S + x, and diminishing returns on every pair S ⊂ S + y against
    every x outside S + y; both local forms are equivalent to the statements
    over all chains S ⊆ T, and the reported witness is a pair of that shape.

    Raises:
        CapExceeded: The ground set is larger than ``max_n``; nothing is
            evaluated in that case.
    """
    elements = sorted(objective.ground if ground is None else set(ground))
    n = len(elements)
    if n > max_n:
        raise CapExceeded("certification ground set", n, max_n)

    def subset_of(mask: int) -> frozenset[Element]:
        return frozenset(elements[i] for i in range(n) if mask >> i & 1)

    values = [objective.evaluate(subset_of(mask)) for mask in range(1 << n)]

    for mask in range(1 << n):
        for i in range(n):
            if mask >> i & 1:
                continue
            if values[mask | 1 << i] < values[mask]:
                return CertificationReport(
                    size=n,
                    subsets=len(values),
                    violation=Violation(
                        kind="monotone",
                        smaller=subset_of(mask),
                        larger=subset_of(mask | 1 << i),
                        element=None,
                        lhs=values[mask | 1 << i],
                        rhs=values[mask],
                    ),
                )

    for mask in range(1 << n):
        outside = [i for i in range(n) if not mask >> i & 1]
        for j, i in itertools.permutations(outside, 2):
            bigger = mask | 1 << j
            gain_small = values[mask | 1 << i] - values[mask]
            gain_big = values[bigger | 1 << i] - values[bigger]
            if gain_small < gain_big:
                return CertificationReport(
                    size=n,
                    subsets=len(values),
                    violation=Violation(
                        kind="submodular",
                        smaller=subset_of(mask),
                        larger=subset_of(bigger),
                        element=elements[i],
                        lhs=gain_small,
                        rhs=gain_big,
                    ),
                )

    logger.debug("Certified %d elements over %d subsets.", n, len(values))
    return CertificationReport(size=n, subsets=len(values))
