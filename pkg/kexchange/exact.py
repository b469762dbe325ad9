"""Exact optimum by enumeration, and an auditor for locally optimal solutions.

The auditor rebuilds the charging argument behind the approximation bound on
a concrete run: every optimal element is charged to the heaviest solution
element it conflicts with, and each inequality of the argument is checked in
exact arithmetic with the same rounded weights the search used.
"""

__all__ = [
    "brute_force_opt",
    "PartitionWitness",
    "build_partition_witness",
    "CheckResult",
    "AuditReport",
    "check_lemma1",
    "check_lemma2",
    "check_lemma3_and_theorem1",
    "audit",
    "write_checks_csv",
]

import csv
import logging
import operator
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, TextIO, Union

from kexchange import consts
from kexchange.enums import AuditCheck
from kexchange.errors import AuditFailure, CapExceeded, PreconditionError
from kexchange.instance import Instance
from kexchange.objective import Element, Objective
from kexchange.rational import RationalLike
from kexchange.search import (
    Multiple,
    Ordering,
    SolutionState,
    check_epsilon,
    find_improvement,
    max_removed,
    replacement_weights,
)
from kexchange.systems import ExchangeWitness, SetPackingSystem
from kexchange.table import Column, RichTableMixin

logger = logging.getLogger(__name__)

RELATIONS = {"<=": operator.le, ">=": operator.ge, "==": operator.eq}


def brute_force_opt(
    instance: Instance, cap: int = consts.DEFAULT_BRUTE_CAP
) -> tuple[frozenset[Element], Fraction]:
    """Maximum-value independent set, lexicographically first among ties.

    Independent sets are visited depth first in lexicographic order of their
    sorted element tuples; a branch is cut as soon as it becomes dependent.

    Raises:
        CapExceeded: The ground set is larger than ``cap``.
    """
    if instance.n > cap:
        raise CapExceeded("brute-force ground set", instance.n, cap)
    system, objective = instance.system, instance.objective
    ground = instance.ground
    best: list = [(), objective.evaluate(())]

    def visit(current: tuple[Element, ...], start: int):
        for i in range(start, len(ground)):
            candidate = current + (ground[i],)
            if not system.is_independent(candidate):
                continue
            value = objective.evaluate(candidate)
            if value > best[1]:
                best[:] = [candidate, value]
            visit(candidate, i + 1)

    visit((), 0)
    return frozenset(best[0]), best[1]


@dataclass(frozen=True)
class PartitionWitness:
    """Charging of an optimum O against a solution S.

    Attributes:
        neighborhoods: Neighbourhood Y_e ⊆ S of every e ∈ O.
        parts: P_x, the elements of O whose heaviest neighbour is x.
        neighbors: N_x, the union of Y_e over e ∈ P_x.
        free: Elements of O with an empty neighbourhood.
    """

    neighborhoods: ExchangeWitness
    parts: Mapping[Element, frozenset[Element]]
    neighbors: Mapping[Element, frozenset[Element]]
    free: frozenset[Element] = frozenset()


def _heaviest(candidates: Iterable[Element], weights: Mapping[Element, Multiple]):
    best = None
    for z in sorted(candidates):
        if best is None or weights[z] > weights[best]:
            best = z
    return best


def build_partition_witness(
    instance: Instance,
    solution: Iterable[Element],
    optimum: Iterable[Element],
    weights: Mapping[Element, Multiple],
) -> PartitionWitness:
    """Assign each e ∈ O to the heaviest x in its neighbourhood inside S.

    Ties go to the smallest element id. Elements of O whose neighbourhood is
    empty are kept apart in ``free``; for those, ({e}, ∅) is itself a
    k-replacement.

    Raises:
        PreconditionError: The system is not a set packing system.
        AuditFailure: The built charging breaks one of its invariants.
    """
    system = instance.system
    if not isinstance(system, SetPackingSystem):
        raise PreconditionError("Partition witnesses need a set packing system.")
    solution, optimum = frozenset(solution), frozenset(optimum)
    neighborhoods = system.build_witness(optimum, solution)

    parts: dict[Element, set[Element]] = {x: set() for x in solution}
    free = set()
    for e in sorted(optimum):
        ys = neighborhoods[e]
        if not ys:
            free.add(e)
            continue
        parts[_heaviest(ys, weights)].add(e)
    neighbors = {
        x: frozenset().union(*(neighborhoods[e] for e in part))
        for x, part in parts.items()
    }
    witness = PartitionWitness(
        neighborhoods=neighborhoods,
        parts={x: frozenset(part) for x, part in parts.items()},
        neighbors=neighbors,
        free=frozenset(free),
    )
    _verify_partition(instance, solution, optimum, weights, witness)
    return witness


def _verify_partition(
    instance: Instance,
    solution: frozenset[Element],
    optimum: frozenset[Element],
    weights: Mapping[Element, Multiple],
    witness: PartitionWitness,
):
    k = instance.k
    check = AuditCheck.partition.value
    assigned = [e for part in witness.parts.values() for e in part]
    if len(assigned) + len(witness.free) != len(optimum) or (
        set(assigned) | witness.free != optimum
    ):
        raise AuditFailure(check, "Parts do not partition the optimum.", assigned)

    for x, part in witness.parts.items():
        for e in part:
            ys = witness.neighborhoods[e]
            if x not in ys or any(weights[z] > weights[x] for z in ys):
                raise AuditFailure(
                    check, f"{x} is not the heaviest neighbour of {e}.", (x, e)
                )
        if len(part) > k:
            raise AuditFailure(check, f"|P_{x}| = {len(part)} exceeds {k}.", x)
        neighbors = witness.neighbors[x]
        if len(neighbors) > max_removed(k):
            raise AuditFailure(
                check, f"|N_{x}| = {len(neighbors)} exceeds {max_removed(k)}.", x
            )
        if part and max(weights[z] for z in neighbors) != weights[x]:
            raise AuditFailure(check, f"{x} is not the heaviest of N_{x}.", x)
        kept = solution - neighbors
        if part & kept or not instance.system.is_independent(kept | part):
            raise AuditFailure(check, f"(P_{x}, N_{x}) is not a k-replacement.", x)


@dataclass(frozen=True)
class CheckResult(RichTableMixin):
    """One checked inequality ``lhs relation rhs``."""

    HEADERS = [
        Column(title="Check", path="check"),
        Column(title="Subject", path="subject"),
        Column(title="Passed", path="passed"),
        Column(title="LHS", path="lhs", align=Column.Align.right),
        Column(title="Relation", path="relation", align=Column.Align.center),
        Column(title="RHS", path="rhs", align=Column.Align.right),
        Column(title="Detail", path="detail"),
    ]

    check: AuditCheck
    subject: str
    lhs: Optional[Fraction]
    relation: str
    rhs: Optional[Fraction]
    passed: bool
    detail: str = ""

    @classmethod
    def compare(
        cls,
        check: AuditCheck,
        subject: str,
        lhs: RationalLike,
        relation: str,
        rhs: RationalLike,
        detail: str = "",
    ) -> "CheckResult":
        lhs, rhs = Fraction(lhs), Fraction(rhs)
        return cls(
            check=check,
            subject=subject,
            lhs=lhs,
            relation=relation,
            rhs=rhs,
            passed=RELATIONS[relation](lhs, rhs),
            detail=detail,
        )

    @classmethod
    def failure(cls, check: AuditCheck, subject: str, detail: str) -> "CheckResult":
        return cls(
            check=check,
            subject=subject,
            lhs=None,
            relation="",
            rhs=None,
            passed=False,
            detail=detail,
        )


@dataclass
class AuditReport:
    """Outcome of auditing one locally optimal solution.

    Attributes:
        value: f(S).
        opt_value: f(O) of the brute-force optimum.
        optimum: The optimum O.
        ratio: f(O) / f(S), or None when both are zero.
        bound: (k + 3) / 2 + epsilon.
        checks: Every checked inequality, in the order checked.
        witness: The charging, for set packing systems.
    """

    value: Fraction
    opt_value: Fraction
    optimum: frozenset[Element]
    ratio: Optional[Fraction]
    bound: Fraction
    checks: list[CheckResult] = field(default_factory=list)
    witness: Optional[PartitionWitness] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        return next((check for check in self.checks if not check.passed), None)

    @property
    def summary(self) -> CheckResult:
        """The ratio f(O) / f(S) against the bound."""
        detail = f"f(S)={self.value} f(O)={self.opt_value}"
        if self.ratio is None:
            return CheckResult(
                check=AuditCheck.ratio,
                subject="f(O)/f(S)",
                lhs=None,
                relation="<=",
                rhs=self.bound,
                passed=self.opt_value == 0,
                detail=detail,
            )
        return CheckResult.compare(
            AuditCheck.ratio, "f(O)/f(S)", self.ratio, "<=", self.bound, detail
        )


def write_checks_csv(
    checks: Sequence[CheckResult], out: Union[str, Path, TextIO]
) -> None:
    """Write check rows as CSV under the :class:`CheckResult` column titles."""
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="", encoding="utf-8") as f:
            write_checks_csv(checks, f)
        return
    writer = csv.DictWriter(
        out, fieldnames=[c.title for c in CheckResult.HEADERS], lineterminator="\n"
    )
    writer.writeheader()
    for check in checks:
        writer.writerow(check.to_record())


def check_lemma1(
    objective: Objective,
    base: Iterable[Element],
    target: Iterable[Element],
    parts: Sequence[Iterable[Element]],
) -> CheckResult:
    """Sum of the gains of the blocks is at least the gain of their union.

    ``parts`` must partition target \\ base.
    """
    base, target = frozenset(base), frozenset(target)
    parts = [frozenset(part) for part in parts]
    covered = [e for part in parts for e in part]
    if len(covered) != len(set(covered)) or set(covered) != target - base:
        raise PreconditionError("Blocks must partition target \\ base.")
    base_value = objective.evaluate(base)
    lhs = sum(
        (objective.evaluate(base | part) - base_value for part in parts), Fraction(0)
    )
    rhs = objective.evaluate(base | target) - base_value
    return CheckResult.compare(
        AuditCheck.partition_submodularity, f"{len(parts)} blocks", lhs, ">=", rhs
    )


def check_lemma2(
    w_x: RationalLike, w_e: RationalLike, others: Sequence[RationalLike]
) -> CheckResult:
    """Squared-weight inequality for one charged element.

    Args:
        w_x: Weight of the heaviest neighbour x.
        w_e: Replacement weight of the charged element e.
        others: Weights of the other neighbours of e, each at most ``w_x``.

    Checks w_e² - Σ others² >= w_x · (2 w_e - (w_x + Σ others)).
    """
    w_x, w_e = Fraction(w_x), Fraction(w_e)
    others = [Fraction(w) for w in others]
    if w_x < 0 or w_e < 0 or any(w < 0 for w in others):
        raise PreconditionError("Weights must be nonnegative.")
    if any(w > w_x for w in others):
        raise PreconditionError("The neighbour x must be the heaviest.")
    lhs = w_e**2 - sum(w**2 for w in others)
    rhs = w_x * (2 * w_e - (w_x + sum(others)))
    return CheckResult.compare(AuditCheck.squared_weight, "", lhs, ">=", rhs)


def check_lemma3_and_theorem1(
    instance: Instance,
    state: SolutionState,
    ordering: Ordering,
    epsilon: RationalLike,
    brute_cap: int = consts.DEFAULT_BRUTE_CAP,
    cap_candidates: int = consts.DEFAULT_CAP_CANDIDATES,
    optimum: Optional[tuple[frozenset[Element], Fraction]] = None,
) -> AuditReport:
    """Audit a locally optimal state against the brute-force optimum.

    Set packing instances get the full charging audit; other systems get the
    weight-sum and ratio checks only.

    Raises:
        PreconditionError: The state still has an improving k-replacement.
        CapExceeded: The instance is too large for the brute-force optimum.
    """
    epsilon = check_epsilon(epsilon)
    system, solution, alpha = instance.system, state.solution, state.alpha
    k = instance.k

    if alpha > 0 and (
        find_improvement(instance, state, ordering, cap=cap_candidates) is not None
    ):
        raise PreconditionError("The audited solution is not locally optimal.")

    optimum_set, opt_value = optimum or brute_force_opt(instance, brute_cap)
    value = state.value
    bound = Fraction(k + 3, 2) + epsilon
    report = AuditReport(
        value=value,
        opt_value=opt_value,
        optimum=optimum_set,
        ratio=opt_value / value if value > 0 else None,
        bound=bound,
    )
    checks = report.checks
    checks.append(
        CheckResult.compare(
            AuditCheck.local_optimum, "S", 0, "==", 0, "no improving k-replacement"
        )
    )
    checks.append(
        CheckResult.compare(
            AuditCheck.weight_sum, "S", state.total_weight, "<=", value
        )
    )

    if isinstance(system, SetPackingSystem) and alpha > 0:
        try:
            report.witness = build_partition_witness(
                instance, solution, optimum_set, state.weights
            )
        except AuditFailure as e:
            checks.append(CheckResult.failure(AuditCheck.partition, "S", e.message))
        else:
            checks.append(
                CheckResult.compare(
                    AuditCheck.partition,
                    "O",
                    sum(len(p) for p in report.witness.parts.values())
                    + len(report.witness.free),
                    "==",
                    len(optimum_set),
                )
            )
            _audit_charging(instance, state, ordering, epsilon, report)

    checks.append(
        CheckResult.compare(AuditCheck.ratio, "O", opt_value, "<=", bound * value)
    )
    if not report.passed:
        logger.warning("Audit failed: %s", report.first_failure)
    return report


def _audit_charging(
    instance: Instance,
    state: SolutionState,
    ordering: Ordering,
    epsilon: Fraction,
    report: AuditReport,
):
    objective, system = instance.objective, instance.system
    solution, alpha, weights = state.solution, state.alpha, state.weights
    witness = report.witness
    optimum = report.optimum
    checks = report.checks
    k = instance.k

    for x in sorted(solution):
        part, neighbors = witness.parts[x], witness.neighbors[x]
        subject = f"x={x}"
        replacement = replacement_weights(
            solution, part, neighbors, ordering, alpha, objective, system
        )

        union_gain = objective.evaluate(solution | part) - state.value
        checks.append(
            CheckResult.compare(
                AuditCheck.replacement_sum,
                subject,
                sum(replacement.values()) * alpha,
                ">=",
                union_gain - len(part) * alpha,
            )
        )
        checks.append(
            CheckResult.compare(
                AuditCheck.local_inequality,
                subject,
                sum(m * m for m in replacement.values()),
                "<=",
                sum(weights[z] ** 2 for z in neighbors),
            )
        )

        charge = 0
        for e in sorted(part):
            ys = witness.neighborhoods[e]
            result = check_lemma2(
                weights[x], replacement[e], [weights[z] for z in ys - {x}]
            )
            checks.append(replace(result, subject=f"x={x} e={e}"))
            charge += 2 * replacement[e] - sum(weights[z] for z in ys)
        checks.append(
            CheckResult.compare(AuditCheck.charging, subject, weights[x], ">=", charge)
        )

    for e in sorted(witness.free):
        inserted = replacement_weights(
            solution, (e,), (), ordering, alpha, objective, system
        )
        checks.append(
            CheckResult.compare(AuditCheck.insertion, f"e={e}", inserted[e], "==", 0)
        )

    load = sum(
        weights[z] for e in optimum for z in witness.neighborhoods[e]
    )
    checks.append(
        CheckResult.compare(
            AuditCheck.neighbourhood_load, "O", load * alpha, "<=", k * state.value
        )
    )

    blocks = [part - solution for part in witness.parts.values() if part - solution]
    blocks += [frozenset((e,)) for e in sorted(witness.free)]
    result = check_lemma1(objective, solution, optimum, blocks)
    checks.append(result)

    union_value = objective.evaluate(solution | optimum)
    checks.append(
        CheckResult.compare(
            AuditCheck.union_bound,
            "O",
            union_value - len(optimum) * alpha,
            "<=",
            Fraction(k + 3, 2) * state.value,
        )
    )
    delta = 1 / (1 + Fraction(k + 3) / (2 * epsilon))
    checks.append(
        CheckResult.compare(
            AuditCheck.rounding_loss,
            "O",
            len(optimum) * alpha,
            "<=",
            delta * report.opt_value,
        )
    )


audit = check_lemma3_and_theorem1
