import itertools
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kexchange.enums import AuditCheck
from kexchange.errors import CapExceeded, PreconditionError
from kexchange.exact import (
    AuditReport,
    CheckResult,
    audit,
    brute_force_opt,
    build_partition_witness,
    check_lemma1,
    check_lemma2,
)
from kexchange.generate import generate_packing
from kexchange.objective import CoverageObjective
from kexchange.search import Ordering, make_state, run

SOLUTION = {1, 2}
OPTIMUM = {3, 4, 5}


def test_brute_force_takes_first_optimum(oscillation):
    assert brute_force_opt(oscillation) == ({1, 2}, 3)


def test_brute_force_packing(packing):
    optimum, value = brute_force_opt(packing)
    assert value == 5
    assert packing.system.is_independent(optimum)


def test_brute_force_cap(oscillation):
    with pytest.raises(CapExceeded):
        brute_force_opt(oscillation, cap=3)


def _full_enumeration(instance):
    best, best_value = (), instance.objective.evaluate(())
    for size in range(1, instance.n + 1):
        for subset in itertools.combinations(instance.ground, size):
            if not instance.system.is_independent(subset):
                continue
            value = instance.objective.evaluate(subset)
            if value > best_value or (value == best_value and subset < best):
                best, best_value = subset, value
    return frozenset(best), best_value


def test_brute_force_matches_full_enumeration():
    rng = random.Random(31)
    for seed in range(40):
        n = rng.randint(0, 10)
        k = rng.choice([2, 3])
        instance = generate_packing(
            n=n,
            k=k,
            universe_size=rng.randint(k, n + k),
            seed=seed,
            weighted=seed % 2 == 0,
            objective="linear" if seed % 3 == 0 else "coverage",
        )
        assert brute_force_opt(instance) == _full_enumeration(instance), seed


def test_partition_witness(packing):
    witness = build_partition_witness(packing, SOLUTION, OPTIMUM, {1: 5, 2: 3})
    assert witness.neighborhoods[3] == {1}
    assert witness.neighborhoods[4] == {1, 2}
    assert witness.parts == {1: {3, 4}, 2: frozenset()}
    assert witness.neighbors == {1: {1, 2}, 2: frozenset()}
    assert witness.free == {5}


def test_partition_witness_ties_go_to_smallest_id(packing):
    witness = build_partition_witness(packing, SOLUTION, OPTIMUM, {1: 3, 2: 3})
    assert witness.parts[1] == {3, 4}


def test_partition_witness_follows_weights(packing):
    witness = build_partition_witness(packing, SOLUTION, OPTIMUM, {1: 5, 2: 7})
    assert witness.parts == {1: {3}, 2: {4}}
    assert witness.neighbors == {1: {1}, 2: {1, 2}}


def test_partition_witness_of_solution_against_itself(packing):
    witness = build_partition_witness(packing, SOLUTION, SOLUTION, {1: 5, 2: 3})
    assert witness.parts == {1: {1}, 2: {2}}
    assert witness.neighbors == {1: {1}, 2: {2}}
    assert witness.free == frozenset()


def test_partition_witness_needs_packing(oscillation):
    with pytest.raises(PreconditionError):
        build_partition_witness(oscillation, {1, 2}, {3, 4}, {1: 1, 2: 1})


def test_check_result_compare():
    result = CheckResult.compare(AuditCheck.ratio, "O", 3, "<=", "7/2")
    assert result.passed
    assert result.rhs == Fraction(7, 2)
    assert not CheckResult.compare(AuditCheck.ratio, "O", 4, "==", 3).passed
    failure = CheckResult.failure(AuditCheck.partition, "S", "broken")
    assert not failure.passed
    assert failure.lhs is None


def test_report_first_failure():
    ok = CheckResult.compare(AuditCheck.weight_sum, "S", 1, "<=", 2)
    bad = CheckResult.failure(AuditCheck.charging, "x=1", "broken")
    report = AuditReport(
        value=Fraction(1),
        opt_value=Fraction(1),
        optimum=frozenset(),
        ratio=Fraction(1),
        bound=Fraction(3),
        checks=[ok, bad, ok],
    )
    assert not report.passed
    assert report.first_failure is bad


def test_report_summary():
    report = AuditReport(
        value=Fraction(2),
        opt_value=Fraction(5),
        optimum=frozenset(),
        ratio=Fraction(5, 2),
        bound=Fraction(3),
    )
    assert (report.summary.lhs, report.summary.rhs) == (Fraction(5, 2), 3)
    assert report.summary.passed
    empty = replace(report, value=Fraction(0), opt_value=Fraction(0), ratio=None)
    assert empty.summary.lhs is None
    assert empty.summary.passed


def test_check_lemma2():
    result = check_lemma2(3, 4, [1, 2])
    assert result.check == AuditCheck.squared_weight
    assert (result.lhs, result.rhs) == (11, 6)
    assert result.passed


@pytest.mark.parametrize(
    "w_x, w_e, others", [(3, 4, [4]), (-1, 1, []), (3, 1, [-1])]
)
def test_check_lemma2_preconditions(w_x, w_e, others):
    with pytest.raises(PreconditionError):
        check_lemma2(w_x, w_e, others)


weights = st.fractions(min_value=0, max_value=50, max_denominator=12)


@st.composite
def lemma2_arguments(draw):
    w_x = draw(weights)
    others = draw(
        st.lists(st.fractions(min_value=0, max_value=w_x, max_denominator=12))
    )
    return w_x, draw(weights), others


@given(lemma2_arguments())
@settings(max_examples=1000, deadline=None)
def test_lemma2_holds(arguments):
    assert check_lemma2(*arguments).passed


def test_check_lemma1():
    f = CoverageObjective({1: "ab", 2: "bc", 3: "c"})
    result = check_lemma1(f, (), {1, 2, 3}, [{1}, {2, 3}])
    assert result.check == AuditCheck.partition_submodularity
    assert (result.lhs, result.rhs) == (4, 3)
    assert result.passed


@pytest.mark.parametrize("parts", [[{1}, {2}], [{1, 2}, {2, 3}], [{1, 2, 3, 4}]])
def test_check_lemma1_needs_a_partition(parts):
    f = CoverageObjective({1: "ab", 2: "bc", 3: "c", 4: "d"})
    with pytest.raises(PreconditionError):
        check_lemma1(f, (), {1, 2, 3}, parts)


@st.composite
def partitioned_coverage(draw):
    n = draw(st.integers(min_value=1, max_value=7))
    covers = {
        e: draw(st.sets(st.sampled_from("abcdef"), min_size=1, max_size=3))
        for e in range(1, n + 1)
    }
    base = draw(st.sets(st.sampled_from(sorted(covers))))
    target = draw(st.sets(st.sampled_from(sorted(covers))))
    labels = {e: draw(st.integers(0, 3)) for e in sorted(target - base)}
    parts = [{e for e, label in labels.items() if label == i} for i in range(4)]
    return CoverageObjective(covers), base, target, parts


@given(partitioned_coverage())
@settings(max_examples=100, deadline=None)
def test_lemma1_holds_for_coverage(arguments):
    assert check_lemma1(*arguments).passed


def test_audit_explicit_system(oscillation):
    state, trace = run(oscillation, "1/2")
    report = audit(oscillation, state, trace.ordering, "1/2")
    assert report.passed
    assert report.ratio == 1
    assert report.bound == 3
    assert report.witness is None
    assert [c.check for c in report.checks] == [
        AuditCheck.local_optimum,
        AuditCheck.weight_sum,
        AuditCheck.ratio,
    ]


def test_audit_packing(packing):
    state, trace = run(packing, "1/2")
    report = audit(packing, state, trace.ordering, "1/2")
    assert report.passed, report.first_failure
    assert report.witness is not None
    checks = {c.check for c in report.checks}
    assert AuditCheck.charging in checks
    assert AuditCheck.union_bound in checks
    assert AuditCheck.rounding_loss in checks


def test_audit_rejects_non_local_optimum(oscillation):
    ordering = Ordering.ascending(oscillation.ground)
    state = make_state({1}, ordering, Fraction(1, 12), oscillation.objective)
    with pytest.raises(PreconditionError):
        audit(oscillation, state, ordering, "1/2")


def test_audit_passes_on_random_packings():
    rng = random.Random(2024)
    for seed in range(200):
        k = 2 if seed % 2 else 3
        n = rng.randint(1, 10 if k == 2 else 8)
        instance = generate_packing(
            n=n,
            k=k,
            universe_size=rng.randint(k, 2 * n + k),
            seed=seed,
            weighted=seed % 4 < 2,
            cover_universe=None if seed % 3 else n + k,
        )
        epsilon = Fraction(1, 4) if seed % 5 else Fraction(1, 2)
        state, trace = run(instance, epsilon)
        report = audit(instance, state, trace.ordering, epsilon)
        assert report.passed, (seed, report.first_failure)
        assert report.opt_value <= report.bound * report.value, seed
