from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kexchange.errors import CapExceeded, DomainError, PreconditionError
from kexchange.objective import (
    CoverageObjective,
    LinearObjective,
    SetFunctionObjective,
    certify_monotone_submodular,
)

COVERS = {1: "ab", 2: "ac", 3: "xy", 4: "xz"}


def test_coverage_values():
    f = CoverageObjective(COVERS)
    assert f.evaluate(()) == 0
    assert f.evaluate({1}) == 2
    assert f.evaluate({1, 2}) == 3
    assert f.evaluate({1, 2, 3, 4}) == 6
    assert isinstance(f.evaluate({1}), Fraction)


def test_coverage_item_weights():
    f = CoverageObjective(COVERS, item_weight={"a": "1/2", "x": 3})
    assert f.evaluate({1}) == Fraction(3, 2)
    assert f.evaluate({3, 4}) == 5


def test_coverage_counts_calls():
    f = CoverageObjective(COVERS)
    f.evaluate({1})
    f.marginal({1}, 2)
    assert f.calls == 3
    assert f.reset_calls() == 3
    assert f.calls == 0


def test_marginal():
    f = CoverageObjective(COVERS)
    assert f.marginal({1}, 2) == 1
    assert f.marginal((), 3) == 2


def test_marginal_of_member_is_rejected():
    with pytest.raises(PreconditionError):
        CoverageObjective(COVERS).marginal({1}, 1)


def test_unknown_element():
    f = CoverageObjective(COVERS)
    with pytest.raises(DomainError):
        f.evaluate({9})
    assert f.calls == 0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"covers": {1: ""}},
        {"covers": {1: "ab"}, "universe": "a"},
        {"covers": {1: "ab"}, "item_weight": {"z": 1}},
        {"covers": {1: "ab"}, "item_weight": {"a": -1}},
    ],
)
def test_invalid_coverage(kwargs):
    with pytest.raises(DomainError):
        CoverageObjective(**kwargs)


def test_linear():
    f = LinearObjective({1: 2, 2: "3/2", 3: 0})
    assert f.evaluate({1, 2}) == Fraction(7, 2)
    assert f.weight(2) == Fraction(3, 2)
    with pytest.raises(DomainError):
        LinearObjective({1: -1})


def test_floats_are_refused():
    with pytest.raises(ValueError):
        LinearObjective({1: 0.5})


def test_certify_coverage():
    report = certify_monotone_submodular(CoverageObjective(COVERS))
    assert report.passed
    assert report.size == 4
    assert report.subsets == 16


def test_certify_finds_supermodular_witness():
    f = SetFunctionObjective(range(3), lambda s: len(s) ** 2)
    report = certify_monotone_submodular(f)
    assert not report.passed
    violation = report.violation
    assert violation.kind == "submodular"
    assert violation.smaller == frozenset()
    assert violation.larger == frozenset({0})
    assert violation.element == 1
    assert (violation.lhs, violation.rhs) == (1, 3)


def test_certify_finds_non_monotone_witness():
    f = SetFunctionObjective(range(2), lambda s: 1 if len(s) == 1 else 0)
    report = certify_monotone_submodular(f)
    assert report.violation.kind == "monotone"
    assert report.violation.smaller == frozenset({0})
    assert report.violation.larger == frozenset({0, 1})


def test_certify_cap():
    f = SetFunctionObjective(range(16), len)
    with pytest.raises(CapExceeded):
        certify_monotone_submodular(f)
    assert f.calls == 0


@st.composite
def coverage_objectives(draw):
    items = "abcdef"
    n = draw(st.integers(min_value=1, max_value=6))
    covers = {
        e: draw(st.sets(st.sampled_from(items), min_size=1, max_size=3))
        for e in range(1, n + 1)
    }
    weights = {
        item: draw(st.fractions(min_value=0, max_value=5, max_denominator=6))
        for item in items
    }
    return CoverageObjective(covers, universe=items, item_weight=weights)


@given(coverage_objectives())
@settings(max_examples=50, deadline=None)
def test_weighted_coverage_certifies(objective):
    assert certify_monotone_submodular(objective).passed
