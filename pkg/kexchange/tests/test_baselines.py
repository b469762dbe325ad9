import random
from fractions import Fraction

import pytest

from kexchange.baselines import (
    greedy,
    linear_nols,
    marginal_weights,
    naive_marginal_nols,
    oblivious_ls,
)
from kexchange.enums import Algorithm, ObjectiveKind, PivotRule
from kexchange.errors import PreconditionError
from kexchange.exact import brute_force_opt
from kexchange.generate import generate_packing
from kexchange.search import run

P = frozenset({1, 2})
Q = frozenset({3, 4})


def test_greedy(oscillation):
    result = greedy(oscillation)
    assert result.algorithm == Algorithm.greedy
    assert result.solution == P
    assert result.value == 3
    assert result.history == [frozenset(), {1}, P]
    assert result.iterations == 2


def test_oblivious_stays_at_greedy(oscillation):
    result = oblivious_ls(oscillation, "1/2")
    assert result.solution == P
    assert result.iterations == 0
    assert result.terminated


def test_oblivious_rejects_dependent_start(oscillation):
    with pytest.raises(PreconditionError):
        oblivious_ls(oscillation, "1/2", start={1, 3})


def test_linear_nols_needs_linear_objective(oscillation):
    with pytest.raises(PreconditionError):
        linear_nols(oscillation, "1/2")


def test_linear_nols_swaps_one_for_two(linear_triangle):
    result = linear_nols(linear_triangle, "1/2")
    assert result.history == [{1}, {2, 3}]
    assert result.value == 6


def test_marginal_weights_at_first_basis(oscillation):
    assert marginal_weights(oscillation, P) == {1: 1, 2: 1, 3: 2, 4: 2}


def test_naive_oscillates_between_bases(oscillation):
    result = naive_marginal_nols(oscillation, start=P)
    assert result.history == [P, Q, P]
    assert result.cycle_length == 2
    assert result.iterations == 2
    assert not result.terminated


def test_naive_cycles_from_best_singleton(oscillation):
    result = naive_marginal_nols(oscillation)
    assert result.history == [{1}, Q, P, Q]
    assert result.cycle_length == 2


def test_naive_first_pivot(oscillation):
    result = naive_marginal_nols(oscillation, start=P, pivot=PivotRule.first)
    assert result.history == [P, {3}, Q, {1}, P]
    assert result.cycle_length == 4


def test_naive_iteration_cap(oscillation):
    result = naive_marginal_nols(oscillation, start=P, max_iters=1)
    assert result.history == [P, Q]
    assert result.cycle_length is None
    assert not result.terminated
    with pytest.raises(PreconditionError):
        naive_marginal_nols(oscillation, max_iters=0)


def test_naive_terminates_on_linear(linear_triangle):
    result = naive_marginal_nols(linear_triangle)
    assert result.terminated
    assert result.solution == {2, 3}


def test_rounded_search_stops_where_naive_cycles(oscillation):
    state, trace = run(oscillation, "1/2")
    assert trace.count == 1
    assert naive_marginal_nols(oscillation).cycle_length == 2


def test_unit_weight_linear_search_matches_oblivious():
    for seed in range(40):
        instance = generate_packing(
            n=6 + seed % 5, k=2, universe_size=8, seed=seed, objective="linear"
        )
        linear = linear_nols(instance, "1/2")
        oblivious = oblivious_ls(instance, "1/2", start=linear.history[0])
        assert linear.history == oblivious.history, seed


def test_linear_locality_gap():
    rng = random.Random(5)
    for seed in range(100):
        instance = generate_packing(
            n=rng.randint(2, 10),
            k=2,
            universe_size=rng.randint(2, 10),
            seed=seed,
            objective=ObjectiveKind.linear,
            weighted=True,
        )
        epsilon = Fraction(1, 2) if seed % 2 else Fraction(1, 4)
        _, optimum = brute_force_opt(instance)
        bound = Fraction(instance.k + 1, 2) + epsilon
        assert optimum <= bound * linear_nols(instance, epsilon).value, seed


def _random_packings(count, seed, k=None, max_n=8):
    rng = random.Random(seed)
    for i in range(count):
        size = k or rng.choice([2, 3])
        n = rng.randint(1, max_n)
        yield generate_packing(
            n=n,
            k=size,
            universe_size=rng.randint(size, 2 * n + size),
            seed=i,
            weighted=i % 2 == 1,
            cover_universe=None if i % 3 else n + size,
        )


def test_greedy_is_maximal():
    for instance in _random_packings(80, seed=17, max_n=12):
        result = greedy(instance)
        f, solution = instance.objective, result.solution
        assert instance.system.is_independent(solution)
        for e in set(instance.ground) - solution:
            if instance.system.is_independent(solution | {e}):
                assert f.evaluate(solution | {e}) <= result.value, (instance.seed, e)


def test_oblivious_ratio_on_small_two_exchange_packings():
    for i, instance in enumerate(_random_packings(100, seed=23, k=2)):
        epsilon = Fraction(1, 4) if i % 2 else Fraction(1, 2)
        result = oblivious_ls(instance, epsilon)
        _, optimum = brute_force_opt(instance)
        assert optimum <= (2 + epsilon) * result.value, instance.seed
