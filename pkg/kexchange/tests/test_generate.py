import pytest

from kexchange.enums import ObjectiveKind
from kexchange.errors import PreconditionError
from kexchange.generate import MAX_RANDOM_WEIGHT, generate_packing
from kexchange.io import serialize_instance
from kexchange.objective import CoverageObjective, LinearObjective


def test_same_seed_same_instance():
    first = generate_packing(n=8, k=3, universe_size=10, seed=42, weighted=True)
    second = generate_packing(n=8, k=3, universe_size=10, seed=42, weighted=True)
    assert serialize_instance(first) == serialize_instance(second)
    other = generate_packing(n=8, k=3, universe_size=10, seed=43, weighted=True)
    assert serialize_instance(first) != serialize_instance(other)


def test_set_sizes():
    instance = generate_packing(n=30, k=3, universe_size=12, seed=1)
    assert instance.ground == tuple(range(1, 31))
    assert instance.k == 3
    for items in instance.system.sets.values():
        assert 1 <= len(items) <= 3
        assert all(item.startswith("u") for item in items)


@pytest.mark.parametrize("density, size", [(0, 1), (1, 3), ("0", 1), ("1/1", 3)])
def test_density_extremes(density, size):
    instance = generate_packing(n=10, k=3, universe_size=5, density=density, seed=0)
    assert {len(items) for items in instance.system.sets.values()} == {size}


def test_coverage_covers_own_set():
    instance = generate_packing(n=6, k=2, universe_size=6, seed=3)
    objective = instance.objective
    assert isinstance(objective, CoverageObjective)
    assert objective.covers == instance.system.sets
    for e in instance.ground:
        assert objective.evaluate({e}) == len(instance.system.sets[e])


def test_coverage_own_universe():
    instance = generate_packing(n=6, k=2, universe_size=6, seed=3, cover_universe=4)
    items = set().union(*instance.objective.covers.values())
    assert items <= {"c0", "c1", "c2", "c3"}


def test_weighted_coverage():
    instance = generate_packing(n=6, k=2, universe_size=6, seed=9, weighted=True)
    weights = instance.objective.item_weight.values()
    assert all(1 <= w <= MAX_RANDOM_WEIGHT for w in weights)


def test_linear_objectives():
    unit = generate_packing(
        n=5, k=2, universe_size=4, seed=2, objective=ObjectiveKind.linear
    )
    assert isinstance(unit.objective, LinearObjective)
    assert all(unit.objective.weight(e) == 1 for e in unit.ground)
    weighted = generate_packing(
        n=5, k=2, universe_size=4, seed=2, objective="linear", weighted=True
    )
    assert all(
        1 <= weighted.objective.weight(e) <= MAX_RANDOM_WEIGHT
        for e in weighted.ground
    )


def test_seed_and_name_are_kept():
    instance = generate_packing(n=3, k=2, universe_size=3, seed=8, name="g")
    assert (instance.seed, instance.name) == (8, "g")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"k": 0},
        {"n": -1},
        {"universe_size": 1},
        {"density": "3/2"},
        {"density": "0.5x"},
        {"cover_universe": 1},
        {"objective": ObjectiveKind.function},
    ],
)
def test_invalid_parameters(kwargs):
    arguments = {"n": 4, "k": 2, "universe_size": 4, "seed": 0, **kwargs}
    with pytest.raises(PreconditionError):
        generate_packing(**arguments)
