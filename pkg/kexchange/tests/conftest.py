import pytest

from kexchange import consts
from kexchange.instance import Instance
from kexchange.io import load_fixture
from kexchange.objective import CoverageObjective, LinearObjective
from kexchange.systems import SetPackingSystem


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    path = tmp_path / "kexchange.ini"
    monkeypatch.setenv(consts.CONFIG_PATH_ENV, str(path))
    return path


@pytest.fixture
def oscillation() -> Instance:
    """Two bases {1, 2} and {3, 4}; every singleton covers two items."""
    return load_fixture("oscillation")


@pytest.fixture
def packing() -> Instance:
    sets = {1: "ab", 2: "cd", 3: "a", 4: "bc", 5: "e"}
    return Instance(
        system=SetPackingSystem(sets, k=2),
        objective=CoverageObjective(sets),
        name="packing",
    )


@pytest.fixture
def linear_triangle() -> Instance:
    """Set 1 conflicts with both 2 and 3, which are disjoint."""
    system = SetPackingSystem({1: "ab", 2: "a", 3: "b"}, k=2)
    return Instance(system=system, objective=LinearObjective({1: 3, 2: 3, 3: 3}))
