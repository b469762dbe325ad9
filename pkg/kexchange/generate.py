"""Seeded random k-set packing instances."""

__all__ = ["generate_packing"]

import random
from fractions import Fraction
from typing import Optional

from kexchange.enums import ObjectiveKind
from kexchange.errors import PreconditionError
from kexchange.instance import Instance
from kexchange.objective import CoverageObjective, LinearObjective, Objective
from kexchange.rational import RationalLike, require_rational
from kexchange.systems import SetPackingSystem

MAX_RANDOM_WEIGHT = 10


def _draw_sets(
    rng: random.Random,
    n: int,
    k: int,
    items: list[str],
    density: Fraction,
) -> dict[int, list[str]]:
    # |set| = 1 + Binomial(k - 1, density)
    sets = {}
    for e in range(1, n + 1):
        size = 1 + sum(1 for _ in range(k - 1) if rng.random() < density)
        sets[e] = sorted(rng.sample(items, size))
    return sets


def generate_packing(
    n: int,
    k: int,
    universe_size: int,
    density: RationalLike = "1/2",
    seed: Optional[int] = None,
    objective: ObjectiveKind = ObjectiveKind.coverage,
    weighted: bool = False,
    cover_universe: Optional[int] = None,
    name: str = "",
) -> Instance:
    """Draw ``n`` sets of 1 to ``k`` items from ``universe_size`` items.

    Every set holds one item plus each of k - 1 further items with chance
    ``density``.

    Args:
        n: Number of ground elements, numbered 1 to n.
        k: Maximum set size.
        universe_size: Items ``u0`` ... the packing sets are drawn from.
        density: Chance of every extra item, in [0, 1].
        seed: Seed of the private random generator.
        objective: ``coverage`` or ``linear``.
        weighted: Draw item weights (coverage) or element weights (linear)
            from 1 to 10 instead of using unit weights.
        cover_universe: When given, the coverage objective draws its own
            covers over ``cover_universe`` items ``c0`` ... the same way;
            otherwise every element covers its own packing set.
        name: Instance name.

    Raises:
        PreconditionError: The parameters admit no instance.
    """
    density = require_rational(density, "density")
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}.")
    if n < 0:
        raise PreconditionError(f"n must be nonnegative, got {n}.")
    if universe_size < k:
        raise PreconditionError(
            f"A universe of {universe_size} items cannot hold sets of size {k}."
        )
    if not 0 <= density <= 1:
        raise PreconditionError(f"Density must lie in [0, 1], got {density}.")
    if cover_universe is not None and cover_universe < k:
        raise PreconditionError(
            f"A cover universe of {cover_universe} items cannot hold {k} items."
        )
    objective = ObjectiveKind(objective)

    rng = random.Random(seed)
    items = [f"u{i}" for i in range(universe_size)]
    system = SetPackingSystem(_draw_sets(rng, n, k, items, density), k=k)

    value: Objective
    if objective == ObjectiveKind.coverage:
        if cover_universe is None:
            covers, cover_items = system.sets, items
        else:
            cover_items = [f"c{i}" for i in range(cover_universe)]
            covers = _draw_sets(rng, n, k, cover_items, density)
        item_weight = None
        if weighted:
            item_weight = {
                item: rng.randint(1, MAX_RANDOM_WEIGHT) for item in cover_items
            }
        value = CoverageObjective(covers, universe=cover_items, item_weight=item_weight)
    elif objective == ObjectiveKind.linear:
        value = LinearObjective(
            {
                e: rng.randint(1, MAX_RANDOM_WEIGHT) if weighted else 1
                for e in system.ground
            }
        )
    else:
        raise PreconditionError("Only coverage and linear objectives are generated.")

    return Instance(system=system, objective=value, name=name, seed=seed)
