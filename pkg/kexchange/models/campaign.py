from fractions import Fraction
from typing import Optional

from pydantic import Field, model_validator

from kexchange import consts
from kexchange.enums import Algorithm, ObjectiveKind
from kexchange.models.model import Model, Rational


class GeneratorSpec(Model):
    """Random set packing instances of a campaign.

    Attributes:
        n_min: Smallest number of ground elements.
        n_max: Largest number of ground elements.
        k: Maximum set size.
        universe_size: Number of items the sets are drawn from.
        density: Chance of each extra item beyond the first, in [0, 1].
        objective: ``coverage`` or ``linear``.
        weighted: Draw random item or element weights instead of unit ones.
        cover_universe: Item count of the coverage objective's own universe.
        repetitions: Instances generated for every n.
    """

    n_min: int = Field(ge=0)
    n_max: int = Field(ge=0)
    k: int = Field(ge=1)
    universe_size: int = Field(ge=1)
    density: Rational = Fraction(1, 2)
    objective: ObjectiveKind = ObjectiveKind.coverage
    weighted: bool = False
    cover_universe: Optional[int] = Field(default=None, ge=1)
    repetitions: int = Field(default=1, ge=0)

    @model_validator(mode="after")
    def check_ranges(self) -> "GeneratorSpec":
        if self.n_min > self.n_max:
            raise ValueError(f"n_min {self.n_min} is above n_max {self.n_max}.")
        if not 0 <= self.density <= 1:
            raise ValueError(f"Density must lie in [0, 1], got {self.density}.")
        return self


class CampaignSpec(Model):
    """A grid of (instance, algorithm, epsilon) cells.

    Attributes:
        name: Campaign name, used as the instance id prefix.
        seed: Base seed; instance i of size n gets a seed derived from it.
        generators: Random instance families.
        instance_files: Paths of instance files to add to the grid.
        epsilons: Epsilon values, each in (0, 1].
        algorithms: Algorithms to run on every instance.
        brute_cap: Largest n for which the optimum is computed.
        cap_candidates: Candidate cap of every scan.
        literal_pseudocode: Use the whole-potential acceptance rule.
        audit: Audit every nols result against the optimum.
        naive_max_iters: Iteration cap of the naive variant.
        workers: Worker processes; 1 runs in process.
    """

    name: str = "campaign"
    seed: int = 0
    generators: list[GeneratorSpec] = Field(default_factory=list)
    instance_files: list[str] = Field(default_factory=list)
    epsilons: list[Rational] = Field(
        default_factory=lambda: [Fraction(consts.DEFAULT_EPSILON)]
    )
    algorithms: list[Algorithm] = Field(default_factory=lambda: [Algorithm.nols])
    brute_cap: int = Field(default=consts.DEFAULT_BRUTE_CAP, ge=0)
    cap_candidates: int = Field(default=consts.DEFAULT_CAP_CANDIDATES, ge=1)
    literal_pseudocode: bool = False
    audit: bool = False
    naive_max_iters: int = Field(default=consts.DEFAULT_NAIVE_MAX_ITERS, ge=1)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def check_epsilons(self) -> "CampaignSpec":
        for epsilon in self.epsilons:
            if not 0 < epsilon <= 1:
                raise ValueError(f"Epsilon must lie in (0, 1], got {epsilon}.")
        return self
