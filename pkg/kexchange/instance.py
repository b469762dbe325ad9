from dataclasses import dataclass
from typing import Optional

from kexchange.errors import DomainError
from kexchange.objective import Element, Objective
from kexchange.systems import IndependenceSystem


@dataclass(frozen=True)
class Instance:
    """An optimization instance: independence system plus objective.

    Attributes:
        system: Membership oracle and exchange parameter k.
        objective: Monotone submodular value oracle on the same ground set.
        name: Free-form instance name.
        seed: Generator seed, when the instance was generated.
    """

    system: IndependenceSystem
    objective: Objective
    name: str = ""
    seed: Optional[int] = None

    def __post_init__(self):
        system_ground = frozenset(self.system.ground)
        if self.objective.ground != system_ground:
            missing = sorted(system_ground ^ self.objective.ground)
            raise DomainError(
                f"Objective and system disagree on the ground set: {missing}."
            )

    @property
    def ground(self) -> tuple[Element, ...]:
        return self.system.ground

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def k(self) -> int:
        return self.system.k
