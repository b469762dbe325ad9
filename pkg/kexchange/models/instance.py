from typing import Literal, Optional

from pydantic import Field, model_validator

from kexchange import consts
from kexchange.enums import ObjectiveKind, SystemKind
from kexchange.models.model import Model, Rational


class SystemSection(Model):
    """Independence system of an instance file.

    Attributes:
        kind: ``set_packing`` or ``explicit``.
        k: Exchange parameter. Required for explicit systems; for set packing
            it defaults to the largest set and must bound every set.
        sets: Set packing only: items of each ground element.
        maximal_sets: Explicit only: the maximal independent sets.
        elements: Explicit only: the ground set, when it has elements that no
            maximal set lists.
    """

    kind: SystemKind
    k: Optional[int] = Field(default=None, ge=1)
    sets: Optional[dict[int, list[str]]] = None
    maximal_sets: Optional[list[list[int]]] = None
    elements: Optional[list[int]] = None

    @model_validator(mode="after")
    def check_kind(self) -> "SystemSection":
        if self.kind == SystemKind.set_packing:
            if self.sets is None:
                raise ValueError("A set packing system needs 'sets'.")
            if self.maximal_sets is not None or self.elements is not None:
                raise ValueError(
                    "'maximal_sets' and 'elements' belong to explicit systems."
                )
        else:
            if self.maximal_sets is None or self.k is None:
                raise ValueError("An explicit system needs 'maximal_sets' and 'k'.")
            if self.sets is not None:
                raise ValueError("'sets' belongs to set packing systems.")
        return self


class ObjectiveSection(Model):
    """Objective of an instance file.

    Attributes:
        kind: ``coverage`` or ``linear``.
        covers: Coverage only: items covered by each ground element.
        universe: Coverage only: declared item universe.
        item_weights: Coverage only: item weights, 1 when missing.
        weights: Linear only: weight of each ground element.
    """

    kind: ObjectiveKind
    covers: Optional[dict[int, list[str]]] = None
    universe: Optional[list[str]] = None
    item_weights: dict[str, Rational] = Field(default_factory=dict)
    weights: Optional[dict[int, Rational]] = None

    @model_validator(mode="after")
    def check_kind(self) -> "ObjectiveSection":
        if self.kind == ObjectiveKind.coverage:
            if self.covers is None:
                raise ValueError("A coverage objective needs 'covers'.")
            if self.weights is not None:
                raise ValueError("'weights' belongs to linear objectives.")
        elif self.kind == ObjectiveKind.linear:
            if self.weights is None:
                raise ValueError("A linear objective needs 'weights'.")
            if self.covers is not None or self.universe is not None:
                raise ValueError("'covers' and 'universe' belong to coverage.")
            if self.item_weights:
                raise ValueError("'item_weights' belongs to coverage objectives.")
        else:
            raise ValueError("Function objectives cannot be stored in a file.")
        return self


class InstanceFile(Model):
    """Versioned on-disk instance.

    Attributes:
        version: Format version.
        name: Free-form instance name.
        seed: Generator seed, for generated instances.
        system: Independence system section.
        objective: Objective section.
    """

    version: Literal[consts.INSTANCE_FORMAT_VERSION]
    name: str = ""
    seed: Optional[int] = None
    system: SystemSection
    objective: ObjectiveSection
