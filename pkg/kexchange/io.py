"""Reading and writing instance and campaign files.

Both formats are JSON documents validated by the pydantic models in
:mod:`kexchange.models`; see ``docs/format.rst`` for the grammar.
"""

__all__ = [
    "parse_instance",
    "to_file_model",
    "serialize_instance",
    "load_instance",
    "save_instance",
    "load_fixture",
    "parse_campaign",
    "load_campaign",
]

import json
from importlib import resources
from pathlib import Path
from typing import TypeVar, Union

from pydantic import ValidationError as PydanticValidationError

from kexchange import consts
from kexchange.enums import ObjectiveKind, SystemKind
from kexchange.errors import (
    DomainError,
    InstanceValidationError,
    ParseError,
    PreconditionError,
)
from kexchange.instance import Instance
from kexchange.models import (
    CampaignSpec,
    InstanceFile,
    Model,
    ObjectiveSection,
    SystemSection,
)
from kexchange.objective import CoverageObjective, LinearObjective, Objective
from kexchange.systems import ExplicitSystem, IndependenceSystem, SetPackingSystem

M = TypeVar("M", bound=Model)
PathLike = Union[str, Path]

# Alternative names of bundled fixtures.
FIXTURE_ALIASES = {"section2": "oscillation"}


def _validate(text: str, model: type[M], context: str) -> M:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, column=e.colno) from e
    try:
        return model.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or context
        raise InstanceValidationError(first["msg"], context=location, error=e) from e


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read '{path}': {e.strerror}.") from e


def _build_system(section: SystemSection) -> IndependenceSystem:
    if section.kind == SystemKind.set_packing:
        return SetPackingSystem(section.sets, k=section.k)
    return ExplicitSystem(section.maximal_sets, section.k, ground=section.elements)


def _build_objective(section: ObjectiveSection) -> Objective:
    if section.kind == ObjectiveKind.coverage:
        return CoverageObjective(
            section.covers, universe=section.universe, item_weight=section.item_weights
        )
    return LinearObjective(section.weights)


def parse_instance(text: str) -> Instance:
    """Parse an instance document.

    Raises:
        ParseError: The text is not valid JSON; carries line and column.
        InstanceValidationError: The document does not describe a valid
            instance, such as a set larger than k or an objective element
            missing from the system.
    """
    document = _validate(text, InstanceFile, "instance")
    try:
        system = _build_system(document.system)
    except DomainError as e:
        raise InstanceValidationError(e.message, context="system") from e
    try:
        objective = _build_objective(document.objective)
        return Instance(
            system=system, objective=objective, name=document.name, seed=document.seed
        )
    except DomainError as e:
        raise InstanceValidationError(e.message, context="objective") from e


def to_file_model(instance: Instance) -> InstanceFile:
    system, objective = instance.system, instance.objective
    if isinstance(system, SetPackingSystem):
        system_section = SystemSection(
            kind=SystemKind.set_packing,
            k=system.k,
            sets={e: sorted(items) for e, items in sorted(system.sets.items())},
        )
    elif isinstance(system, ExplicitSystem):
        listed = frozenset().union(*system.maximal_sets)
        system_section = SystemSection(
            kind=SystemKind.explicit,
            k=system.k,
            maximal_sets=[sorted(basis) for basis in system.maximal_sets],
            elements=None if listed == frozenset(system.ground) else system.ground,
        )
    else:
        raise PreconditionError(f"Cannot store a {type(system).__name__}.")

    if isinstance(objective, CoverageObjective):
        objective_section = ObjectiveSection(
            kind=ObjectiveKind.coverage,
            covers={e: sorted(items) for e, items in sorted(objective.covers.items())},
            universe=sorted(objective.universe),
            item_weights={
                item: weight
                for item, weight in sorted(objective.item_weight.items())
                if weight != 1
            },
        )
    elif isinstance(objective, LinearObjective):
        objective_section = ObjectiveSection(
            kind=ObjectiveKind.linear,
            weights=dict(sorted(objective.elem_weight.items())),
        )
    else:
        raise PreconditionError(f"Cannot store a {type(objective).__name__}.")

    return InstanceFile(
        version=consts.INSTANCE_FORMAT_VERSION,
        name=instance.name,
        seed=instance.seed,
        system=system_section,
        objective=objective_section,
    )


def serialize_instance(instance: Instance) -> str:
    """Render an instance as an indented JSON document."""
    return to_file_model(instance).model_dump_json(indent=2, exclude_none=True) + "\n"


def load_instance(path: PathLike) -> Instance:
    return parse_instance(_read(path))


def save_instance(instance: Instance, path: PathLike):
    Path(path).write_text(serialize_instance(instance), encoding="utf-8")


def load_fixture(name: str) -> Instance:
    """Load a bundled instance from ``kexchange/fixtures`` by name or alias."""
    stem = FIXTURE_ALIASES.get(name, name)
    fixture = resources.files("kexchange") / "fixtures" / f"{stem}.kx"
    try:
        text = fixture.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise PreconditionError(f"No bundled fixture named '{name}'.") from e
    return parse_instance(text)


def parse_campaign(text: str) -> CampaignSpec:
    return _validate(text, CampaignSpec, "campaign")


def load_campaign(path: PathLike) -> CampaignSpec:
    return parse_campaign(_read(path))
