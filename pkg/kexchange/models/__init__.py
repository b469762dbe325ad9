__all__ = [
    "Model",
    "Rational",
    "SystemSection",
    "ObjectiveSection",
    "InstanceFile",
    "GeneratorSpec",
    "CampaignSpec",
]

from kexchange.models.model import Model, Rational
from kexchange.models.instance import InstanceFile, ObjectiveSection, SystemSection
from kexchange.models.campaign import CampaignSpec, GeneratorSpec
