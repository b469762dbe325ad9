from fractions import Fraction
from typing import Annotated

from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer

from kexchange.rational import parse_rational, to_text

# Exact rational field: accepts ints and "p/q" or decimal strings, never
# floats, and is written back as its lossless text form.
Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(to_text, return_type=str),
]


class Model(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)
