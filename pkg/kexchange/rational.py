"""Exact rational helpers shared by the oracles and the result tables."""

from fractions import Fraction
from numbers import Rational
from typing import Union

from kexchange import consts
from kexchange.errors import PreconditionError

RationalLike = Union[int, str, Fraction]


def parse_rational(value: RationalLike) -> Fraction:
    """Parse an int, a ``p/q`` string or a decimal string exactly.

    Floats are refused.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"Expected an exact rational, got {value!r}.")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Cannot parse '{value}' as a rational.") from e
    raise ValueError(f"Expected an exact rational, got {type(value).__name__}.")


def require_rational(value: RationalLike, name: str) -> Fraction:
    """Like :func:`parse_rational`, but raises :class:`PreconditionError`."""
    try:
        return parse_rational(value)
    except ValueError as e:
        raise PreconditionError(f"Invalid {name}: {e}") from e


def format_rational(value: Fraction, places: int = consts.RATIO_PLACES) -> str:
    """Render ``value`` as a decimal rounded half-up to ``places`` digits."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    value = abs(value)
    scale = 10**places
    scaled = (2 * value.numerator * scale + value.denominator) // (
        2 * value.denominator
    )
    whole, frac = divmod(scaled, scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def to_text(value: Fraction) -> str:
    """Lossless text form: ``"3"`` or ``"3/2"``."""
    return str(Fraction(value))
