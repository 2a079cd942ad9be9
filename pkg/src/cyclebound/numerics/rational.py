"""Exact rational helpers built on gmpy2."""

from fractions import Fraction
import re
from typing import Union

from gmpy2 import mpq, mpz

Rational = type(mpq(0))
RationalLike = Union[int, str, Fraction, "mpq"]

_DECIMAL_PATTERN = re.compile(
    r"^\s*(?P<sign>[+-]?)(?P<int>\d*)(?:\.(?P<frac>\d*))?(?:[eE](?P<exp>[+-]?\d+))?\s*$"
)


def to_rational(value: RationalLike) -> "mpq":
    """Convert a value to an exact ``mpq``.

    Accepts integers, ``Fraction``, ``mpq``, ``mpz`` and strings of the form
    ``"p/q"``, ``"1.4784"`` or ``"7e11"``.

    Parameters
    ----------
    value : int, str, Fraction or mpq
        The value to convert.

    Returns
    -------
    mpq
        The exact rational.

    Raises
    ------
    TypeError
        If ``value`` is a binary float or an unsupported type.
    ValueError
        If a string cannot be parsed.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError(
            f"binary floats are not accepted as rationals, got {value!r}; "
            "pass a string or Fraction instead"
        )
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def parse_rational(text: str) -> "mpq":
    """Parse ``"p/q"`` or a decimal/scientific literal exactly."""
    if "/" in text:
        numerator, _, denominator = text.partition("/")
        try:
            num, den = int(numerator), int(denominator)
        except ValueError as exc:
            raise ValueError(f"invalid rational literal: {text!r}") from exc
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return mpq(num, den)

    match = _DECIMAL_PATTERN.match(text)
    if match is None or not (match["int"] or match["frac"]):
        raise ValueError(f"invalid rational literal: {text!r}")
    digits = (match["int"] or "") + (match["frac"] or "")
    exponent = int(match["exp"] or 0) - len(match["frac"] or "")
    value = mpq(int(digits)) * pow10(exponent)
    return -value if match["sign"] == "-" else value


def pow10(exponent: int) -> "mpq":
    """Exact power of ten, negative exponents included."""
    if exponent >= 0:
        return mpq(mpz(10) ** exponent)
    return mpq(1, mpz(10) ** -exponent)


def floor_rational(value: "mpq") -> int:
    """Largest integer not above ``value``."""
    return int(value.numerator // value.denominator)


def ceil_rational(value: "mpq") -> int:
    """Smallest integer not below ``value``."""
    return int(-((-value.numerator) // value.denominator))


def bit_size(value: "mpq") -> int:
    """Bits needed to store numerator and denominator."""
    return int(value.numerator.bit_length() + value.denominator.bit_length())


def binary_exponent(value: "mpq") -> int:
    """Return e with 2**e <= |value| < 2**(e+1); value must be nonzero."""
    numerator, denominator = abs(value.numerator), value.denominator
    exponent = numerator.bit_length() - denominator.bit_length()
    if exponent >= 0:
        if numerator < (denominator << exponent):
            exponent -= 1
    elif (numerator << -exponent) < denominator:
        exponent -= 1
    return int(exponent)


def scale_pow2(value: "mpq", shift: int) -> "mpq":
    """Return value * 2**shift exactly."""
    if shift >= 0:
        return value * (mpz(1) << shift)
    return value / (mpz(1) << -shift)


def round_down(value: "mpq", bits: int) -> "mpq":
    """Round toward minus infinity to ``bits`` significant bits.

    Values small enough to be stored exactly are returned unchanged.
    """
    if value == 0 or bit_size(value) <= 2 * bits:
        return value
    shift = bits - 1 - binary_exponent(value)
    scaled = scale_pow2(value, shift)
    return scale_pow2(mpq(floor_rational(scaled)), -shift)


def round_up(value: "mpq", bits: int) -> "mpq":
    """Round toward plus infinity to ``bits`` significant bits."""
    return -round_down(-value, bits)


def format_scientific(value: "mpq", digits: int = 6, rounding: str = "nearest") -> str:
    """Render an exact rational as a decimal in scientific notation.

    Parameters
    ----------
    value : mpq
        The value to render.
    digits : int
        Significant digits in the mantissa.
    rounding : {"nearest", "up", "down"}
        ``"up"`` rounds toward plus infinity and ``"down"`` toward minus
        infinity, so the rendered decimal is itself a valid bound.

    Returns
    -------
    str
        For example ``"6.8735e-32"``.
    """
    if rounding not in ("nearest", "up", "down"):
        raise ValueError(f"unknown rounding mode: {rounding}")
    if digits < 1:
        raise ValueError(f"digits must be positive, got {digits}")
    value = to_rational(value)
    if value == 0:
        return "0"

    negative = value < 0
    magnitude = -value if negative else value
    # magnitude rounding direction flips for negative values
    direction = rounding
    if negative and rounding != "nearest":
        direction = "down" if rounding == "up" else "up"

    exponent = len(str(magnitude.numerator)) - len(str(magnitude.denominator))
    while magnitude < pow10(exponent):
        exponent -= 1
    while magnitude >= pow10(exponent + 1):
        exponent += 1

    scaled = magnitude / pow10(exponent - digits + 1)
    if direction == "up":
        mantissa = ceil_rational(scaled)
    elif direction == "down":
        mantissa = floor_rational(scaled)
    else:
        mantissa = floor_rational(scaled + mpq(1, 2))
    if mantissa >= 10 ** digits:
        mantissa //= 10
        exponent += 1

    text = str(mantissa)
    body = text[0] + ("." + text[1:] if len(text) > 1 else "")
    return f"{'-' if negative else ''}{body}e{exponent:+03d}"


def rational_to_string(value: "mpq") -> str:
    """Exact ``"p/q"`` form, or the integer when the denominator is 1."""
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_rational(value: object) -> bool:
    """True for exact rational types (``mpq``, ``int``, ``Fraction``)."""
    return isinstance(value, (Rational, int, Fraction, type(mpz(0)))) and not isinstance(value, bool)


__all__ = [
    "Rational",
    "RationalLike",
    "to_rational",
    "parse_rational",
    "pow10",
    "floor_rational",
    "ceil_rational",
    "bit_size",
    "binary_exponent",
    "scale_pow2",
    "round_down",
    "round_up",
    "format_scientific",
    "rational_to_string",
    "is_rational",
]
