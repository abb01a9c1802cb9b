"""Conversion between external numbers and exact rationals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

MAX_DENOMINATOR = 2**32


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact ``Fraction``.

    Strings may be decimals (``"0.3"``, ``"1e-3"``) or ratios (``"4/15"``).
    Floats go through their shortest repr so ``0.3`` becomes ``3/10``.
    Anything with a denominator above 2**32 is rounded to the closest
    fraction within that bound.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"not a finite number: {value!r}")
        out = Fraction(repr(value))
    elif isinstance(value, str):
        text = value.strip()
        if text.startswith("~"):
            raise ValueError(f"approximate value {value!r} cannot be read back exactly")
        out = Fraction(text)
    else:
        raise TypeError(f"cannot interpret {value!r} as a number")
    if out.denominator > MAX_DENOMINATOR:
        out = out.limit_denominator(MAX_DENOMINATOR)
    return out


def _terminating_digits(q: Fraction) -> int | None:
    """Number of decimal places needed to write ``q`` exactly, or None."""
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return None
    return max(twos, fives)


def format_number(q, exact: bool = True) -> str:
    """Render a rational as text.

    Terminating decimals are written out in full (``"0.0625"``). Otherwise
    ``exact=True`` gives ``"p/q"`` and ``exact=False`` gives 12 significant
    digits prefixed with ``~``.
    """
    q = as_fraction(q)
    places = _terminating_digits(q)
    if places is None:
        if exact:
            return f"{q.numerator}/{q.denominator}"
        return "~" + format(q.numerator / q.denominator, ".12g")
    sign = "-" if q < 0 else ""
    scaled = abs(q.numerator) * 10**places // q.denominator
    if places == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**places)
    frac_text = str(frac).rjust(places, "0").rstrip("0")
    return f"{sign}{whole}.{frac_text}" if frac_text else f"{sign}{whole}"
