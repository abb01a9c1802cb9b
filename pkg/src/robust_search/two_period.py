"""Closed-form solution when search costs lie strictly between 1/4 and 1/2.

In that range no optimal policy searches more than twice, so everything is
decided by where the first search goes and which discoveries end search.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable

from .core import ONE, History, search_window
from .errors import Infeasible, OutOfRange, UnsupportedHistory
from .exact import as_fraction
from .policy import STOP, PolicyAction, Search

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


class RiskClass(enum.Enum):
    BIFURCATION = "bifurcation"
    DIRECTIONAL = "directional"
    CONTINUE = "continue"

    @property
    def stops(self) -> bool:
        return self is not RiskClass.CONTINUE


def _check_cost(c) -> Fraction:
    c = as_fraction(c)
    if not QUARTER < c < HALF:
        raise OutOfRange(f"two-period analysis needs 1/4 < c < 1/2, got c={c}")
    return c


def bifurcation_boundary(x) -> Fraction:
    x = as_fraction(x)
    return max(x, 1 - x)


def directional_boundary(x, c) -> Fraction:
    x, c = as_fraction(x), _check_cost(c)
    base = 2 * (1 - c) / 3
    return min(base + x / 3, base - (x - 1) / 3)


def classify(x, z, c) -> RiskClass:
    """Which region a first discovery ``z`` at ``x`` falls in.

    Boundaries belong to the stopping regions. ``z = 1`` (a target found)
    is filed under bifurcation risk, the top edge of that region.
    """
    x, z, c = as_fraction(x), as_fraction(z), _check_cost(c)
    if not 0 <= x <= 1:
        raise Infeasible(f"location {x} outside [0, 1]")
    edge = bifurcation_boundary(x)
    if z < 1 - edge or z > 1:
        raise Infeasible(f"quality {z} at x={x} cannot follow one search (needs {1 - edge} <= z <= 1)")
    if z >= edge:
        return RiskClass.BIFURCATION
    if z >= directional_boundary(x, c):
        return RiskClass.DIRECTIONAL
    return RiskClass.CONTINUE


def m_curve(x, c) -> Fraction:
    """Lower edge of the stopping region above ``x``."""
    x, c = as_fraction(x), _check_cost(c)
    return min(bifurcation_boundary(x), directional_boundary(x, c))


def m_curve_peaks(c) -> tuple[Fraction, Fraction]:
    c = _check_cost(c)
    return QUARTER + c / 2, 3 * QUARTER - c / 2


def optimal_two_period(h: History) -> PolicyAction:
    c = _check_cost(h.c)
    first = QUARTER + c / 2
    if not h.observations:
        return Search(first)
    if len(h) == 1 and h.observations[0].x == first:
        z0 = h.observations[0].z
        if z0 >= 3 * QUARTER - c / 2:
            return STOP
        return Search(1 - search_window(h).measure / 2)
    raise UnsupportedHistory(
        f"two-period policy covers the empty history and a single search at {first}"
    )


def sequential_guarantee(c) -> Fraction:
    c = _check_cost(c)
    return 3 * QUARTER - 3 * c / 2


def simultaneous_guarantee(locations: Iterable, c) -> Fraction:
    """Worst-case payoff of searching every location in one batch.

    The adversary puts the target as far as possible from all of them, so
    the best discovery is ``1 - max_t min_i |t - x_i|``.
    """
    xs = sorted(as_fraction(x) for x in locations)
    c = as_fraction(c)
    if not xs:
        return Fraction(0)
    gap = max(xs[0], ONE - xs[-1], *((b - a) / 2 for a, b in zip(xs, xs[1:])))
    return 1 - gap - len(xs) * c
