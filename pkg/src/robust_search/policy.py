"""The left-to-right policy and the window calculus it is built from."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .core import ONE, History, search_window
from .errors import NotLToRReachable, OutOfRange, UndefinedThreshold
from .exact import as_fraction


@dataclass(frozen=True)
class Search:
    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))
        if not 0 <= self.x <= 1:
            raise ValueError(f"search location {self.x} outside [0, 1]")


@dataclass(frozen=True)
class Stop:
    pass


STOP = Stop()

PolicyAction = Union[Search, Stop]
Policy = Callable[[History], PolicyAction]


def _check_cost_length(c: Fraction, l: Fraction):
    if c <= 0:
        raise OutOfRange(f"search cost must be positive, got {c}")
    if c > 1:
        raise OutOfRange(f"search cost {c} exceeds 1")
    if not 0 <= l <= 1:
        raise OutOfRange(f"window length {l} outside [0, 1]")


def max_searches(c, l) -> int:
    """Largest number of further searches the policy can make.

    0 when ``c`` lies in (1 - l/2, 1], 1 when ``c`` lies in (l/2, 1 - l/2],
    otherwise the unique n >= 2 with ``n(n-1)c <= l < n(n+1)c``.
    """
    c, l = as_fraction(c), as_fraction(l)
    _check_cost_length(c, l)
    if c > 1 - l / 2:
        return 0
    if c > l / 2:
        return 1
    ratio = l / c
    # n(n-1) <= ratio < n(n+1); start from the real root and fix rounding.
    n = max(2, int((1 + math.isqrt(int(4 * ratio) + 1)) // 2))
    while n * (n - 1) > ratio:
        n -= 1
    while n * (n + 1) <= ratio:
        n += 1
    return n


def stop_threshold(c, l) -> Fraction:
    """Quality at which the policy stops after searching a window of length ``l``."""
    c, l = as_fraction(c), as_fraction(l)
    n = max_searches(c, l)
    if n == 0:
        raise UndefinedThreshold(f"no search is made at c={c}, l={l}")
    return 1 - l / (2 * n) - Fraction(n - 1, 2) * c


@dataclass(frozen=True)
class BallPartition:
    """Tiling of the ordered window [1 - l, 1] into balls of growing diameter.

    ``diameters`` are listed largest first, which is also left to right.
    """

    diameters: tuple[Fraction, ...]
    centers: tuple[Fraction, ...]
    base_diameter: Fraction

    @property
    def threshold(self) -> Fraction:
        return 1 - self.diameters[0] / 2


def ball_partition(c, l) -> BallPartition:
    c, l = as_fraction(c), as_fraction(l)
    n = max_searches(c, l)
    if n == 0:
        raise UndefinedThreshold(f"no search is made at c={c}, l={l}")
    k = l / n - (n - 1) * c
    diameters = tuple(k + 2 * c * (n - 1 - i) for i in range(n))
    centers = [1 - l + diameters[0] / 2]
    for d_prev, d_next in zip(diameters, diameters[1:]):
        centers.append(centers[-1] + (d_prev + d_next) / 2)
    return BallPartition(diameters, tuple(centers), k)


def search_location(c, l) -> Fraction:
    """Center of the largest ball when the window is [1 - l, 1]."""
    c, l = as_fraction(c), as_fraction(l)
    return 2 - l - stop_threshold(c, l)


def _act(h: History) -> PolicyAction:
    if h.L != 1:
        raise ValueError(f"the left-to-right policy is stated for L = 1, got L = {h.L}")
    l = search_window(h).measure
    if max_searches(h.c, l) == 0:
        return STOP
    phi = stop_threshold(h.c, l)
    if h.best_quality >= phi - h.c:
        return STOP
    return Search(2 - l - phi)


def act(h: History, strict: bool = False) -> PolicyAction:
    """Action of the left-to-right policy at ``h``.

    Stops once the best discovery reaches ``phi(l) - c`` (ties stop) and
    otherwise searches the center of the largest partition ball. With
    ``strict=True`` the history must be one the policy itself could have
    produced; by default the rule is applied to any consistent history.
    """
    if strict:
        check_reachable(h)
    return _act(h)


def check_reachable(h: History) -> None:
    """Raise :class:`NotLToRReachable` unless replaying the policy yields ``h``."""
    for i, (x, _) in enumerate(h.observations):
        prefix = History(h.observations[:i], h.c, h.L)
        action = _act(prefix)
        if action != Search(x):
            raise NotLToRReachable(
                f"observation {i} at x={x} but the policy plays {action} after {i} searches"
            )


def left_to_right(h: History) -> PolicyAction:
    """The policy as a plain callable, for code that takes any policy."""
    return _act(h)


def value_guarantee(c) -> Fraction:
    """Worst-case payoff of the left-to-right policy from the empty history."""
    c = as_fraction(c)
    if max_searches(c, ONE) == 0:
        return Fraction(0)
    return stop_threshold(c, ONE) - c
