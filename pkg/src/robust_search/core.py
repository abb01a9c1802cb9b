"""Histories, quality indices, envelopes and search windows.

Everything here works on exact ``Fraction`` values. A history is a list of
observed ``(x, z)`` pairs on [0, 1]; the set of quality indices consistent
with it is every L-Lipschitz map through those points that reaches the
target quality 1 somewhere. The search window is the set of locations that
can still be a target.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from .errors import InfeasibleHistory, InvalidIndex
from .exact import as_fraction, format_number

ONE = Fraction(1)
ZERO = Fraction(0)

#: Upper envelope value when no observation constrains a location.
UNBOUNDED = math.inf


class Observation(NamedTuple):
    x: Fraction
    z: Fraction


@dataclass(frozen=True)
class History:
    """Observations in the order they were made, plus the search cost.

    Construction only checks ranges. Lipschitz consistency and the existence
    of a target are checked by :func:`check_consistent` and by the operations
    that need them.
    """

    observations: tuple[Observation, ...]
    c: Fraction
    L: Fraction = ONE

    def __post_init__(self):
        obs = tuple(Observation(as_fraction(x), as_fraction(z)) for x, z in self.observations)
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "L", as_fraction(self.L))
        if self.c <= 0:
            raise ValueError(f"search cost must be positive, got {self.c}")
        if self.L <= 0:
            raise ValueError(f"Lipschitz constant must be positive, got {self.L}")
        for x, _ in obs:
            if not 0 <= x <= 1:
                raise ValueError(f"location {x} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    @property
    def best_quality(self) -> Fraction:
        """Best discovery so far, counting the outside option of quality 0."""
        return max([ZERO, *(z for _, z in self.observations)])

    @property
    def locations(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.observations)

    def extend(self, x, z) -> "History":
        return History(self.observations + (Observation(as_fraction(x), as_fraction(z)),), self.c, self.L)

    def to_json(self) -> dict:
        return {
            "c": format_number(self.c),
            "L": format_number(self.L),
            "observations": [[format_number(x), format_number(z)] for x, z in self.observations],
        }

    @classmethod
    def from_json(cls, data: dict) -> "History":
        try:
            obs = [(as_fraction(x), as_fraction(z)) for x, z in data.get("observations", [])]
            return cls(tuple(obs), as_fraction(data["c"]), as_fraction(data.get("L", 1)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"invalid history JSON: {exc}") from exc


@dataclass(frozen=True)
class SearchWindow:
    """Sorted, disjoint union of closed intervals inside [0, 1].

    Degenerate intervals ``(a, a)`` are kept: they carry no measure but
    they are still places where a target may sit.
    """

    intervals: tuple[tuple[Fraction, Fraction], ...]

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), ZERO)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def left(self) -> Fraction:
        return self.intervals[0][0]

    @property
    def right(self) -> Fraction:
        return self.intervals[-1][1]

    def __contains__(self, x) -> bool:
        x = as_fraction(x)
        return any(a <= x <= b for a, b in self.intervals)

    def issubset(self, other: "SearchWindow") -> bool:
        return all(
            any(c <= a and b <= d for c, d in other.intervals) for a, b in self.intervals
        )

    def farthest_distance(self, x) -> Fraction:
        """Largest distance from ``x`` to a point of the window."""
        x = as_fraction(x)
        return max(x - self.left, self.right - x)

    def point_at_fraction(self, f) -> Fraction:
        """Point splitting the window's measure into ``f`` and ``1 - f``.

        A window of measure zero returns its leftmost point.
        """
        f = as_fraction(f)
        if not 0 <= f <= 1:
            raise ValueError(f"fraction {f} outside [0, 1]")
        total = self.measure
        if total == 0:
            return self.left
        remaining = f * total
        for a, b in self.intervals:
            if remaining <= b - a:
                return a + remaining
            remaining -= b - a
        return self.right


def _window_intervals(h: History) -> tuple[tuple[Fraction, Fraction], ...]:
    # Remove the open ball of radius |1 - z| / L around each observation.
    balls = []
    for x, z in h.observations:
        r = abs(ONE - z) / h.L
        if r > 0:
            balls.append((x - r, x + r))
    balls.sort()
    pieces = []
    pos = ZERO
    for lo, hi in balls:
        if pos > 1:
            break
        if lo >= pos:
            pieces.append((pos, min(lo, ONE)))
            pos = hi
        elif hi > pos:
            pos = hi
    if pos <= 1:
        pieces.append((pos, ONE))
    return tuple(pieces)


def search_window(h: History) -> SearchWindow:
    """Locations that are targets under some index consistent with ``h``.

    Raises :class:`InfeasibleHistory` when no such location exists.
    """
    pieces = _window_intervals(h)
    if not pieces:
        raise InfeasibleHistory("search window is empty: no location can still reach quality 1")
    return SearchWindow(pieces)


def is_ordered(h: History) -> bool:
    """True iff the window is a single interval ending at 1."""
    window = search_window(h)
    return len(window.intervals) == 1 and window.right == 1


def upper_envelope(h: History, x) -> Union[Fraction, float]:
    """Pointwise least upper bound on q(x) from the observations alone."""
    x = as_fraction(x)
    if not h.observations:
        return UNBOUNDED
    return min(z + h.L * abs(x - xi) for xi, z in h.observations)


def _lower_cone(h: History, x: Fraction) -> Union[Fraction, float]:
    if not h.observations:
        return -math.inf
    return max(z - h.L * abs(x - xi) for xi, z in h.observations)


def lower_envelope(h: History, x) -> Fraction:
    """Least value of q(x) over indices consistent with ``h``.

    Besides the observation cones, the index has to climb back to 1 at some
    point of the window; the cheapest way is a target as far from ``x`` as
    the window allows.
    """
    x = as_fraction(x)
    window = search_window(h)
    floor = ONE - h.L * window.farthest_distance(x)
    return max(_lower_cone(h, x), floor)


def max_feasible_quality(h: History, x) -> Fraction:
    """Greatest value of q(x) over indices consistent with ``h``."""
    x = as_fraction(x)
    window = search_window(h)
    return min(upper_envelope(h, x), ONE + h.L * window.farthest_distance(x))


def pairwise_violation(h: History):
    """First pair of observations breaking the Lipschitz bound, or None."""
    obs = h.observations
    for i in range(len(obs)):
        for j in range(i + 1, len(obs)):
            (xi, zi), (xj, zj) = obs[i], obs[j]
            if abs(zi - zj) > h.L * abs(xi - xj):
                return obs[i], obs[j]
    return None


def check_consistent(h: History) -> SearchWindow:
    """Raise :class:`InfeasibleHistory` unless some index in Q fits ``h``."""
    bad = pairwise_violation(h)
    if bad is not None:
        (xi, zi), (xj, zj) = bad
        raise InfeasibleHistory(
            f"observations ({xi}, {zi}) and ({xj}, {zj}) violate the Lipschitz bound L={h.L}"
        )
    return search_window(h)


def is_consistent(h: History) -> bool:
    try:
        check_consistent(h)
    except InfeasibleHistory:
        return False
    return True


@dataclass(frozen=True)
class QualityIndex:
    """Continuous piecewise-linear index given by its breakpoints."""

    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    L: Fraction = ONE
    _xs: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple((as_fraction(x), as_fraction(q)) for x, q in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        object.__setattr__(self, "L", as_fraction(self.L))
        object.__setattr__(self, "_xs", tuple(x for x, _ in pts))
        self._validate()

    def _validate(self):
        pts = self.breakpoints
        if len(pts) < 2:
            raise InvalidIndex("need at least two breakpoints")
        if pts[0][0] != 0 or pts[-1][0] != 1:
            raise InvalidIndex(f"breakpoints must span [0, 1], got [{pts[0][0]}, {pts[-1][0]}]")
        for i, ((x0, q0), (x1, q1)) in enumerate(zip(pts, pts[1:])):
            if x1 <= x0:
                raise InvalidIndex(f"segment {i}: x not strictly increasing ({x0} -> {x1})")
            slope = (q1 - q0) / (x1 - x0)
            if abs(slope) > self.L:
                raise InvalidIndex(
                    f"segment {i} [{x0}, {x1}]: slope {slope} exceeds L={self.L}"
                )
        values = [q for _, q in pts]
        if not min(values) <= 1 <= max(values):
            raise InvalidIndex(f"index never attains quality 1 (range [{min(values)}, {max(values)}])")

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    @property
    def maximum(self) -> Fraction:
        return max(q for _, q in self.breakpoints)

    def passes_through(self, h: History) -> bool:
        return all(evaluate(self, x) == z for x, z in h.observations)

    def to_json(self) -> dict:
        return {
            "L": format_number(self.L),
            "breakpoints": [[format_number(x), format_number(q)] for x, q in self.breakpoints],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QualityIndex":
        try:
            pts = [(as_fraction(x), as_fraction(q)) for x, q in data["breakpoints"]]
            L = as_fraction(data.get("L", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidIndex(f"malformed index JSON: {exc}") from exc
        return cls(tuple(pts), L)


def evaluate(q: QualityIndex, x) -> Fraction:
    """Linear interpolation between breakpoints."""
    x = as_fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"location {x} outside [0, 1]")
    i = bisect.bisect_right(q._xs, x)
    if i >= len(q._xs):
        return q.breakpoints[-1][1]
    (x0, q0), (x1, q1) = q.breakpoints[i - 1], q.breakpoints[i]
    return q0 + (q1 - q0) * (x - x0) / (x1 - x0)


def _simplify(points: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    out = [points[0]]
    for p, nxt in zip(points[1:], points[2:]):
        (x0, q0) = out[-1]
        (x1, q1), (x2, q2) = p, nxt
        if (q1 - q0) * (x2 - x1) != (q2 - q1) * (x1 - x0):
            out.append(p)
    out.append(points[-1])
    return out


def canonical_index(h: History) -> QualityIndex:
    """A consistent index witnessing that ``h`` is feasible.

    The index is ``max(lower cone, min(1, upper envelope))``: it passes
    through every observation, is L-Lipschitz, and equals 1 exactly on the
    search window.
    """
    window = check_consistent(h)
    L = h.L
    candidates = {ZERO, ONE}
    obs = h.observations
    for xi, zi in obs:
        candidates.add(xi)
        r = abs(ONE - zi) / L
        candidates.update((xi - r, xi + r))
        for xj, zj in obs:
            # slope +L line through i meets slope -L line through j
            candidates.add((zj - zi + L * (xi + xj)) / (2 * L))
    for a, b in window.intervals:
        candidates.update((a, b))
    xs = sorted(x for x in candidates if 0 <= x <= 1)

    def value(y):
        return max(_lower_cone(h, y), min(ONE, upper_envelope(h, y)))

    points = _simplify([(y, value(y)) for y in xs])
    return QualityIndex(tuple(points), L)


def mirror_history(h: History) -> History:
    """Reflect every observation through x = 1/2."""
    return History(tuple((ONE - x, z) for x, z in h.observations), h.c, h.L)


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(data, path=None) -> str:
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
