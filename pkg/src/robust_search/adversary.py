"""Worst-case landscapes.

The sequential adversary answers every search with the running cap
``base + (k - 1) * c`` whenever the landscape allows it, so each new
discovery is worth exactly one more search cost than the last. No policy
can then finish above ``base - c``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .core import ONE, History, QualityIndex, canonical_index, max_feasible_quality, search_window
from .errors import NotBifurcated
from .exact import as_fraction
from .policy import Policy, max_searches, stop_threshold
from .trace import Trace, run_policy


@dataclass(frozen=True)
class AdversarySchedule:
    base_threshold: Fraction
    step: Fraction
    issued: int = 0

    @property
    def cap(self) -> Fraction:
        """Cap on the next response (the ``issued + 1``-th)."""
        return self.base_threshold + self.issued * self.step

    def advance(self) -> "AdversarySchedule":
        return replace(self, issued=self.issued + 1)


def schedule_for(h: History) -> AdversarySchedule:
    """Schedule rooted at ``h``.

    The base is the policy threshold of the root window. When even one
    search is not worth it the base is ``c``, which still leaves every
    searching policy at or below zero.
    """
    l = search_window(h).measure
    if max_searches(h.c, l) == 0:
        return AdversarySchedule(h.c, h.c)
    return AdversarySchedule(stop_threshold(h.c, l), h.c)


def worst_case_response(schedule: AdversarySchedule, h: History, x) -> Fraction:
    """Quality issued for a search at ``x``: the cap, or less if ``h`` forces it."""
    x = as_fraction(x)
    z = min(schedule.cap, max_feasible_quality(h, x))
    search_window(h.extend(x, z))  # raises InfeasibleHistory if the window closes
    return z


def run_adversarial(policy: Policy, c, max_steps: int = 1000, name: str = "builtin") -> Trace:
    """Play ``policy`` against the schedule from the empty history.

    The returned trace carries a consistent witness index for the realized
    responses.
    """
    c = as_fraction(c)
    root = History((), c)
    schedule = schedule_for(root)

    def respond(h, x):
        nonlocal schedule
        z = worst_case_response(schedule, h, x)
        schedule = schedule.advance()
        return z

    trace = run_policy(policy, respond, c, ONE, max_steps, name)
    return replace(trace, witness=canonical_index(trace.history))


def bifurcation_index(x, z) -> QualityIndex:
    """Index that is flat at ``z`` left of ``x`` and climbs to 1 on the right.

    Valid only when the discovery ``z`` leaves targets possible on both
    sides of ``x``, i.e. ``max(x, 1 - x) <= z < 1``.
    """
    x, z = as_fraction(x), as_fraction(z)
    if not (max(x, 1 - x) <= z < 1):
        raise NotBifurcated(f"(x={x}, z={z}) needs max(x, 1 - x) <= z < 1")
    peak = x + 1 - z
    points = [(Fraction(0), z), (x, z), (peak, ONE)]
    if peak < 1:
        points.append((ONE, ONE))
    return QualityIndex(tuple(points), ONE)
