"""Run records and simulation of a policy against a fixed landscape."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .core import ONE, History, QualityIndex, evaluate, search_window
from .errors import NonTerminating
from .exact import format_number
from .policy import Policy, Search, max_searches, stop_threshold


@dataclass(frozen=True)
class Step:
    t: int
    action: str  # "search" or "stop"
    x: Optional[Fraction]
    z: Optional[Fraction]
    window_measure_before: Fraction
    threshold: Optional[Fraction]  # phi(l) - c, None when no search is worthwhile

    def to_json(self) -> dict:
        fmt = lambda v: None if v is None else format_number(v)
        return {
            "t": self.t,
            "action": self.action,
            "x": fmt(self.x),
            "z": fmt(self.z),
            "window_measure_before": fmt(self.window_measure_before),
            "threshold": fmt(self.threshold),
        }


@dataclass(frozen=True)
class Trace:
    c: Fraction
    L: Fraction
    steps: tuple[Step, ...]
    history: History
    policy: str = "builtin"
    witness: Optional[QualityIndex] = field(default=None, compare=False)

    @property
    def searches(self) -> tuple[Step, ...]:
        return tuple(s for s in self.steps if s.action == "search")

    @property
    def adopted_quality(self) -> Fraction:
        return self.history.best_quality

    @property
    def searches_paid(self) -> int:
        return len(self.history)

    @property
    def payoff(self) -> Fraction:
        return self.adopted_quality - self.c * self.searches_paid

    def to_json(self) -> dict:
        return {
            "c": format_number(self.c),
            "L": format_number(self.L),
            "policy": self.policy,
            "steps": [s.to_json() for s in self.steps],
            "terminal": {
                "adopted_quality": format_number(self.adopted_quality),
                "searches_paid": self.searches_paid,
                "payoff": format_number(self.payoff),
            },
        }


def threshold_at(h: History) -> Optional[Fraction]:
    l = search_window(h).measure
    if h.c > 1 or max_searches(h.c, l) == 0:
        return None
    return stop_threshold(h.c, l) - h.c


def run_policy(
    policy: Policy,
    respond: Callable[[History, Fraction], Fraction],
    c,
    L=ONE,
    max_steps: int = 1000,
    name: str = "builtin",
) -> Trace:
    """Play ``policy`` from the empty history, asking ``respond`` for qualities."""
    h = History((), c, L)
    steps = []
    for t in range(max_steps + 1):
        action = policy(h)
        l = search_window(h).measure
        thr = threshold_at(h) if L == 1 else None
        if not isinstance(action, Search):
            steps.append(Step(t, "stop", None, None, l, thr))
            return Trace(h.c, h.L, tuple(steps), h, name)
        if t == max_steps:
            break
        z = respond(h, action.x)
        steps.append(Step(t, "search", action.x, z, l, thr))
        h = h.extend(action.x, z)
    raise NonTerminating(f"policy {name!r} still searching after {max_steps} steps")


def simulate(policy: Policy, q: QualityIndex, c, max_steps: int = 1000, name: str = "builtin") -> Trace:
    """Play ``policy`` when the true landscape is ``q``."""
    return run_policy(policy, lambda h, x: evaluate(q, x), c, q.L, max_steps, name)


def trace_problems(trace: Trace, builtin: bool = True) -> list[str]:
    """Self-checks every emitted trace must pass; empty list means valid."""
    problems = []
    if trace.payoff != trace.adopted_quality - trace.c * trace.searches_paid:
        problems.append("payoff identity broken")
    if not trace.steps or trace.steps[-1].action != "stop":
        problems.append("trace does not end with a stop")
    searches = trace.searches
    if builtin:
        xs = [s.x for s in searches]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            problems.append(f"search locations not strictly increasing: {xs}")
        thr = [s.threshold for s in searches]
        if any(b <= a for a, b in zip(thr, thr[1:])):
            problems.append(f"thresholds not strictly increasing: {thr}")
        last = trace.steps[-1].threshold
        if thr and last is not None and last < thr[-1]:
            problems.append("threshold fell at the stopping history")
        if searches and trace.adopted_quality != searches[-1].z:
            problems.append("stopped trace did not adopt its last discovery")
    return problems
