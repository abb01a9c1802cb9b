"""Rule-based policies loaded from JSON, for stress-testing the adversary.

A script is a list of rule objects::

    [{"stop_if_best_geq": 0.7},
     {"max_searches": 3},
     {"if_window_measure_geq": 0.5, "search_at_fraction": 0.25},
     {"if_window_measure_geq": 0, "search_at_fraction": 0.5}]

Stop rules are checked first. Otherwise the first search rule whose
measure bound holds picks the point that splits the window's measure at
the given fraction. If nothing matches, the policy stops.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import History, search_window
from .exact import as_fraction, format_number
from .policy import STOP, PolicyAction, Search

_KNOWN = {"stop_if_best_geq", "max_searches", "if_window_measure_geq", "search_at_fraction"}


@dataclass(frozen=True)
class ScriptedPolicy:
    search_rules: tuple[tuple[Fraction, Fraction], ...]
    stop_if_best_geq: Optional[Fraction] = None
    max_searches: Optional[int] = None

    def __call__(self, h: History) -> PolicyAction:
        if self.stop_if_best_geq is not None and h.best_quality >= self.stop_if_best_geq:
            return STOP
        if self.max_searches is not None and len(h) >= self.max_searches:
            return STOP
        window = search_window(h)
        for min_measure, fraction in self.search_rules:
            if window.measure >= min_measure:
                return Search(window.point_at_fraction(fraction))
        return STOP

    @classmethod
    def from_json(cls, rules: list) -> "ScriptedPolicy":
        if not isinstance(rules, list):
            raise ValueError("a policy script is a JSON list of rule objects")
        search_rules = []
        stop_at = max_n = None
        for i, rule in enumerate(rules):
            if not isinstance(rule, dict) or not rule or set(rule) - _KNOWN:
                raise ValueError(f"rule {i}: unrecognized rule {rule!r}")
            if "stop_if_best_geq" in rule:
                stop_at = as_fraction(rule["stop_if_best_geq"])
            elif "max_searches" in rule:
                max_n = int(rule["max_searches"])
                if max_n < 0:
                    raise ValueError(f"rule {i}: max_searches must be >= 0")
            else:
                try:
                    w = as_fraction(rule["if_window_measure_geq"])
                    f = as_fraction(rule["search_at_fraction"])
                except KeyError as exc:
                    raise ValueError(f"rule {i}: missing {exc}") from None
                if not 0 <= f <= 1:
                    raise ValueError(f"rule {i}: search_at_fraction {f} outside [0, 1]")
                search_rules.append((w, f))
        return cls(tuple(search_rules), stop_at, max_n)

    def to_json(self) -> list:
        out = []
        if self.stop_if_best_geq is not None:
            out.append({"stop_if_best_geq": format_number(self.stop_if_best_geq)})
        if self.max_searches is not None:
            out.append({"max_searches": self.max_searches})
        for w, f in self.search_rules:
            out.append({"if_window_measure_geq": format_number(w),
                        "search_at_fraction": format_number(f)})
        return out


def random_script(rng, max_rules: int = 3, max_searches: int = 6) -> ScriptedPolicy:
    """Random script that always terminates within ``max_searches``."""
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        rules.append((Fraction(rng.randint(0, 100), 100), Fraction(rng.randint(0, 100), 100)))
    rules.sort(reverse=True)
    stop_at = Fraction(rng.randint(0, 100), 100) if rng.random() < 0.7 else None
    return ScriptedPolicy(tuple(rules), stop_at, rng.randint(0, max_searches))
