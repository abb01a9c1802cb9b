"""Exhaustive minimax on a discretized game.

The searcher picks locations on the grid ``i / M``; after each search the
adversary answers with any quality that keeps some consistent index alive.
Those answers form an interval ``[floor, top]`` at every location, where
``floor`` is the lower envelope and ``top = min(1, upper envelope)``.
Answers above 1 never help the adversary, so they are left out. The
adversary may use every multiple of ``1 / Kz`` in that interval plus the
floor itself, which keeps the response set nonempty and makes the last
answer exact.

Nothing here uses the closed-form policy; values come from backward
induction only. All arithmetic is on integers in units of ``1 / unit``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import History
from .errors import BudgetExceeded, InfeasibleHistory
from .exact import as_fraction
from .policy import Policy, Search, left_to_right


@dataclass(frozen=True)
class DiscreteInstance:
    M: int
    Kz: int
    c: Fraction
    D: int
    max_states: int = 5_000_000

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        if self.M < 1 or self.M & (self.M - 1):
            raise ValueError(f"M must be a power of two, got {self.M}")
        if self.Kz < 1:
            raise ValueError(f"Kz must be positive, got {self.Kz}")
        if self.c <= 0:
            raise ValueError(f"cost must be positive, got {self.c}")
        if not 0 <= self.D <= 4:
            raise ValueError(f"depth bound must be in 0..4, got {self.D}")

    @property
    def tolerance(self) -> Fraction:
        return 2 * (Fraction(1, self.M) + Fraction(1, self.Kz))

    @property
    def unit(self) -> int:
        return math.lcm(self.M, self.Kz, self.c.denominator)


@dataclass(frozen=True)
class GameValue:
    value: Fraction
    best_first_actions: frozenset
    stop_optimal: bool
    states: int = 0


def _window(obs, one):
    """Search window of integer observations as a list of closed pieces."""
    balls = sorted((x - abs(one - z), x + abs(one - z)) for x, z in obs if z != one)
    pieces = []
    pos = 0
    for lo, hi in balls:
        if pos > one:
            break
        if lo >= pos:
            pieces.append((pos, min(lo, one)))
            pos = hi
        elif hi > pos:
            pos = hi
    if pos <= one:
        pieces.append((pos, one))
    return pieces


class _Game:
    """Memoized backward induction over sorted observation tuples."""

    def __init__(self, unit, cost, depth, locations, zstep, max_states,
                 critical=False, extra_responses=False):
        self.one = unit
        self.cost = cost
        self.depth = depth
        self.locations = list(locations)
        self.loc_arr = np.array(self.locations, dtype=np.int64)
        self.zstep = zstep
        self.max_states = max_states
        self.critical = critical
        self.extra_responses = extra_responses
        self.memo = {}

    # -- feasibility -------------------------------------------------
    def hull(self, obs):
        pieces = _window(obs, self.one)
        if not pieces:
            raise InfeasibleHistory(f"empty window at {obs}")
        return pieces

    def floor(self, obs, pieces, w):
        a, b = pieces[0][0], pieces[-1][1]
        lo = self.one - max(w - a, b - w)
        for x, z in obs:
            lo = max(lo, z - abs(w - x))
        return lo

    def top(self, obs, w):
        t = self.one
        for x, z in obs:
            t = min(t, z + abs(w - x))
        return t

    def responses(self, obs, w, pieces=None):
        pieces = pieces or self.hull(obs)
        lo = self.floor(obs, pieces, w)
        hi = self.top(obs, w)
        out = {lo}
        first = -(-lo // self.zstep) * self.zstep
        out.update(range(first, hi + 1, self.zstep))
        if self.extra_responses:
            out.add(hi)
            zstar = max([0] + [z for _, z in obs])
            if lo <= zstar <= hi:
                out.add(zstar)
        return sorted(out)

    def candidates(self, obs, pieces):
        if not self.critical:
            return self.locations
        # kinks of the floor and crossings of its linear pieces
        a, b = pieces[0][0], pieces[-1][1]
        doubled = {2 * a, 2 * b, a + b}
        for a_, b_ in pieces:
            doubled.update((2 * a_, 2 * b_, a_ + b_))
        for x, z in obs:
            doubled.update((2 * x, z + x + b - self.one, self.one + a - z + x))
            for x2, z2 in obs:
                doubled.add(z2 - z + x + x2)
        extra = set()
        for d in doubled:
            assert d % 2 == 0, "unit too coarse for critical points"
            if 0 <= d <= 2 * self.one:
                extra.add(d // 2)
        return sorted(set(self.locations) | extra)

    # -- values ------------------------------------------------------
    def leaf(self, obs, pieces):
        """Best payoff with exactly one search left (or stopping now)."""
        zstar = max([0] + [z for _, z in obs])
        if self.critical:
            ws = np.array(self.candidates(obs, pieces), dtype=np.int64)
        else:
            ws = self.loc_arr
        a, b = pieces[0][0], pieces[-1][1]
        lo = self.one - np.maximum(ws - a, b - ws)
        for x, z in obs:
            lo = np.maximum(lo, z - np.abs(ws - x))
        best_find = max(zstar, int(lo.max()))
        return max(zstar, best_find - self.cost)

    def value(self, obs):
        key = obs
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        zstar = max([0] + [z for _, z in obs])
        remaining = self.depth - len(obs)
        if remaining <= 0:
            v = zstar
        else:
            pieces = self.hull(obs)
            if remaining == 1:
                v = self.leaf(obs, pieces)
            else:
                v = zstar
                seen = {x for x, _ in obs}
                for w in self.candidates(obs, pieces):
                    if w in seen:
                        continue
                    # only answers keeping the searcher above v + cost matter
                    worst = self.worst(obs, w, pieces, bound=v + self.cost)
                    if worst - self.cost > v:
                        v = worst - self.cost
        self.memo[key] = v
        if len(self.memo) > self.max_states:
            raise BudgetExceeded(f"more than {self.max_states} states visited")
        return v

    def worst(self, obs, w, pieces=None, bound=None):
        """Adversary's best answer to a search at ``w``; stops early at ``bound``."""
        worst = None
        for z in self.responses(obs, w, pieces):
            child = tuple(sorted(obs + ((w, z),)))
            cv = self.value(child)
            if worst is None or cv < worst:
                worst = cv
                if bound is not None and worst <= bound:
                    break
        return worst


def _game_for(inst: DiscreteInstance, unit: Optional[int] = None) -> _Game:
    unit = unit or inst.unit
    locations = [i * unit // inst.M for i in range(inst.M + 1)]
    cost = inst.c * unit
    assert cost.denominator == 1
    return _Game(unit, int(cost), inst.D, locations, unit // inst.Kz, inst.max_states)


def _root_worsts(args):
    inst, ws = args
    game = _game_for(inst)
    return [(w, game.worst((), w)) for w in ws], len(game.memo)


def solve(instance: DiscreteInstance, workers: int = 1) -> GameValue:
    """Minimax value from the empty history and the first searches attaining it."""
    game = _game_for(instance)
    if instance.D == 0:
        return GameValue(Fraction(0), frozenset(), True, 0)
    ws = game.locations
    if workers > 1:
        chunks = [ws[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_root_worsts, [(instance, ch) for ch in chunks]))
        pairs = sorted(p for part, _ in results for p in part)
        states = sum(n for _, n in results)
    else:
        pairs = [(w, game.worst((), w)) for w in ws]
        states = len(game.memo)
    unit = game.one
    best = max([0] + [wv - game.cost for _, wv in pairs])
    actions = frozenset(Fraction(w, unit) for w, wv in pairs if wv - game.cost == best)
    return GameValue(Fraction(best, unit), actions, best == 0, states)


def snap(x, M: int) -> Fraction:
    """Grid point ``i / M`` at or just left of ``x``.

    Rounding down keeps a left-to-right search from uncovering a sliver of
    window behind it, which rounding up can do when ``x`` sits just past a
    grid point.
    """
    x = as_fraction(x)
    return Fraction(math.floor(x * M), M)


class _PolicyWalk:
    """Guaranteed value of a fixed policy, with the oracle alongside."""

    def __init__(self, inst: DiscreteInstance, policy: Policy):
        self.inst = inst
        self.policy = policy
        self.game = _game_for(inst)
        self.unit = self.game.one
        self.memo = {}

    def history(self, seq) -> History:
        u = self.unit
        return History(tuple((Fraction(x, u), Fraction(z, u)) for x, z in seq), self.inst.c)

    def value(self, seq):
        """Worst payoff of the policy from the ordered history ``seq``."""
        if seq in self.memo:
            return self.memo[seq]
        zstar = max([0] + [z for _, z in seq])
        if len(seq) >= self.inst.D:
            v = zstar
        else:
            action = self.policy(self.history(seq))
            if not isinstance(action, Search):
                v = zstar
            else:
                w = int(snap(action.x, self.inst.M) * self.unit)
                obs = tuple(sorted(seq))
                v = min(self.value(seq + ((w, z),)) for z in self.game.responses(obs, w)) - self.game.cost
        self.memo[seq] = v
        return v

    def gaps(self, seq=()):
        """Yield ``oracle value - policy value`` at every on-path state."""
        yield self.game.value(tuple(sorted(seq))) - self.value(seq), seq
        if len(seq) >= self.inst.D:
            return
        action = self.policy(self.history(seq))
        if not isinstance(action, Search):
            return
        w = int(snap(action.x, self.inst.M) * self.unit)
        for z in self.game.responses(tuple(sorted(seq)), w):
            yield from self.gaps(seq + ((w, z),))


def value_of_policy(instance: DiscreteInstance, policy: Policy) -> Fraction:
    """Worst-case payoff of ``policy`` with its searches snapped to the grid."""
    walk = _PolicyWalk(instance, policy)
    return Fraction(walk.value(()), walk.unit)


def consistency_gap(instance: DiscreteInstance, policy: Policy = left_to_right):
    """Largest shortfall of ``policy`` against the oracle over its reachable states.

    Returns ``(gap, states_checked, worst_state)`` with the state as a
    History.
    """
    walk = _PolicyWalk(instance, policy)
    worst, worst_seq, count = None, (), 0
    for gap, seq in walk.gaps():
        count += 1
        if worst is None or gap > worst:
            worst, worst_seq = gap, seq
    return Fraction(worst, walk.unit), count, walk.history(worst_seq)


def dynamic_consistency_check(instance: DiscreteInstance, policy: Policy = left_to_right,
                              tolerance=None) -> bool:
    """True iff no reachable state of ``policy`` admits a revision worth more than the tolerance."""
    tol = instance.tolerance if tolerance is None else as_fraction(tolerance)
    gap, _, _ = consistency_gap(instance, policy)
    return gap <= tol


def continuation_value(h: History, searches: int, M: int = 40, Kz: int = 40,
                       max_states: int = 1_000_000) -> Fraction:
    """Best worst-case payoff from ``h`` with at most ``searches`` more searches.

    Locations range over the grid ``i / M`` together with every kink and
    crossing of the lower envelope, so the last search is placed exactly;
    the adversary may answer with grid qualities, the floor, the top, or a
    repeat of the best discovery so far.
    """
    if h.L != 1:
        raise ValueError("continuation_value assumes L = 1")
    dens = [M, Kz, h.c.denominator] + [v.denominator for o in h.observations for v in o]
    unit = math.lcm(*dens) * 2 ** (searches + 1)
    cost = h.c * unit
    locations = [i * unit // M for i in range(M + 1)]
    game = _Game(unit, int(cost), len(h) + searches, locations, unit // Kz, max_states,
                 critical=True, extra_responses=True)
    obs = tuple(sorted((int(x * unit), int(z * unit)) for x, z in h.observations))
    return Fraction(game.value(obs), unit)
