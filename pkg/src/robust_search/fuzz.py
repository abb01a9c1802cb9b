"""Random landscapes and the payoff-floor fuzzer."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .adversary import bifurcation_index
from .core import ONE, QualityIndex
from .errors import NonTerminating
from .exact import as_fraction
from .policy import left_to_right, value_guarantee
from .trace import Trace, simulate, trace_problems


def case_rng(seed: int, case: int) -> random.Random:
    """Generator for one case, independent of how cases are split over workers."""
    return random.Random(f"{seed}:{case}")


def random_index(rng: random.Random) -> QualityIndex:
    """Random 1-Lipschitz piecewise-linear index whose maximum is exactly 1.

    About one case in four is a bifurcation landscape on a 1/20 grid, the
    shape the worst-case adversary builds; the rest have 1 to 7 interior
    breakpoints with slopes drawn from [-1, 1], a third of them exactly
    +-1.
    """
    if rng.random() < 0.25:
        x = Fraction(rng.randint(0, 20), 20)
        lo = max(x, 1 - x)
        steps = [Fraction(k, 20) for k in range(21) if lo <= Fraction(k, 20) < 1]
        if steps:
            return bifurcation_index(x, rng.choice(steps))
    k = rng.randint(1, 7)
    xs = sorted({Fraction(rng.randint(1, 999), 1000) for _ in range(k)})
    xs = [Fraction(0)] + xs + [ONE]
    qs = [Fraction(0)]
    for x0, x1 in zip(xs, xs[1:]):
        if rng.random() < 1 / 3:
            slope = Fraction(rng.choice((-1, 1)))
        else:
            slope = Fraction(rng.randint(-100, 100), 100)
        qs.append(qs[-1] + slope * (x1 - x0))
    shift = 1 - max(qs)
    return QualityIndex(tuple((x, q + shift) for x, q in zip(xs, qs)), ONE)


@dataclass(frozen=True)
class CaseResult:
    case: int
    index: QualityIndex
    trace: Trace
    problems: tuple[str, ...]


def run_case(c: Fraction, seed: int, case: int) -> CaseResult:
    q = random_index(case_rng(seed, case))
    guarantee = value_guarantee(c)
    try:
        trace = simulate(left_to_right, q, c)
    except NonTerminating as exc:
        raise NonTerminating(f"case {case}: {exc}") from None
    problems = trace_problems(trace)
    if trace.payoff < guarantee:
        problems = problems + [f"payoff {trace.payoff} below guarantee {guarantee}"]
    return CaseResult(case, q, trace, tuple(problems))


def _run_chunk(args):
    c, seed, cases = args
    return [run_case(c, seed, i) for i in cases]


def run_fuzz(c, n: int, seed: int, workers: int = 1) -> list[CaseResult]:
    """Simulate the policy on ``n`` random landscapes; results ordered by case."""
    c = as_fraction(c)
    if n < 1:
        raise ValueError(f"need at least one case, got n={n}")
    if workers <= 1:
        return [run_case(c, seed, i) for i in range(n)]
    chunks = [(c, seed, range(w, n, workers)) for w in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = [r for part in pool.map(_run_chunk, chunks) for r in part]
    return sorted(results, key=lambda r: r.case)
