"""Command-line harness: tables, runs, adversarial play, regions, oracle checks, fuzzing.

Exit codes: 0 ok, 2 bad input, 3 a guaranteed property failed, 4 oracle budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import fuzz as fuzzing
from .adversary import run_adversarial
from .core import QualityIndex, dump_json, load_json
from .errors import BudgetExceeded, NonTerminating
from .exact import as_fraction, format_number
from .oracle import DiscreteInstance, consistency_gap, solve
from .policy import left_to_right, max_searches, search_location, stop_threshold, value_guarantee
from .scripted import ScriptedPolicy
from .trace import simulate, trace_problems
from .two_period import bifurcation_boundary, directional_boundary, m_curve, m_curve_peaks

EXIT_OK, EXIT_INPUT, EXIT_PROPERTY, EXIT_BUDGET = 0, 2, 3, 4


class PropertyViolation(Exception):
    pass


def _num(q) -> str:
    return format_number(q, exact=False)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, name: str, text: str):
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _require_c(args) -> Fraction:
    if args.c is None:
        raise ValueError("--c is required")
    c = as_fraction(args.c)
    if not 0 < c <= 1:
        raise ValueError(f"--c must lie in (0, 1], got {c}")
    return c


def cmd_table(args) -> int:
    c = _require_c(args)
    if args.l:
        ls = [as_fraction(v) for v in args.l]
    else:
        ls = [Fraction(i, args.steps) for i in range(1, args.steps + 1)]
    rows = []
    for l in ls:
        n = max_searches(c, l)
        if n == 0:
            rows.append([_num(l), 0, "", ""])
        else:
            rows.append([_num(l), n, _num(stop_threshold(c, l)), _num(search_location(c, l))])
    _emit(args, "table.csv", _csv(["l", "N", "phi", "first_search_location"], rows))
    return EXIT_OK


def cmd_run(args) -> int:
    c = _require_c(args)
    q = QualityIndex.from_json(load_json(args.index))
    trace = simulate(left_to_right, q, c, name="builtin")
    _emit(args, "trace.json", dump_json(trace.to_json()))
    problems = trace_problems(trace)
    guarantee = value_guarantee(c)
    if trace.payoff < guarantee:
        problems.append(f"payoff {trace.payoff} below guarantee {guarantee}")
    if problems:
        raise PropertyViolation("; ".join(problems))
    return EXIT_OK


def cmd_adversary(args) -> int:
    c = _require_c(args)
    if args.policy == "builtin":
        policy, name, builtin = left_to_right, "builtin", True
    else:
        policy, name, builtin = ScriptedPolicy.from_json(load_json(args.policy)), args.policy, False
    trace = run_adversarial(policy, c, name=name)
    report = {"trace": trace.to_json(), "witness": trace.witness.to_json()}
    if args.out is None:
        sys.stdout.write(dump_json(report))
    else:
        _emit(args, "trace.json", dump_json(report["trace"]))
        _emit(args, "witness.json", dump_json(report["witness"]))
    problems = trace_problems(trace, builtin=builtin)
    guarantee = value_guarantee(c)
    if trace.payoff > guarantee:
        problems.append(f"payoff {trace.payoff} above guarantee {guarantee}")
    if builtin and trace.payoff != guarantee:
        problems.append(f"builtin payoff {trace.payoff} differs from guarantee {guarantee}")
    if not trace.witness.passes_through(trace.history):
        problems.append("witness index does not reproduce the responses")
    if problems:
        raise PropertyViolation("; ".join(problems))
    return EXIT_OK


def cmd_regions(args) -> int:
    c = _require_c(args)
    if args.samples < 2:
        raise ValueError("--samples must be at least 2")
    rows = []
    for i in range(args.samples):
        x = Fraction(i, args.samples - 1)
        rows.append([_num(x), _num(bifurcation_boundary(x)), _num(directional_boundary(x, c)),
                     _num(m_curve(x, c))])
    peak_value = Fraction(3, 4) - c / 2
    for p in m_curve_peaks(c):
        if m_curve(p, c) != peak_value:
            raise PropertyViolation(f"m-curve at {p} is {m_curve(p, c)}, expected {peak_value}")
    _emit(args, "regions.csv",
          _csv(["x", "bifurcation_boundary", "directional_boundary", "m_curve"], rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    c = _require_c(args)
    depth = args.D if args.D is not None else max(1, max_searches(c, 1))
    inst = DiscreteInstance(args.M, args.Kz, c, depth, args.max_states)
    game = solve(inst, workers=args.workers)
    closed = value_guarantee(c)
    gap = abs(game.value - closed)
    revision, checked, _ = consistency_gap(inst)
    consistent = revision <= inst.tolerance
    passed = gap <= inst.tolerance and consistent
    report = {
        "c": format_number(c), "M": args.M, "Kz": args.Kz, "D": depth,
        "oracle_value": format_number(game.value),
        "closed_form_value": format_number(closed),
        "gap": format_number(gap),
        "tolerance": format_number(inst.tolerance),
        "best_first_actions": [format_number(x) for x in sorted(game.best_first_actions)],
        "max_revision_gain": format_number(revision),
        "states_checked": checked,
        "dynamically_consistent": consistent,
        "pass": passed,
    }
    _emit(args, "verify.json", dump_json(report))
    if not passed:
        raise PropertyViolation(f"verification failed: gap {gap}, revision gain {revision}")
    return EXIT_OK


def cmd_fuzz(args) -> int:
    c = _require_c(args)
    results = fuzzing.run_fuzz(c, args.n, args.seed, workers=args.workers)
    bad = [r for r in results if r.problems]
    rows = [[r.case, len(r.index.breakpoints), r.trace.searches_paid,
             _num(r.trace.adopted_quality), _num(r.trace.payoff), "ok" if not r.problems else "FAIL"]
            for r in results]
    summary = {
        "c": format_number(c), "n": args.n, "seed": args.seed,
        "guarantee": format_number(value_guarantee(c)),
        "min_payoff": format_number(min(r.trace.payoff for r in results)),
        "violations": len(bad),
        "counterexamples": [
            {"case": r.case, "problems": list(r.problems), "index": r.index.to_json()} for r in bad
        ],
    }
    if args.out is None:
        sys.stdout.write(dump_json(summary))
    else:
        _emit(args, "fuzz_cases.csv",
              _csv(["case", "breakpoints", "searches", "adopted_quality", "payoff", "status"], rows))
        _emit(args, "fuzz_summary.json", dump_json(summary))
        for r in bad:
            _emit(args, f"counterexample_{r.case}.json", dump_json(r.index.to_json()))
    if bad:
        raise PropertyViolation(f"{len(bad)} of {args.n} cases violated the payoff floor")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", default=argparse.SUPPRESS, help="search cost, e.g. 0.3 or 3/10")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized suites")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default: stdout)")

    parser = argparse.ArgumentParser(prog="robust-search", parents=[common],
                                     description="Worst-case sequential search toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="N, threshold and first search per window length")
    p.add_argument("--l", action="append", help="window length (repeatable)")
    p.add_argument("--steps", type=int, default=10, help="use l = i/steps when --l is absent")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("run", parents=[common], help="simulate the policy on an index file")
    p.add_argument("--index", required=True, help="quality index JSON")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("adversary", parents=[common], help="play a policy against the worst-case adversary")
    p.add_argument("--policy", default="builtin", help='"builtin" or a policy script JSON path')
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("regions", parents=[common], help="sample the two-period stopping boundaries")
    p.add_argument("--samples", type=int, default=101)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("verify", parents=[common], help="compare the policy with the brute-force oracle")
    p.add_argument("--M", type=int, default=64)
    p.add_argument("--Kz", type=int, default=64)
    p.add_argument("--D", type=int, default=None, help="depth bound (default: N(c, 1))")
    p.add_argument("--max-states", type=int, default=5_000_000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", parents=[common], help="run the policy on random landscapes")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in (("c", None), ("seed", 0), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except PropertyViolation as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NonTerminating as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
