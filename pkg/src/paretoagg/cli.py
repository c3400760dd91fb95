"""Batch command-line front-end.

Every command writes JSON (or CSV for ``js-demo``) to ``--out`` or stdout.
JSON output is ``{"manifest": {...}, "result": ...}``; CSV output starts
with a ``# manifest: {...}`` comment line. The manifest records the command,
input paths, seed, tolerance override, output path and tool version, and
contains nothing run-specific, so identical invocations produce identical
bytes.

Exit status: 0 on success, 1 on validation errors, 2 when a requested
certificate or parameter does not exist (infeasible / unidentifiable).
Errors are reported on stderr as a single ``ERR:<code>:<message>`` line.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from . import io as fio
from .admissibility import admissible_profiles, supporting_prior
from .aggregation import aggregate, aggregate_ordered, check_consistency, recover_weights, select_model
from .applications import KernelSpec, aggregate_timed, nw_smooth, recover_discount, vote
from .decision import enumerate_risk_set, risk_matrix, risk_profile
from .errors import ParetoAggError, ValidationError
from .estimators import GENERATOR_ID, dominance_report, report_csv


class _UsageError(ValidationError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _manifest(args, inputs: dict) -> dict:
    m = {
        "tool": "paretoagg",
        "version": __version__,
        "command": args.command,
        "inputs": {k: v for k, v in inputs.items() if v is not None},
        "seed": getattr(args, "seed", None),
        "tol": getattr(args, "tol", None),
        "out": args.out or "-",
    }
    return m


def _emit_json(args, inputs, result, stream):
    text = fio.dumps({"manifest": _manifest(args, inputs), "result": result}) + "\n"
    fio.write_text(text, args.out, stream)


def _tol(args, default):
    return default if args.tol is None else args.tol


def cmd_risk(args, stream):
    problem = fio.load_problem(args.problem)
    rule = fio.rule_from_json(fio.read_json(args.rule))
    profile = risk_profile(problem, rule)
    _emit_json(args, {"problem": args.problem, "rule": args.rule},
               {"states": list(problem.states), "profile": profile.tolist()}, stream)


def cmd_admissible(args, stream):
    problem = fio.load_problem(args.problem)
    risk_set = enumerate_risk_set(problem)
    S = np.array([s for _, s in risk_set])
    idx = admissible_profiles(S, tol=_tol(args, 1e-9))
    result = {
        "count": len(risk_set),
        "indices": idx,
        "rules": [list(risk_set[i][0].assignment) for i in idx],
        "profiles": [S[i].tolist() for i in idx],
    }
    _emit_json(args, {"problem": args.problem}, result, stream)


def cmd_support(args, stream):
    problem = fio.load_problem(args.problem)
    S = risk_matrix(problem)
    cert = supporting_prior(S, args.index, tol=_tol(args, 1e-9))
    result = cert.to_dict()
    result["profile"] = S[args.index].tolist()
    _emit_json(args, {"problem": args.problem}, result, stream)


def _cmd_aggregate(args, stream, ordered):
    experts, rule = fio.load_pool(args.pool)
    prior = aggregate_ordered(experts, rule) if ordered else aggregate(experts, rule)
    _emit_json(args, {"pool": args.pool}, prior.tolist(), stream)


def cmd_aggregate(args, stream):
    _cmd_aggregate(args, stream, args.ordered)


def cmd_aggregate_ordered(args, stream):
    _cmd_aggregate(args, stream, True)


def cmd_select(args, stream):
    problem = fio.load_problem(args.problem)
    experts, rule = fio.load_pool(args.pool)
    prior, pure, value = select_model(problem, experts, rule, ordered=args.ordered)
    result = {
        "prior": prior.tolist(),
        "rule": list(pure.assignment),
        "actions": {problem.outcomes[x]: problem.actions[a] for x, a in enumerate(pure.assignment)},
        "value": value,
    }
    _emit_json(args, {"problem": args.problem, "pool": args.pool}, result, stream)


def cmd_check_consistency(args, stream):
    table = fio.load_table(args.table)
    report = check_consistency(table, mode=args.mode, tol=_tol(args, 1e-9))
    _emit_json(args, {"table": args.table}, report.to_dict(), stream)


def cmd_recover_weights(args, stream):
    table = fio.load_table(args.table)
    weights, report = recover_weights(table, tol=_tol(args, 1e-9))
    _emit_json(args, {"table": args.table}, {"weights": weights, "report": report.to_dict()},
               stream)


def cmd_smooth(args, stream):
    samples = fio.load_samples(args.samples)
    x0 = fio.parse_vector(args.query)
    value = nw_smooth(samples, x0, KernelSpec(args.kernel, args.bandwidth))
    _emit_json(args, {"samples": args.samples}, {"query": x0.tolist(), "value": value}, stream)


def cmd_timed(args, stream):
    data = fio.read_json(args.pool)
    experts, rule = fio.pool_from_json(data, require_unique=False)
    q = args.q if args.q is not None else data.get("q") if isinstance(data, dict) else None
    if q is None:
        raise ValidationError("discount factor missing: pass --q or set \"q\" in the pool")
    prior = aggregate_timed(experts, q, rule)
    _emit_json(args, {"pool": args.pool}, prior.tolist(), stream)


def cmd_recover_discount(args, stream):
    table = fio.load_timed_table(args.table)
    q, weights, report = recover_discount(table, tol=_tol(args, 1e-9))
    _emit_json(args, {"table": args.table},
               {"q": q, "weights": weights, "report": report.to_dict()}, stream)


def cmd_vote(args, stream):
    ballots, weights = fio.load_ballots(args.ballots)
    _emit_json(args, {"ballots": args.ballots}, vote(ballots, weights).tolist(), stream)


def cmd_js_demo(args, stream):
    if args.theta:
        grid = [fio.parse_vector(t) for t in args.theta]
    else:
        grid = [np.zeros(args.d)]
    rows = dominance_report(args.d, grid, args.samples, args.seed)
    manifest = _manifest(args, {})
    manifest["generator"] = GENERATOR_ID
    text = report_csv(rows, header=[f"manifest: {fio.dumps(manifest)}"])
    fio.write_text(text, args.out, stream)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="paretoagg", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"paretoagg {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        return sp

    sp = add("risk", cmd_risk, "risk profile of a rule")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--rule", required=True)

    sp = add("admissible", cmd_admissible, "admissible pure rules of a problem")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--tol", type=float)

    sp = add("support", cmd_support, "supporting prior of an admissible pure rule")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--index", type=int, required=True)
    sp.add_argument("--tol", type=float)

    sp = add("aggregate", cmd_aggregate, "weighted-average prior of a pool")
    sp.add_argument("--pool", required=True)
    sp.add_argument("--ordered", action="store_true")

    sp = add("aggregate-ordered", cmd_aggregate_ordered, "top-ranked weighted-average prior")
    sp.add_argument("--pool", required=True)

    sp = add("select", cmd_select, "aggregate a pool and pick the Bayes rule")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--pool", required=True)
    sp.add_argument("--ordered", action="store_true")

    sp = add("check-consistency", cmd_check_consistency, "consistency report of a rule table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--mode", choices=("weak", "strict"), default="strict")
    sp.add_argument("--tol", type=float)

    sp = add("recover-weights", cmd_recover_weights, "expert weights from a rule table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--tol", type=float)

    sp = add("smooth", cmd_smooth, "Nadaraya-Watson estimate at a query point")
    sp.add_argument("--samples", required=True)
    sp.add_argument("--query", required=True, help="comma-separated coordinates")
    sp.add_argument("--kernel", default="gaussian")
    sp.add_argument("--bandwidth", type=float, default=1.0)

    sp = add("timed", cmd_timed, "discounted prior of a timestamped pool")
    sp.add_argument("--pool", required=True)
    sp.add_argument("--q", type=float)

    sp = add("recover-discount", cmd_recover_discount, "discount factor from a timed table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--tol", type=float)

    sp = add("vote", cmd_vote, "weighted social prior of ballots")
    sp.add_argument("--ballots", required=True)

    sp = add("js-demo", cmd_js_demo, "James-Stein vs sample mean risk report (CSV)")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--theta", action="append", help="grid point, comma-separated; repeatable")
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.func(args, stdout)
    except ParetoAggError as exc:
        msg = " ".join(str(exc).split())
        stderr.write(f"ERR:{exc.code}:{msg}\n")
        return exc.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())
