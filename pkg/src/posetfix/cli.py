"""Command line front end.

Every command prints one JSON document on stdout and a one-line summary on
stderr. Exit status: 0 success, 1 a hypothesis or precondition failed (the
report names it), 2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import fixpoint, poset, urysohn
from .errors import DomainError, InvariantError, PosetError


class InputError(Exception):
    pass


def dumps(obj) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(obj, (set, frozenset)):
        return dumps(sorted(obj))
    return json.dumps(obj, ensure_ascii=False)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_poset(path):
    return poset.poset_from_dict(_read_json(path))


def _load_map(path, p):
    return fixpoint.map_from_dict(_read_json(path), p, base_dir=Path(path).parent)


def cmd_poset_check(args):
    p = _load_poset(args.poset)
    elems = range(p.n)
    report = {
        "n": p.n,
        "relations": int(p.matrix.sum()),
        "covers": [list(c) for c in p.covers()],
        "minimal": sorted(x for x in elems if all(not p.leq(y, x) or y == x for y in elems)),
        "maximal": sorted(poset.maximal_elements(p, elems)),
    }
    return report, f"poset with {p.n} elements is a valid partial order"


def cmd_poset_sup(args):
    p = _load_poset(args.poset)
    j = p.subset(args.subset or [])
    directed = poset.is_directed(p, j)
    report = {
        "subset": sorted(j),
        "directed": directed,
        "upper_bounds": sorted(poset.upper_bounds(p, j)),
        "supremum": poset.supremum(p, j),
        "maximal": sorted(poset.maximal_elements(p, j)),
    }
    if directed and j:
        report["supremum_via_intervals"] = poset.supremum_via_lemma1(p, j)
    return report, f"supremum of {sorted(j)}: {report['supremum']}"


def cmd_fix_orbit(args):
    p = _load_poset(args.poset) if args.poset else None
    t = _load_map(args.map, p)
    rep = fixpoint.orbit_fixed_point(t.poset, t, args.start)
    return rep.to_dict(), f"orbit from {args.start} stabilizes at {rep.result}"


def cmd_fix_family(args):
    p = _load_poset(args.poset) if args.poset else None
    maps = [_load_map(f, p) for f in args.family]
    fam = fixpoint.MapFamily(maps)
    rep = fixpoint.common_fixed_point(fam, args.start)
    out = rep.to_dict()
    out["closure"] = sorted(rep.trace)
    return out, f"common fixed point {rep.result}"


def cmd_verify(args):
    if not 1 <= args.n <= 4:
        raise InputError("--n must be between 1 and 4")
    rep = fixpoint.verify_theorems(args.n, pair_samples=args.samples, seed=args.seed)
    if rep.failures:
        raise _Failed(rep.to_dict(), f"{len(rep.failures)} failures")
    return rep.to_dict(), f"{rep.cases} cases over {rep.posets} posets, no failures"


def _load_problem(args):
    cfg = _read_json(args.config)
    try:
        prob, branch = urysohn.problem_from_dict(cfg)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad config: {exc!r}") from exc
    if args.tol is not None:
        prob.tol = args.tol
    if args.max_iter is not None:
        prob.max_iter = args.max_iter
    return prob, branch


def _gate(prob, branch):
    checks = urysohn.check_hypotheses(prob)
    signs = urysohn.sign_condition(prob)
    report = {
        "hypothesis_checks": [c.to_dict() for c in checks],
        "sign_condition": signs,
        "branch": branch,
    }
    failed = [c.condition for c in checks if not c.passed]
    if not signs[branch]:
        failed.append(urysohn.CONDITIONS["sign_" + branch])
    if failed:
        report = {"condition": failed[0], "failed": failed, **report}
        raise _Failed(report, "; ".join(failed))
    return report


def cmd_urysohn_check(args):
    prob, branch = _load_problem(args)
    report = _gate(prob, branch)
    report["ball_radius"] = urysohn.ball_radius(prob)
    return report, "all hypotheses hold"


def cmd_urysohn_solve(args):
    prob, branch = _load_problem(args)
    _gate(prob, branch)
    rep = urysohn.solve_branch(prob, branch)
    out = rep.to_dict()
    out["nodes"] = [float(t) for t in prob.grid.nodes]
    if args.csv:
        out["csv"] = [str(p) for p in urysohn.write_csv(rep, prob.grid, args.csv)]
    return out, f"{branch} solution after {rep.iterations} iterations, residual {rep.residual:.3e}"


class _Failed(Exception):
    def __init__(self, report, summary):
        self.report = report
        self.summary = summary


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="posetfix", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("poset-check", help="validate a poset file")
    s.add_argument("--poset", required=True)
    s.set_defaults(func=cmd_poset_check)

    s = sub.add_parser("poset-sup", help="supremum of a subset")
    s.add_argument("--poset", required=True)
    s.add_argument("--subset", type=int, nargs="*", default=[])
    s.set_defaults(func=cmd_poset_sup)

    s = sub.add_parser("fix-orbit", help="orbit iteration of one monotone map")
    s.add_argument("--poset")
    s.add_argument("--map", required=True)
    s.add_argument("--start", type=int, required=True)
    s.set_defaults(func=cmd_fix_orbit)

    s = sub.add_parser("fix-family", help="common fixed point of a commuting family")
    s.add_argument("--poset")
    s.add_argument("--family", nargs="+", required=True)
    s.add_argument("--start", type=int, required=True)
    s.set_defaults(func=cmd_fix_family)

    s = sub.add_parser("verify", help="exhaustive fixed point theorem check")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--samples", type=int, default=0, help="random commuting pairs at n=4")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    for name, func in (("urysohn-check", cmd_urysohn_check), ("urysohn-solve", cmd_urysohn_solve)):
        s = sub.add_parser(name)
        s.add_argument("--config", required=True)
        s.add_argument("--tol", type=float)
        s.add_argument("--max-iter", type=int)
        if name == "urysohn-solve":
            s.add_argument("--csv", help="prefix for CSV dumps of solution and trace")
        s.set_defaults(func=func)
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, summary = args.func(args)
    except _Failed as exc:
        print(dumps({"ok": False, **exc.report}), file=stdout)
        print(f"failed: {exc.summary}", file=stderr)
        return 1
    except DomainError as exc:
        print(dumps({"ok": False, "condition": exc.condition, "detail": exc.detail}), file=stdout)
        print(f"failed: {exc}", file=stderr)
        return 1
    except InvariantError as exc:
        print(dumps({"ok": False, "condition": "internal invariant", "detail": str(exc)}), file=stdout)
        print(f"failed: {exc}", file=stderr)
        return 1
    except (InputError, PosetError) as exc:
        print(dumps({"ok": False, "error": str(exc)}), file=stdout)
        print(f"malformed input: {exc}", file=stderr)
        return 2
    print(dumps({"ok": True, **report}), file=stdout)
    print(summary, file=stderr)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
