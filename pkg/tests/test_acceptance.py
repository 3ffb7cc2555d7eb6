"""Acceptance criteria, one test each; results are listed in the terminal summary."""
import io
import json
import random
import time
from itertools import combinations, product
from pathlib import Path

import numpy as np
import pytest

from posetfix import (
    Grid,
    KernelSpec,
    MapFamily,
    UrysohnProblem,
    check_commuting,
    check_growth_bound,
    check_kernel_monotone,
    common_fixed_point,
    enumerate_monotone_maps,
    enumerate_posets,
    fixed_point_set,
    is_directed,
    linear_oracle,
    maximal_elements,
    orbit_fixed_point,
    sign_condition,
    solve_branch,
    supremum,
    supremum_via_lemma1,
)
from posetfix.cli import run
from posetfix.urysohn import SHAPES

from test_poset import count_partial_orders_bruteforce

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def nonempty_subsets(n):
    for r in range(1, n + 1):
        yield from combinations(range(n), r)


def test_criterion_1_lemma1_exhaustive(record):
    start = time.perf_counter()
    counts = [sum(1 for _ in enumerate_posets(n)) for n in range(1, 6)]
    oracle = [count_partial_orders_bruteforce(n) for n in range(1, 5)]
    checked, failures = 0, []
    for n in range(1, 6):
        for p in enumerate_posets(n):
            for j in nonempty_subsets(n):
                if not is_directed(p, j):
                    continue
                checked += 1
                s = supremum(p, j)
                if s is None or s not in j or supremum_via_lemma1(p, j) != s:
                    failures.append((p.covers(), j))
    elapsed = time.perf_counter() - start
    ok = counts[:4] == oracle == [1, 3, 19, 219] and not failures and elapsed < 300
    record(1, f"posets {counts}, brute-force {oracle}, {checked} directed sets, "
              f"{len(failures)} failures, {elapsed:.1f}s", ok)


def test_criterion_2_orbit_exhaustive(record):
    cases, failures = 0, []
    for n in range(1, 5):
        for p in enumerate_posets(n):
            for t in enumerate_monotone_maps(p):
                fix = fixed_point_set(p, t)
                for c in range(n):
                    if not p.leq(c, t(c)):
                        continue
                    cases += 1
                    rep = orbit_fixed_point(p, t, c)
                    above = [q for q in fix if p.leq(c, q)]
                    least = [q for q in above if all(p.leq(q, r) for r in above)]
                    if rep.steps > n or least != [rep.result] or not maximal_elements(p, fix):
                        failures.append((p.covers(), t.images, c))
    record(2, f"{cases} (poset, map, witness) cases, {len(failures)} failures", cases > 0 and not failures)


def _family_ok(p, fam, c):
    rep = common_fixed_point(fam, c)
    brute = {x for x in range(p.n) if all(t(x) == x for t in fam)}
    return rep.result in brute and bool(maximal_elements(p, brute))


def test_criterion_3_commuting_families(record):
    exhaustive, failures = 0, []
    for n in range(1, 4):
        for p in enumerate_posets(n):
            maps = list(enumerate_monotone_maps(p))
            for t1, t2 in product(maps, repeat=2):
                fam = MapFamily([t1, t2])
                if not check_commuting(fam):
                    continue
                for c in range(n):
                    if p.leq(c, t1(c)) and p.leq(c, t2(c)):
                        exhaustive += 1
                        if not _family_ok(p, fam, c):
                            failures.append((p.covers(), t1.images, t2.images, c))

    rng = random.Random(20170501)
    pool = [(p, list(enumerate_monotone_maps(p))) for p in enumerate_posets(4)]
    sampled = 0
    while sampled < 10_000:
        p, maps = rng.choice(pool)
        t1, t2 = rng.choice(maps), rng.choice(maps)
        fam = MapFamily([t1, t2])
        witnesses = [c for c in range(4) if p.leq(c, t1(c)) and p.leq(c, t2(c))]
        if not witnesses or not check_commuting(fam):
            continue
        sampled += 1
        c = rng.choice(witnesses)
        if not _family_ok(p, fam, c):
            failures.append((p.covers(), t1.images, t2.images, c))
    record(3, f"{exhaustive} exhaustive cases (n <= 3), {sampled} sampled pairs (n = 4), "
              f"{len(failures)} failures", not failures)


def test_criterion_4_linear_oracle(record):
    start = time.perf_counter()
    grid = Grid.uniform(0.0, 1.0, 64)
    errs = {}
    for shape in SHAPES:
        prob = UrysohnProblem(grid, 1.0, KernelSpec("linear", {"lam": 0.4, "shape": shape}))
        x = solve_branch(prob, "nonnegative").solution
        ref = linear_oracle(prob)
        errs[shape] = grid.norm(x - ref) / grid.norm(ref)
    const = solve_branch(UrysohnProblem(grid, 1.0, KernelSpec("linear", {"lam": 0.4})), "nonnegative")
    abs_err = float(np.max(np.abs(const.solution - 5 / 3)))
    elapsed = time.perf_counter() - start
    ok = max(errs.values()) <= 1e-8 and abs_err <= 1e-9 and elapsed < 1.0
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    record(4, f"relative errors [{detail}], |x - 5/3| = {abs_err:.1e}, {elapsed:.2f}s", ok)


def test_criterion_5_monotone_trajectory(record):
    grid = Grid.uniform(0.0, 1.0, 64)
    runs = [(UrysohnProblem(grid, 1.0, KernelSpec("linear", {"lam": 0.4, "shape": s})), "nonnegative") for s in SHAPES]
    runs += [
        (UrysohnProblem(grid, 1.0, KernelSpec("saturating", {"a": 0.3, "b": 1.0}, h=0.3, M=0.0)), "nonnegative"),
        (UrysohnProblem(grid, np.exp(grid.nodes), KernelSpec("affine_positive", {"a": 0.3, "c": 0.05, "shape": "exp_abs"})), "nonnegative"),
        (UrysohnProblem(grid, -1.0, KernelSpec("linear", {"lam": 0.4})), "nonpositive"),
    ]
    pairs, bad = 0, 0
    for prob, branch in runs:
        rep = solve_branch(prob, branch, keep_iterates=True)
        for a, b in zip(rep.iterates, rep.iterates[1:]):
            pairs += 1
            ok = np.all(b >= a) if branch == "nonnegative" else np.all(b <= a)
            bad += not ok
    neg = solve_branch(UrysohnProblem(grid, -1.0, KernelSpec("linear", {"lam": 0.4})), "nonpositive")
    neg_ok = float(np.max(np.abs(neg.solution + 5 / 3))) <= 1e-9 and np.all(neg.solution <= 0)
    record(5, f"{len(runs)} runs, {pairs} iterate pairs, {bad} violations, nonpositive case -> -5/3: {neg_ok}",
           bad == 0 and neg_ok)


def _cli_check(tmp_path, name, kernel, g):
    cfg = json.loads((DATA / "linear.json").read_text())
    cfg["kernel"] = kernel
    cfg["g"] = {"kind": "constant", "value": g}
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    out = io.StringIO()
    code = run(["urysohn-solve", "--config", str(path)], stdout=out, stderr=io.StringIO())
    return code, json.loads(out.getvalue())


def test_criterion_6_hypothesis_gatekeeping(record, tmp_path):
    grid = Grid.uniform(0.0, 1.0, 64)
    lib_ok = (
        not check_kernel_monotone(UrysohnProblem(grid, 1.0, KernelSpec("linear", {"lam": -1.0}, M=0.4))).passed
        and not check_growth_bound(UrysohnProblem(grid, 1.0, KernelSpec("quadratic", {"a": 1.0}, h=0.0, M=0.4))).passed
        and not sign_condition(UrysohnProblem(grid, -1.0, KernelSpec("linear", {"lam": 0.4})))["nonnegative"]
    )
    cases = [
        ("neg.json", {"name": "linear", "params": {"lam": -1.0}, "M": 0.4}, 1.0, "F monotone in its third coordinate fails"),
        ("sq.json", {"name": "quadratic", "params": {"a": 1.0}, "h": 0.0, "M": 0.4}, 1.0, "|F(t,s,x)| ≤ h(t,s) + M|x| fails"),
        ("sign.json", {"name": "linear", "params": {"lam": 0.4}}, -1.0, "J(0) ≥ 0 fails"),
    ]
    results = []
    for name, kernel, g, condition in cases:
        code, doc = _cli_check(tmp_path, name, kernel, g)
        results.append(code == 1 and condition in doc["failed"])
    record(6, f"library checks reject all three: {lib_ok}; CLI exit 1 with named condition: {results}",
           lib_ok and all(results))


def test_criterion_7_grid_refinement(record):
    lam = 0.4
    errors = []
    for m in (32, 64, 128):
        grid = Grid.uniform(0.0, 1.0, m)
        prob = UrysohnProblem(grid, np.exp(grid.nodes), KernelSpec("linear", {"lam": lam}))
        x = solve_branch(prob, "nonnegative").solution
        exact = np.exp(grid.nodes) + lam * (np.e - 1) / (1 - lam)
        errors.append(float(np.max(np.abs(x - exact))))
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    record(7, f"errors {['%.2e' % e for e in errors]}, ratios {['%.2f' % r for r in ratios]}",
           min(ratios) >= 3)
