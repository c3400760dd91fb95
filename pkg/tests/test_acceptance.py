"""Exit criteria, one test each. Every test records a PASS/FAIL line that
the terminal summary prints after the run."""

import time

import numpy as np
import pytest

import conftest
from paretoagg import (
    AggregationRule,
    DecisionProblem,
    Expert,
    RuleTable,
    Verdict,
    admissible_profiles,
    bayes_rule,
    check_consistency,
    recover_weights,
    supporting_prior,
)
from paretoagg.aggregation import check_coordinatewise_pareto
from paretoagg.applications import (
    KernelSpec,
    TimedRuleTable,
    aggregate_timed,
    nw_smooth,
    recover_discount,
    time_shift,
)
from paretoagg.decision import pure_rules, risk_matrix
from paretoagg.errors import ValidationError
from paretoagg.estimators import dominance_report

from oracles import NW_GAUSS_EXAMPLE, four_expert_fill, js_risk_at_zero, mean_risk
from test_aggregation import FOUR, conflicting_triangle, four_expert_table
from test_cli import commands, files, run  # noqa: F401  (fixture re-export)

pytestmark = pytest.mark.acceptance


def record(key, ok, detail):
    line = f"{key} {'PASS' if ok else 'FAIL'}: {detail}"
    conftest.ACCEPTANCE_LINES[key] = line
    print(line)
    assert ok, line


def random_problems(count, seed):
    r = np.random.default_rng(seed)
    for _ in range(count):
        m, n, k = (int(v) for v in r.integers(1, [5, 4, 4]))
        yield DecisionProblem.random(r, m, n, k)


def random_pool(r):
    m = int(r.integers(3, 5))
    n = int(r.integers(2, 6))
    P = 0.05 + (1 - 0.05 * m) * r.dirichlet(np.ones(m), size=n)
    w = r.uniform(0.2, 5.0, size=n)
    ids = [f"e{i}" for i in range(n)]
    return [Expert(i, p) for i, p in zip(ids, P)], AggregationRule(dict(zip(ids, w))), w


def off_segment(table, key, r, tv=1e-3):
    """Move g(key) by total variation ``tv`` orthogonally to one split's segment."""
    a = table[key[:1]]
    b = table[key[1:]]
    u = a - b
    basis = np.eye(a.size) - 1.0 / a.size  # sum-zero directions
    v = basis @ r.normal(size=a.size)
    v -= (v @ u) / (u @ u) * u
    v -= v.mean()
    v *= 2 * tv / np.abs(v).sum()
    entries = dict(table.entries)
    entries[key] = table[key] + v
    return RuleTable(table.singletons, entries)


def test_ac1_complete_class():
    t0 = time.perf_counter()
    n_idx, worst, failures = 0, 0.0, 0
    problems = list(random_problems(200, 101))
    for problem in problems:
        S = risk_matrix(problem)
        for i in admissible_profiles(S):
            cert = supporting_prior(S, i)
            n_idx += 1
            worst = max(worst, cert.gap)
            failures += cert.gap > 1e-9
    dt = time.perf_counter() - t0
    record("AC1", failures == 0 and dt < 30,
           f"{len(problems)} problems, {n_idx} admissible indices certified, "
           f"max gap {worst:.2e} (<= 1e-9), {dt:.1f}s (< 30s)")


def test_ac2_bayes_admissible():
    r = np.random.default_rng(202)
    bad = 0
    problems = list(random_problems(200, 203))
    for problem in problems:
        prior = 0.05 + (1 - 0.05 * problem.m) * r.dirichlet(np.ones(problem.m))
        rule, _ = bayes_rule(problem, prior)
        S = risk_matrix(problem)
        index = list(pure_rules(problem)).index(rule)
        bad += index not in admissible_profiles(S, tol=1e-9)
    record("AC2", bad == 0,
           f"{len(problems)} problems with priors min entry >= 0.05, "
           f"{bad} Bayes rules inadmissible (tol 1e-9)")


def consistency_corpus(count, seed):
    r = np.random.default_rng(seed)
    for _ in range(count):
        experts, rule, w = random_pool(r)
        yield r, experts, rule, w, RuleTable.from_rule(experts, rule)


def test_ac3_consistency_iff_averaging():
    t0 = time.perf_counter()
    pools = clean_fail = perturbed = missed = 0
    for r, _, _, _, table in consistency_corpus(100, 303):
        pools += 1
        rep = check_consistency(table, mode="strict")
        clean_fail += rep.verdict != Verdict.CONSISTENT or bool(rep.violations)
        for key in table.keys():
            if len(key) < 2:
                continue
            bad = off_segment(table, key, r)
            perturbed += 1
            missed += check_consistency(bad, mode="strict").verdict != Verdict.INCONSISTENT
    dt = time.perf_counter() - t0
    record("AC3", clean_fail == 0 and missed == 0 and dt < 60,
           f"{pools} full-subset tables, {clean_fail} with violations; "
           f"{perturbed} single-entry 1e-3 TV perturbations, {missed} undetected; {dt:.1f}s (< 60s)")


def test_ac4_weight_recovery():
    worst = 0.0
    pools = 0
    r = np.random.default_rng(404)
    for _ in range(100):
        experts, rule, w = random_pool(r)
        rec, _ = recover_weights(RuleTable.from_rule(experts, rule))
        ratio = np.array([rec[e.id] for e in experts]) / w
        worst = max(worst, float(np.max(np.abs(ratio / ratio[0] - 1))))
        pools += 1
    table = four_expert_table()
    rw, _ = recover_weights(table)
    rule = AggregationRule(rw)
    ex = {i: Expert(i, p) for i, p in FOUR.items()}
    from paretoagg import aggregate
    got_xyz = aggregate([ex[i] for i in "xyz"], rule)
    got_xyw = aggregate([ex[i] for i in "xyw"], rule)
    o_xyz, _, o_xyw = four_expert_fill(FOUR["x"], FOUR["y"], FOUR["z"], FOUR["w"],
                                       table[("x", "y")], table[("y", "z")], table[("z", "w")])
    geo = max(np.max(np.abs(got_xyz - o_xyz)), np.max(np.abs(got_xyw - o_xyw)))
    record("AC4", worst <= 1e-6 and geo <= 1e-9,
           f"{pools} pools, max weight-ratio error {worst:.2e} (<= 1e-6); "
           f"four-expert g(x,y,z), g(x,y,w) vs line-intersection oracle {geo:.2e} (<= 1e-9)")


def test_ac5_duality_agreement():
    instances = disagree = 0
    corpus = []
    for r, experts, rule, _, table in consistency_corpus(100, 505):
        corpus.append(table)
        for key in table.keys():
            if len(key) >= 2:
                corpus.append(off_segment(table, key, r))
        # endpoint and off-simplex-direction variants
        key = table.keys()[-1]
        endpoint = dict(table.entries)
        endpoint[key] = table[key[:1]]
        corpus.append(RuleTable(table.singletons, endpoint))
    corpus.append(conflicting_triangle())
    corpus.append(four_expert_table())
    for table in corpus:
        for mode in ("weak", "strict"):
            rep = check_consistency(table, mode=mode)
            instances += 1
            disagree += not rep.agree
    record("AC5", disagree == 0,
           f"{instances} (table, mode) instances, {disagree} segment/implication disagreements")


def test_ac6_stationarity():
    r = np.random.default_rng(606)
    worst = 0.0
    for _ in range(50):
        n = int(r.integers(1, 6))
        experts = [Expert(f"e{i}", r.dirichlet(np.ones(3)), timestamp=float(r.uniform(0, 10)))
                   for i in range(n)]
        w = {e.id: float(r.uniform(0.2, 5)) for e in experts}
        for q in (0.5, 1.0, 2.0, 0.9):
            base = aggregate_timed(experts, q, w)
            for c in (0.1, 1.0, 7.3, 100.0):
                worst = max(worst, float(np.max(np.abs(aggregate_timed(time_shift(experts, c), q, w) - base))))
    q_err = 0.0
    for q in (0.5, 1.0, 2.0):
        experts = [Expert(i, p, timestamp=t) for i, p in (("a", [0.7, 0.2, 0.1]), ("b", [0.1, 0.3, 0.6]),
                                                          ("c", [0.3, 0.6, 0.1]))
                   for t in (0, 1, 2)]
        w = {"a": 1.0, "b": 0.4, "c": 2.2}
        table = TimedRuleTable.from_rule(experts, q, w, max_size=2)
        q_hat, _, _ = recover_discount(table)
        q_err = max(q_err, abs(q_hat - q))
    record("AC6", worst <= 1e-12 and q_err <= 1e-9,
           f"shift invariance max error {worst:.2e} (<= 1e-12) for c in {{0.1,1,7.3,100}}; "
           f"recovered q error {q_err:.2e} (<= 1e-9) for q in {{0.5,1,2}}")


def test_ac7_kernel_smoother():
    r = np.random.default_rng(707)
    shapes = ["gaussian", "epanechnikov", "tricube", "boxcar"]
    const_err, out_of_range, evaluated = 0.0, 0, 0
    for i in range(1000):
        k = int(r.integers(1, 4))
        n = int(r.integers(1, 20))
        X = r.normal(size=(n, k))
        x0 = X[int(r.integers(n))] + r.uniform(-0.1, 0.1, size=k)
        kern = KernelSpec(shapes[i % 4], float(r.uniform(0.5, 3)))
        c = float(r.normal() * 10)
        const_err = max(const_err, abs(nw_smooth([(x, c) for x in X], x0, kern) - c))
        y = r.normal(size=n)
        v = nw_smooth(list(zip(X, y)), x0, kern)
        evaluated += 1
        out_of_range += not (y.min() - 1e-12 <= v <= y.max() + 1e-12)
    ex = nw_smooth([((0.0,), 0.0), ((1.0,), 1.0)], [0.0], KernelSpec("gaussian", 1.0))
    ex_err = abs(ex - NW_GAUSS_EXAMPLE)
    record("AC7", const_err <= 1e-12 and out_of_range == 0 and evaluated == 1000 and ex_err <= 1e-9,
           f"constant reproduction error {const_err:.1e} (<= 1e-12); "
           f"{out_of_range}/{evaluated} outside the sample range; gaussian example error {ex_err:.1e} (<= 1e-9)")


def test_ac8_james_stein():
    t0 = time.perf_counter()
    mean, js = dominance_report(5, [np.zeros(5)], 1_000_000, 42)
    dt = time.perf_counter() - t0
    ok_mean = abs(mean.risk - mean_risk(5)) <= 4 * mean.std_error
    ok_js = abs(js.risk - js_risk_at_zero(5)) <= 4 * js.std_error
    try:
        dominance_report(2, [np.zeros(2)], 10, 0)
        d2_errors = False
    except ValidationError:
        d2_errors = True
    record("AC8", ok_mean and ok_js and js.dominant_flag and d2_errors and dt < 60,
           f"d=5 mean risk {mean.risk:.4f} ± {mean.std_error:.4f} (oracle 5), "
           f"JS risk {js.risk:.4f} ± {js.std_error:.4f} (oracle 2), flag {int(js.dominant_flag)}, "
           f"d=2 errors: {d2_errors}, {dt:.1f}s (< 60s)")


def test_ac9_determinism(files):  # noqa: F811
    cmds = commands(files)
    mismatched = []
    for argv in cmds:
        code1, out1, _ = run(argv)
        code2, out2, _ = run(argv)
        if code1 != 0 or out1 != out2:
            mismatched.append(argv[0])
    record("AC9", not mismatched,
           f"{len(cmds)} CLI commands re-run, byte mismatches: {mismatched or 'none'}")
