"""End-to-end acceptance checks; each test prints one verdict line."""

import time

import numpy as np
import pytest

import planarcc.driver as driver
from planarcc.bounds import (MU_GRID, brute_force_optimal, cyc_membership_check, is_multicut,
                             lower_bound, round_upper_bound)
from planarcc.driver import SolverConfig, bench, solve, synthetic_suite
from planarcc.instance import random_planar_graph
from planarcc.master import PathRow
from planarcc.matching import WeightedMatchingProblem, min_weight_perfect_matching
from planarcc.oracle import brute_force_two_colorable_min, planar_two_colorable_min
from planarcc.separation import shortest_violated_path, widest_path

from conftest import random_instance, record_criterion, simple_cycles, simple_paths

pytestmark = pytest.mark.acceptance


def _verdict(number, failures, detail, elapsed=None, limit=None):
    ok = not failures and (limit is None or elapsed < limit)
    timing = "" if elapsed is None else f" in {elapsed:.1f}s" + ("" if limit is None else f" (limit {limit:g}s)")
    record_criterion(number, ok, detail + timing + ("" if not failures else f"; first failure: {failures[0]}"))
    assert not failures, failures[:5]
    if limit is not None:
        assert elapsed < limit


def test_criterion_01_oracle_exactness():
    rng = np.random.default_rng(101)
    failures = []
    start = time.perf_counter()
    for k in range(200):
        n = int(rng.integers(2, 17))
        g = random_planar_graph(rng, n, float(rng.uniform(0, 1)))
        integer = k % 2 == 0
        w = rng.integers(-5, 6, g.edge_count).astype(float) if integer else rng.uniform(-5, 5, g.edge_count)
        got = planar_two_colorable_min(g, w)[1]
        ref = brute_force_two_colorable_min(g, w)[1]
        if (integer and got != ref) or (not integer and abs(got - ref) > 1e-9):
            failures.append((k, n, got, ref))
    _verdict(1, failures, "oracle equals enumeration on 200 graphs (|V| <= 16)",
             time.perf_counter() - start, 60)


def _enumerate_perfect(n, cost):
    best = None

    def rec(free, acc):
        nonlocal best
        if not free:
            best = acc if best is None else min(best, acc)
            return
        u, rest = free[0], free[1:]
        for i, v in enumerate(rest):
            c = cost.get((u, v))
            if c is not None:
                rec(rest[:i] + rest[i + 1:], acc + c)

    rec(list(range(n)), 0)
    return best


def test_criterion_02_matching_exactness():
    rng = np.random.default_rng(202)
    failures, done = [], 0
    start = time.perf_counter()
    while done < 100:
        n = 2 * int(rng.integers(1, 7))
        edges, cost = [], {}
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.5:
                    c = int(rng.integers(-20, 21))
                    edges.append((u, v, float(c)))
                    cost[u, v] = c
        ref = _enumerate_perfect(n, cost)
        if ref is None:
            continue
        done += 1
        _, got = min_weight_perfect_matching(WeightedMatchingProblem(n, tuple(edges)))
        if got != ref:
            failures.append((n, got, ref))
    _verdict(2, failures, "matching equals enumeration on 100 graphs (|V| <= 12)",
             time.perf_counter() - start, 30)


@pytest.fixture(scope="module")
def sandwich_runs():
    """100 random small instances solved by both variants, every master state kept."""
    rng = np.random.default_rng(303)
    runs = []
    real_lp = driver.solve_restricted_lp
    start = time.perf_counter()
    with pytest.MonkeyPatch.context() as mp:
        for k in range(100):
            inst = random_instance(rng, max_nodes=10, max_pairs=3)
            opt = brute_force_optimal(inst)[1]
            for variant in driver.VARIANTS:
                states = []

                def capture(*args, **kwargs):
                    state = real_lp(*args, **kwargs)
                    states.append(state)
                    return state

                mp.setattr(driver, "solve_restricted_lp", capture)
                report = solve(inst, SolverConfig(variant=variant))
                runs.append((k, variant, inst, opt, report, states))
    return runs, time.perf_counter() - start


def test_criterion_03_sandwich(sandwich_runs):
    runs, elapsed = sandwich_runs
    failures, exact = [], 0
    for k, variant, inst, opt, r, _ in runs:
        if not (r.lower <= opt + 1e-6 and opt <= r.upper + 1e-6):
            failures.append((k, variant, r.lower, opt, r.upper))
        x = r.edge_values
        path_feasible = all(shortest_violated_path(inst.graph, x, p) is None for p in inst.pairs)
        if np.all((x == 0) | (x == 1)) and path_feasible:
            exact += 1
            if r.upper != opt:
                failures.append((k, variant, "integral but UB != OPT", r.upper, opt))
    _verdict(3, failures, f"LB <= OPT <= UB on {len(runs)} runs; {exact} integral runs with UB = OPT",
             elapsed, 300)


def test_criterion_04_lower_bound_validity():
    rng = np.random.default_rng(404)
    failures, draws = [], 0
    for k in range(12):
        inst = random_instance(rng, max_nodes=9, max_pairs=3)
        opt = brute_force_optimal(inst)[1]
        m = inst.graph.edge_count
        rows = []
        for i, (a, b) in enumerate(inst.pairs):
            paths = simple_paths(inst.graph, a, b)
            rows += [PathRow(i, paths[j]) for j in rng.choice(len(paths), min(3, len(paths)), replace=False)]
        S = np.array([r.indicator(m) for r in rows], dtype=float).reshape(len(rows), m)
        for _ in range(100):
            lam = rng.uniform(0, 1, m) * -inst.theta_minus
            psi = rng.exponential(1.0, len(rows))
            load = S.T @ psi
            if load.any():
                psi *= min(1.0, float(np.min(inst.theta_plus[load > 0] / load[load > 0])))
            draws += 1
            lb = lower_bound(inst, lam, psi, rows)
            if lb > opt + 1e-9:
                failures.append((k, lb, opt))
    _verdict(4, failures, f"lower_bound <= OPT for {draws} in-box dual draws over 12 instances")


def test_criterion_05_convergence_endgame(sandwich_runs):
    runs, _ = sandwich_runs
    failures, converged = [], 0
    for k, variant, _, _, r, _ in runs:
        if not r.converged:
            continue
        converged += 1
        last = r.trace[-1]
        dual = last.dual_objective
        if abs(last.lower_candidate - dual) > 1e-6 * max(1.0, abs(dual)) or last.oracle_value < -1e-6:
            failures.append((k, variant, last.lower_candidate, dual, last.oracle_value))
    if converged == 0:
        failures.append("no run converged")
    _verdict(5, failures, f"LB equals dual objective at convergence on {converged}/{len(runs)} runs")


def _cyc_by_enumeration(graph, x, tol=1e-8):
    for cyc in simple_cycles(graph):
        total = sum(x[k] for k in cyc)
        if any(total - x[k] < x[k] - tol for k in cyc):
            return False
    return True


def test_criterion_06_cyc_membership(sandwich_runs):
    runs, _ = sandwich_runs
    failures = []
    for k, variant, inst, _, r, _ in runs:
        if r.converged and not cyc_membership_check(inst.graph, np.minimum(1.0, r.edge_values)):
            failures.append((k, variant))
    rng = np.random.default_rng(606)
    graphs = 0
    for n in range(3, 9):
        for _ in range(25):
            g = random_planar_graph(rng, n, float(rng.uniform(0.2, 1)))
            graphs += 1
            for x in (rng.integers(0, 2, g.edge_count).astype(float),
                      np.round(rng.uniform(0, 1, g.edge_count), 1), rng.uniform(0, 1, g.edge_count)):
                if bool(cyc_membership_check(g, x)) != _cyc_by_enumeration(g, x):
                    failures.append(("enumeration", n, x.tolist()))
    _verdict(6, failures, f"CYC holds on every converged run; agrees with enumeration on {graphs} graphs")


def test_criterion_07_dual_box_bounds(sandwich_runs):
    runs, _ = sandwich_runs
    failures, iterates, worst = [], 0, 0.0
    for k, variant, inst, _, _, states in runs:
        for s in states:
            iterates += 1
            viol = max(0.0, float(np.max(-s.lam, initial=0)), float(np.max(s.lam + inst.theta_minus, initial=0)),
                       float(np.max(s.row_load - inst.theta_plus, initial=0)), float(np.max(-s.psi, initial=0)))
            worst = max(worst, viol)
            if viol > 1e-8:
                failures.append((k, variant, viol))
    _verdict(7, failures, f"box bounds hold at all {iterates} iterates, worst breach {worst:.1e}")


def test_criterion_08_separation_correctness():
    rng = np.random.default_rng(808)
    failures = []
    for k in range(50):
        n = int(rng.integers(2, 11))
        g = random_planar_graph(rng, n, float(rng.uniform(0.2, 1)))
        pair = tuple(int(v) for v in rng.choice(n, 2, replace=False))
        paths = simple_paths(g, *pair)
        nu = rng.integers(-3, 6, g.edge_count).astype(float)
        best_width = max(min(nu[list(p)]) for p in paths)
        found = widest_path(g, nu, pair)
        width = found[1] if found else 0.0
        if (best_width > 0) != (found is not None) or (found and width != best_width):
            failures.append(("widest", k, width, best_width))
        x = np.round(rng.uniform(0, 0.6, g.edge_count), 3)
        best = min(x[list(p)].sum() for p in paths)
        row = shortest_violated_path(g, x, pair)
        if (best < 1 - 1e-6) != (row is not None) or (row and x[list(row.edge_sequence)].sum() != best):
            failures.append(("shortest", k, best))
    _verdict(8, failures, "widest and shortest paths equal enumeration on 50 graphs (|V| <= 10)")


def test_criterion_09_benchmark_machinery():
    suite = synthetic_suite(30, seed=909, rows=10, cols=10)
    start = time.perf_counter()
    res = bench(suite)
    elapsed = time.perf_counter() - start
    failures = []
    if res.thresholds != (2 ** -3, 2 ** -5, 2 ** -7):
        failures.append(("thresholds", res.thresholds))
    for v in ("widest_path", "naive"):
        if res.converged_fraction(v) < 0.95:
            failures.append((v, res.converged_fraction(v)))
        for t in res.thresholds:
            if not res.curve(v, t):
                failures.append((v, t, "empty curve"))
    if len(res.gap_series) != 60:
        failures.append(("gap series", len(res.gap_series)))
    comparison = "; ".join(
        f"{v}: converged {res.converged_fraction(v):.2f}, "
        f"median time to 2^-7 {np.median([r.time_to[2 ** -7] for r in res.rows if r.variant == v and r.time_to[2 ** -7] is not None]):.3f}s"
        for v in res.variants)
    _verdict(9, failures, f"30-instance suite, {comparison}", elapsed)


def test_criterion_10_rounding_contract():
    rng = np.random.default_rng(1010)
    failures, returned = [], 0
    if MU_GRID != (0.2, 0.4, 0.6, 0.8):
        failures.append(("grid", MU_GRID))
    for k in range(300):
        inst = random_instance(rng, max_nodes=12, max_pairs=3)
        x = rng.uniform(0, 1, inst.graph.edge_count)
        if k % 3 == 0:
            x = np.round(x)
        found = round_upper_bound(inst, x)
        if found is None:
            continue
        returned += 1
        labeling, _ = found
        if not is_multicut(inst.graph, labeling.edge_cut.astype(float)) or not labeling.separates(inst.pairs):
            failures.append(k)
    _verdict(10, failures, f"{returned} rounded outputs are pair-separating multicuts; grid {MU_GRID}")
