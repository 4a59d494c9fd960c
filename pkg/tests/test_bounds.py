import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from planarcc.bounds import (GAP_THRESHOLDS, MU_GRID, BoundsError, BoundsRecord, brute_force_optimal,
                             cyc_membership_check, is_multicut, lower_bound, normalized_gap,
                             round_upper_bound)
from planarcc.instance import MulticutLabeling, ProblemInstance, grid_graph, random_planar_graph
from planarcc.master import PathRow

from conftest import random_instance, reference_optimum, simple_cycles, simple_paths


def test_grid_constants():
    assert MU_GRID == (0.2, 0.4, 0.6, 0.8)
    assert GAP_THRESHOLDS == (2 ** -3, 2 ** -5, 2 ** -7)


def test_rounding_picks_cheapest_threshold(c4):
    inst = ProblemInstance(c4, [1, 1, -3, 1])
    labeling, cost = round_upper_bound(inst, [0.6, 0.6, 0.1, 0.6])
    # mu=0.2..0.6 cut three edges of the cycle at cost 3; mu=0.8 cuts nothing at cost 0
    assert cost == 0.0 and labeling.component_count == 1
    only_low = round_upper_bound(inst, [0.6, 0.6, 0.1, 0.6], mu_grid=(0.4,))
    assert only_low[1] == 3.0
    assert only_low[0].edge_cut.tolist() == [True, True, False, True]


def test_rounding_keeps_integral_multicut(c4):
    inst = ProblemInstance(c4, [1, 2, 1, 2], [(0, 2)])
    x = np.array([1.0, 0.0, 1.0, 0.0])
    labeling, cost = round_upper_bound(inst, x)
    assert labeling.edge_cut.tolist() == [True, False, True, False] and cost == 2.0


def test_rounding_none_when_pair_unseparated(c4):
    assert round_upper_bound(ProblemInstance(c4, [1, 1, 1, 1], [(0, 2)]), np.zeros(4)) is None


def test_rounding_uncuts_internal_edges(c4):
    # a lone cut edge sits inside the single component and is dropped
    labeling, cost = round_upper_bound(ProblemInstance(c4, [-5, 1, 1, 1]), [1.0, 0, 0, 0])
    assert cost == 0.0 and not labeling.edge_cut.any()


def test_lower_bound_examples(c4):
    inst = ProblemInstance(c4, [-1, -1, -1, -1])
    assert lower_bound(inst, np.zeros(4), [], []) == -6.0
    assert brute_force_optimal(inst)[1] == -4.0
    pos = ProblemInstance(c4, [1, 2, 3, 4])
    assert lower_bound(pos, np.zeros(4), [], []) == 0.0
    # a supplied oracle value is used as is, positive values clamp to zero
    assert lower_bound(inst, np.zeros(4), [], [], oracle_value=0.5) == 0.0


def test_cyc_check_examples(c4):
    check = cyc_membership_check(c4, [1, 0, 0, 0])
    assert not check and check.pivot == 0
    assert sorted(check.cycle) == [0, 1, 2, 3] and check.cycle[0] == 0
    assert check.violation == 1.0
    assert cyc_membership_check(c4, [1, 1, 0, 0])
    assert is_multicut(c4, [1, 1, 0, 0]) and not is_multicut(c4, [0.5, 0.5, 0, 0])


def test_brute_force_examples(c4):
    labeling, cost = brute_force_optimal(ProblemInstance(c4, [-1, -1, -1, -1]))
    assert cost == -4 and labeling.component_count == 4
    labeling, cost = brute_force_optimal(ProblemInstance(c4, [1, 1, 1, 1], [(0, 2)]))
    assert cost == 2 and labeling.separates([(0, 2)])
    assert brute_force_optimal(ProblemInstance(c4, [1, 1, 1, -3]))[1] == -2
    with pytest.raises(BoundsError):
        brute_force_optimal(ProblemInstance(grid_graph(3, 5), np.ones(22)))


def test_normalized_gap_examples():
    assert normalized_gap(-4, -6) == pytest.approx(1 / 3)
    assert normalized_gap(3.5, 3.5) == 0.0
    assert normalized_gap(0.0, 0.0) == 0.0
    assert normalized_gap(1.0, 0.0) == math.inf
    assert normalized_gap(math.inf, -1.0) == math.inf
    assert normalized_gap(-4, -4.03125) < 2 ** -3


def test_bounds_record_keeps_best():
    rec = BoundsRecord()
    assert rec.upper_cost == math.inf and rec.gap == math.inf
    lab = MulticutLabeling.from_components(grid_graph(2, 2), [0, 0, 0, 0])
    assert rec.offer_upper((lab, 3.0)) and not rec.offer_upper((lab, 4.0)) and not rec.offer_upper(None)
    assert rec.offer_lower(-2.0) and not rec.offer_lower(-3.0) and not rec.offer_lower(None)
    rec.stamp(0.1)
    rec.offer_upper((lab, 1.0))
    rec.offer_lower(0.5)
    rec.stamp(0.2)
    assert rec.series == [(0.1, 3.0, -2.0), (0.2, 1.0, 0.5)]
    assert rec.gap == pytest.approx(1.0)


@given(st.integers(0, 100_000))
def test_brute_force_matches_partition_enumeration(seed):
    inst = random_instance(np.random.default_rng(seed), max_nodes=7)
    labeling, cost = brute_force_optimal(inst)
    assert cost == pytest.approx(reference_optimum(inst), abs=1e-12)
    assert labeling.separates(inst.pairs) and labeling.cost(inst.theta) == cost


def _random_duals(rng, inst, rows):
    lam = rng.uniform(0, 1, inst.graph.edge_count) * -inst.theta_minus
    if not rows:
        return lam, np.zeros(0)
    S = np.array([r.indicator(inst.graph.edge_count) for r in rows], dtype=float)
    psi = rng.uniform(0, 1, len(rows))
    # scale psi into S^T psi <= theta_plus
    load = S.T @ psi
    ratio = np.where(load > 0, inst.theta_plus / np.where(load > 0, load, 1), np.inf)
    return lam, psi * min(1.0, float(ratio.min()))


@given(st.integers(0, 100_000))
def test_lower_bound_below_optimum(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, max_nodes=8)
    opt = brute_force_optimal(inst)[1]
    rows = []
    for i, (a, b) in enumerate(inst.pairs):
        paths = simple_paths(inst.graph, a, b)
        rows += [PathRow(i, paths[k]) for k in rng.choice(len(paths), min(3, len(paths)), replace=False)]
    for _ in range(5):
        lam, psi = _random_duals(rng, inst, rows)
        assert lower_bound(inst, lam, psi, rows) <= opt + 1e-9


def _cyc_by_enumeration(graph, x, tol=1e-8):
    for cyc in simple_cycles(graph):
        total = sum(x[k] for k in cyc)
        if any(total - x[k] < x[k] - tol for k in cyc):
            return False
    return True


@given(seed=st.integers(0, 100_000), integral=st.booleans())
def test_cyc_check_matches_enumeration(seed, integral):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    g = random_planar_graph(rng, n, float(rng.uniform(0.3, 1)))
    x = rng.integers(0, 2, g.edge_count).astype(float) if integral else np.round(rng.uniform(0, 1, g.edge_count), 1)
    check = cyc_membership_check(g, x)
    assert bool(check) == _cyc_by_enumeration(g, x)
    if not check:
        pivot, rest = check.cycle[0], check.cycle[1:]
        assert frozenset(check.cycle) in simple_cycles(g)
        assert x[list(rest)].sum() < x[pivot] - 1e-8


@given(st.integers(0, 100_000))
def test_rounded_solutions_are_feasible_multicuts(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, max_nodes=9)
    x = np.round(rng.uniform(0, 1, inst.graph.edge_count), 2)
    found = round_upper_bound(inst, x)
    if found is None:
        return
    labeling, cost = found
    assert is_multicut(inst.graph, labeling.edge_cut.astype(float))
    assert labeling.separates(inst.pairs)
    assert cost == pytest.approx(labeling.cost(inst.theta))
    assert brute_force_optimal(inst)[1] <= cost + 1e-12
