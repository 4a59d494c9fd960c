import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from planarcc import _pykernels, kernels
from planarcc.matching import (MatchingError, WeightedMatchingProblem, brute_force_perfect_matching,
                               greedy_perfect_matching_cost, max_weight_matching,
                               min_weight_perfect_matching)

from conftest import BACKENDS


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    monkeypatch.setattr(kernels, "max_weight_matching", request.param.max_weight_matching)
    return request.param


def test_single_edge(backend):
    pairs, cost = min_weight_perfect_matching(WeightedMatchingProblem(2, ((0, 1, 5.0),)))
    assert pairs == [(0, 1)] and cost == 5.0


def test_path_has_unique_perfect_matching(backend):
    problem = WeightedMatchingProblem(4, ((0, 1, 1.0), (1, 2, 5.0), (2, 3, 2.0)))
    assert min_weight_perfect_matching(problem) == ([(0, 1), (2, 3)], 3.0)


@given(st.lists(st.integers(-20, 20), min_size=6, max_size=6))
def test_k4_matches_three_matchings(costs):
    edges = tuple((u, v, float(c)) for (u, v), c in zip(itertools.combinations(range(4), 2), costs))
    _, cost = min_weight_perfect_matching(WeightedMatchingProblem(4, edges))
    w = {(u, v): c for u, v, c in edges}
    options = [w[0, 1] + w[2, 3], w[0, 2] + w[1, 3], w[0, 3] + w[1, 2]]
    assert cost == min(options)


def test_errors(backend):
    with pytest.raises(MatchingError, match="odd"):
        min_weight_perfect_matching(WeightedMatchingProblem(3, ((0, 1, 1.0),)))
    with pytest.raises(MatchingError, match="no perfect matching"):
        min_weight_perfect_matching(WeightedMatchingProblem(4, ((0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0))))
    with pytest.raises(MatchingError):
        WeightedMatchingProblem(2, ((0, 0, 1.0),))
    assert min_weight_perfect_matching(WeightedMatchingProblem(0, ())) == ([], 0.0)


def test_parallel_edges_keep_cheapest(backend):
    problem = WeightedMatchingProblem(2, ((0, 1, 4.0), (1, 0, -2.0)))
    assert min_weight_perfect_matching(problem) == ([(0, 1)], -2.0)


def _random_problem(rng, n, density, integer):
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                c = float(rng.integers(-10, 11)) if integer else float(rng.uniform(-5, 5))
                edges.append((u, v, c))
    return WeightedMatchingProblem(n, tuple(edges))


@given(seed=st.integers(0, 100_000), half=st.integers(1, 5), integer=st.booleans())
def test_equals_exhaustive_and_beats_greedy(backend, seed, half, integer):
    rng = np.random.default_rng(seed)
    problem = _random_problem(rng, 2 * half, float(rng.uniform(0.3, 1.0)), integer)
    try:
        ref_pairs, ref = brute_force_perfect_matching(problem)
    except MatchingError:
        with pytest.raises(MatchingError):
            min_weight_perfect_matching(problem)
        return
    pairs, cost = min_weight_perfect_matching(problem)
    covered = sorted(x for p in pairs for x in p)
    assert covered == list(range(2 * half))
    assert cost == pytest.approx(ref, abs=1e-9)
    greedy = greedy_perfect_matching_cost(problem)
    if greedy is not None:
        assert cost <= greedy + 1e-9


def test_max_weight_matching_list_interface():
    mate = max_weight_matching(4, [(0, 1, 1.0), (1, 2, 3.0), (2, 3, 1.0)])
    assert mate == [-1, 2, 1, -1]
    mate = max_weight_matching(4, [(0, 1, 1.0), (1, 2, 3.0), (2, 3, 1.0)], maxcardinality=True)
    assert mate == [1, 0, 3, 2]


def test_python_integer_duals_exact():
    # large integer weights stay exact in the fallback
    big = 10 ** 12
    mate = _pykernels.max_weight_matching(4, np.array([0, 1, 2]), np.array([1, 2, 3]),
                                          np.array([big + 1, big + 3, big + 1], dtype=float), True)
    assert list(mate) == [1, 0, 3, 2]
