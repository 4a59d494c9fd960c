"""Shared fixtures and small, independent reference implementations."""

from __future__ import annotations

import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from planarcc import _pykernels
from planarcc.instance import ProblemInstance, cycle_graph, random_planar_graph

try:
    from planarcc import _ckernels
except ImportError:  # pragma: no cover - extension optional
    _ckernels = None

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

BACKENDS = [pytest.param(_pykernels, id="python")]
if _ckernels is not None:
    BACKENDS.append(pytest.param(_ckernels, id="compiled"))


@pytest.fixture
def c4():
    """Four-cycle 0-1-2-3-0; edge i joins i and i+1 mod 4."""
    return cycle_graph(4)


def random_instance(rng: np.random.Generator, max_nodes: int = 10, max_pairs: int = 3,
                    low: float = -2.0, high: float = 2.0, decimals: int | None = 2) -> ProblemInstance:
    n = int(rng.integers(3, max_nodes + 1))
    g = random_planar_graph(rng, n, float(rng.uniform(0.2, 1.0)))
    theta = rng.uniform(low, high, g.edge_count)
    if decimals is not None:
        theta = np.round(theta, decimals)
    pairs = set()
    target = int(rng.integers(0, max_pairs + 1))
    while len(pairs) < target:
        a, b = (int(x) for x in rng.choice(n, 2, replace=False))
        pairs.add((a, b))
    return ProblemInstance(g, theta, tuple(sorted(pairs)))


def simple_paths(graph, src: int, dst: int):
    """Every simple src-dst path as a tuple of edge ids (plain DFS)."""
    return simple_paths_avoiding(graph, src, dst, -1)


def simple_cycles(graph):
    """Every simple cycle as a frozenset of edge ids."""
    cycles = set()
    for k, (u, v) in enumerate(graph.edges):
        for path in simple_paths_avoiding(graph, v, u, k):
            cycles.add(frozenset(path + (k,)))
    return cycles


def simple_paths_avoiding(graph, src, dst, banned):
    adj = [[] for _ in range(graph.node_count)]
    for k, (u, v) in enumerate(graph.edges):
        if k != banned:
            adj[u].append((v, k))
            adj[v].append((u, k))
    out = []

    def walk(node, seen, path):
        if node == dst:
            out.append(tuple(path))
            return
        for v, k in adj[node]:
            if v not in seen:
                seen.add(v)
                path.append(k)
                walk(v, seen, path)
                path.pop()
                seen.discard(v)

    walk(src, {src}, [])
    return out


def set_partitions(n: int):
    """Restricted growth strings of length n, each a labeling of nodes."""
    def rec(prefix, blocks):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(blocks + 1):
            prefix.append(b)
            yield from rec(prefix, max(blocks, b + 1))
            prefix.pop()
    yield from rec([0], 1) if n else iter([()])


def reference_optimum(instance: ProblemInstance) -> float:
    """Minimum multicut cost separating every pair, by enumerating set partitions."""
    e = instance.graph.edges_array
    best = np.inf
    for labels in set_partitions(instance.graph.node_count):
        lab = np.array(labels)
        if any(lab[a] == lab[b] for a, b in instance.pairs):
            continue
        best = min(best, float(instance.theta[lab[e[:, 0]] != lab[e[:, 1]]].sum()))
    return best


def reference_two_colorable_min(graph, weights) -> float:
    """Minimum over all 2-colorings by itertools enumeration."""
    e = graph.edges_array
    w = np.asarray(weights, dtype=float)
    best = 0.0
    for bits in itertools.product((0, 1), repeat=graph.node_count - 1):
        side = np.array((0,) + bits)
        best = min(best, float(w[side[e[:, 0]] != side[e[:, 1]]].sum()))
    return best


# acceptance verdicts, one line per criterion, echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
