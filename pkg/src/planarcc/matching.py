"""Minimum-cost perfect matching in general graphs.

The engine is Edmonds' weighted blossom algorithm in primal-dual form (see
``max_weight_matching`` in the kernel modules); this module adapts it to
minimum-cost perfect matching and provides small exhaustive references.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels


class MatchingError(ValueError):
    """Raised when no perfect matching exists or the input is malformed."""


@dataclass(frozen=True)
class WeightedMatchingProblem:
    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise MatchingError("vertex_count must be nonnegative")
        for u, v, _ in self.edges:
            if u == v or not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise MatchingError(f"invalid edge ({u}, {v})")


def max_weight_matching(vertex_count: int, edges: Sequence[tuple[int, int, float]],
                        maxcardinality: bool = False, warm_start: bool = False) -> list[int]:
    """Maximum-weight matching; ``mate[v]`` is v's partner or -1.

    With ``maxcardinality`` the result has maximum cardinality and maximum
    weight among such matchings.  At most one edge per vertex pair.
    """
    if not edges:
        return [-1] * vertex_count
    eu = np.array([e[0] for e in edges], dtype=np.int64)
    ev = np.array([e[1] for e in edges], dtype=np.int64)
    w = np.array([e[2] for e in edges], dtype=np.float64)
    return [int(x) for x in kernels.max_weight_matching(vertex_count, eu, ev, w, maxcardinality, warm_start)]


def min_weight_perfect_matching(problem: WeightedMatchingProblem) -> tuple[list[tuple[int, int]], float]:
    """Exact minimum-cost perfect matching.

    Costs may have any sign.  They are mapped to positive weights
    ``max_cost - cost + 1``, which shifts every perfect matching by the same
    constant, and solved as a maximum-cardinality maximum-weight matching.
    Parallel edges keep their cheapest copy.

    Returns the matched pairs ``(u, v)`` with ``u < v`` in increasing order,
    and the total cost.
    """
    n = problem.vertex_count
    if n % 2:
        raise MatchingError(f"odd vertex count {n} admits no perfect matching")
    if n == 0:
        return [], 0.0
    cheapest: dict[tuple[int, int], float] = {}
    for u, v, c in problem.edges:
        key = (u, v) if u < v else (v, u)
        if key not in cheapest or c < cheapest[key]:
            cheapest[key] = c
    if not cheapest:
        raise MatchingError("no perfect matching exists")
    keys = sorted(cheapest)
    costs = [cheapest[k] for k in keys]
    top = max(costs)
    weighted = [(u, v, top - c + 1.0) for (u, v), c in zip(keys, costs)]
    mate = max_weight_matching(n, weighted, warm_start=True)
    if any(m < 0 for m in mate):
        raise MatchingError("no perfect matching exists")
    pairs = sorted((v, mate[v]) for v in range(n) if v < mate[v])
    return pairs, float(sum(cheapest[p] for p in pairs))


def brute_force_perfect_matching(problem: WeightedMatchingProblem) -> tuple[list[tuple[int, int]], float]:
    """Exhaustive minimum-cost perfect matching for small graphs (testing aid)."""
    n = problem.vertex_count
    cost: dict[tuple[int, int], float] = {}
    for u, v, c in problem.edges:
        key = (min(u, v), max(u, v))
        cost[key] = min(c, cost.get(key, c))
    best: tuple[float, list[tuple[int, int]]] | None = None

    def rec(free: list[int], acc: float, chosen: list[tuple[int, int]]):
        nonlocal best
        if not free:
            if best is None or acc < best[0]:
                best = (acc, list(chosen))
            return
        u = free[0]
        for idx in range(1, len(free)):
            key = (u, free[idx])
            if key in cost:
                chosen.append(key)
                rec(free[1:idx] + free[idx + 1:], acc + cost[key], chosen)
                chosen.pop()

    rec(list(range(n)), 0.0, [])
    if best is None:
        raise MatchingError("no perfect matching exists")
    return sorted(best[1]), best[0]


def greedy_perfect_matching_cost(problem: WeightedMatchingProblem) -> float | None:
    """Cost of the perfect matching built greedily by increasing cost, or None if greedy gets stuck."""
    taken: set[int] = set()
    total = 0.0
    for u, v, c in sorted(problem.edges, key=lambda e: (e[2], e[0], e[1])):
        if u not in taken and v not in taken:
            taken.update((u, v))
            total += c
    return total if len(taken) == problem.vertex_count else None


__all__ = [
    "MatchingError",
    "WeightedMatchingProblem",
    "brute_force_perfect_matching",
    "greedy_perfect_matching_cost",
    "max_weight_matching",
    "min_weight_perfect_matching",
]
