"""Anytime bounds: rounding upper bounds, Lagrangian lower bounds, cycle checks, exact references."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .instance import EmbeddedPlanarGraph, MulticutLabeling, ProblemInstance
from .master import PathRow, TOL_FEAS, _row_matrix
from .oracle import planar_two_colorable_min

MU_GRID = (0.2, 0.4, 0.6, 0.8)
GAP_THRESHOLDS = (2.0 ** -3, 2.0 ** -5, 2.0 ** -7)
BRUTE_FORCE_OPT_MAX_NODES = 12
LB_FACTOR = 1.5


class BoundsError(ValueError):
    pass


def round_upper_bound(instance: ProblemInstance, X, mu_grid: Sequence[float] = MU_GRID
                      ) -> tuple[MulticutLabeling, float] | None:
    """Cheapest pair-separating multicut obtained by thresholding ``X``.

    For each ``mu`` the edges with ``X >= mu`` are marked cut, components are
    formed from the unmarked edges, and marks inside a component are dropped.
    Earlier thresholds win ties.
    """
    x = np.asarray(X, dtype=float)
    graph = instance.graph
    best = None
    for mu in mu_grid:
        labeling = MulticutLabeling.from_edge_cut(graph, x >= mu)
        if not labeling.separates(instance.pairs):
            continue
        cost = labeling.cost(instance.theta)
        if best is None or cost < best[1]:
            best = (labeling, cost)
    return best


def lower_bound(instance: ProblemInstance, lam, psi, rows: Sequence[PathRow],
                oracle_value: float | None = None, method: str = "gadget") -> float:
    """Lagrangian bound ``-sum(lam) + sum(psi) + 1.5 * min(0, oracle minimum)``.

    Valid for any ``lam`` and ``psi`` inside their box bounds.  The oracle
    minimum over 2-colorable cuts of ``theta + lam - S^T psi`` is computed unless
    supplied.
    """
    lam = np.asarray(lam, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if oracle_value is None:
        load = np.zeros(instance.graph.edge_count)
        if len(rows):
            load = np.asarray(_row_matrix(rows, instance.graph.edge_count).T @ psi).reshape(-1)
        _, oracle_value = planar_two_colorable_min(instance.graph, instance.theta + lam - load, method=method)
    # the empty coloring attains 0, so a positive minimum is round-off
    return float(-lam.sum() + psi.sum() + LB_FACTOR * min(0.0, oracle_value))


@dataclass(frozen=True)
class CycCheck:
    """Result of a cycle-inequality check; falsy when a violated inequality was found."""

    ok: bool
    cycle: tuple[int, ...] | None = None
    pivot: int | None = None
    violation: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


def cyc_membership_check(graph: EmbeddedPlanarGraph, X, tol: float = TOL_FEAS) -> CycCheck:
    """Check every cycle inequality ``sum_{c - e} X >= X_e`` through shortest paths.

    For each pivot edge ``e = (u, v)`` the cheapest ``v``-``u`` path avoiding
    ``e`` is compared with ``X_e``.  The witness cycle starts with the pivot.
    """
    x = np.ascontiguousarray(X, dtype=np.float64)
    indptr, nbr, eid = graph.adjacency
    e = graph.edges_array
    for k in np.argsort(-x, kind="stable"):
        k = int(k)
        if x[k] <= tol:
            break
        u, v = int(e[k, 0]), int(e[k, 1])
        dist, pred = kernels.dijkstra(indptr, nbr, eid, x, v, u, k)
        if dist[u] < x[k] - tol:
            path = []
            node = u
            while node != v:
                j = int(pred[node])
                path.append(j)
                node = int(e[j, 0] if e[j, 1] == node else e[j, 1])
            return CycCheck(False, (k,) + tuple(reversed(path)), k, float(x[k] - dist[u]))
    return CycCheck(True)


def is_multicut(graph: EmbeddedPlanarGraph, X) -> bool:
    """Integral ``X`` satisfying every cycle inequality."""
    x = np.asarray(X, dtype=float)
    return bool(np.all((x == 0) | (x == 1))) and bool(cyc_membership_check(graph, x))


def brute_force_optimal(instance: ProblemInstance) -> tuple[MulticutLabeling, float]:
    """Exact optimum over all node partitions separating every pair; small graphs only."""
    graph = instance.graph
    n = graph.node_count
    if n > BRUTE_FORCE_OPT_MAX_NODES:
        raise BoundsError(f"brute force limited to {BRUTE_FORCE_OPT_MAX_NODES} nodes, got {n}")
    e = graph.edges_array
    pa = np.array([a for a, _ in instance.pairs], dtype=np.int64)
    pb = np.array([b for _, b in instance.pairs], dtype=np.int64)
    cost, labels = kernels.min_partition(n, np.ascontiguousarray(e[:, 0]), np.ascontiguousarray(e[:, 1]),
                                         np.ascontiguousarray(instance.theta), pa, pb)
    if labels is None:
        raise BoundsError("no partition separates every pair")
    labels = np.asarray(labels)
    labeling = MulticutLabeling.from_edge_cut(graph, labels[e[:, 0]] != labels[e[:, 1]])
    return labeling, labeling.cost(instance.theta)


def normalized_gap(ub: float, lb: float) -> float:
    """``(ub - lb) / |lb|``; with ``lb == 0`` it is 0 when the bounds meet and +inf otherwise."""
    if ub == lb:
        return 0.0
    if lb == 0 or not (math.isfinite(ub) and math.isfinite(lb)):
        return math.inf
    return (ub - lb) / abs(lb)


@dataclass
class BoundsRecord:
    """Best bounds seen so far plus their time series."""

    best_upper: tuple[MulticutLabeling, float] | None = None
    best_lower: float = -math.inf
    series: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def upper_cost(self) -> float:
        return math.inf if self.best_upper is None else self.best_upper[1]

    def offer_upper(self, candidate: tuple[MulticutLabeling, float] | None) -> bool:
        if candidate is not None and candidate[1] < self.upper_cost:
            self.best_upper = candidate
            return True
        return False

    def offer_lower(self, value: float | None) -> bool:
        if value is not None and value > self.best_lower:
            self.best_lower = value
            return True
        return False

    def stamp(self, elapsed: float) -> None:
        self.series.append((elapsed, self.upper_cost, self.best_lower))

    @property
    def gap(self) -> float:
        return normalized_gap(self.upper_cost, self.best_lower)


__all__ = [
    "BRUTE_FORCE_OPT_MAX_NODES",
    "BoundsError",
    "BoundsRecord",
    "CycCheck",
    "GAP_THRESHOLDS",
    "MU_GRID",
    "brute_force_optimal",
    "cyc_membership_check",
    "is_multicut",
    "lower_bound",
    "normalized_gap",
    "round_upper_bound",
]
