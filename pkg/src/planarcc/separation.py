"""Separation: new cut columns from the oracle and new path rows from path searches."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .instance import EmbeddedPlanarGraph, ProblemInstance
from .master import MasterState, PathRow, reduced_costs
from .oracle import TwoColorableCut, planar_two_colorable_min

TOL_COL = 1e-6
TOL_PATH = 1e-6
TOL_WIDTH = 0.0


class SeparationError(RuntimeError):
    pass


@dataclass(frozen=True)
class NuWeights:
    """Per-edge room for raising path duals without breaking a known dual constraint."""

    nu: np.ndarray


def oracle_weights(instance: ProblemInstance, state: MasterState) -> np.ndarray:
    """``theta + lambda - S^T psi``."""
    return instance.theta + state.lam - state.row_load


def most_violated_column(instance: ProblemInstance, state: MasterState,
                         method: str = "gadget") -> tuple[TwoColorableCut, float]:
    """The cheapest 2-colorable cut under the current oracle weights, violated or not."""
    return planar_two_colorable_min(instance.graph, oracle_weights(instance, state), method=method)


def find_violating_column(instance: ProblemInstance, state: MasterState, tol_col: float = TOL_COL,
                          method: str = "gadget") -> tuple[TwoColorableCut, float] | None:
    cut, value = most_violated_column(instance, state, method)
    return (cut, value) if value < -tol_col else None


def compute_nu(instance: ProblemInstance, state: MasterState) -> NuWeights:
    nu = instance.theta_plus - state.row_load
    if state.columns:
        rc = reduced_costs(instance, state)
        Z = state.column_matrix.tocsr()
        for e in range(state.edge_count):
            cols = Z.indices[Z.indptr[e]:Z.indptr[e + 1]]
            if len(cols):
                nu[e] = min(nu[e], float(rc[cols].min()))
    return NuWeights(nu)


def _trace_back(graph: EmbeddedPlanarGraph, pred_edge: np.ndarray, src: int, dst: int) -> tuple[int, ...]:
    e = graph.edges_array
    path = []
    node = dst
    while node != src:
        k = int(pred_edge[node])
        if k < 0:
            raise SeparationError(f"nodes {src} and {dst} are disconnected")
        path.append(k)
        node = int(e[k, 0] if e[k, 1] == node else e[k, 1])
    path.reverse()
    return tuple(path)


def widest_path(graph: EmbeddedPlanarGraph, nu, pair: tuple[int, int], pair_index: int = 0,
                tol_width: float = TOL_WIDTH) -> tuple[PathRow, float] | None:
    """Path between ``pair`` maximizing its smallest ``nu``.

    Among widest paths the one with fewest edges wins, then the
    lexicographically smallest edge-id sequence walked from ``pair[0]``.
    Returns None when the best width does not exceed ``tol_width``.
    """
    nu = np.ascontiguousarray(nu.nu if isinstance(nu, NuWeights) else nu, dtype=np.float64)
    src, dst = int(pair[0]), int(pair[1])
    indptr, nbr, eid = graph.adjacency
    width = float(kernels.bottleneck_widths(indptr, nbr, eid, nu, src, dst)[dst])
    if width == -np.inf:
        raise SeparationError(f"nodes {src} and {dst} are disconnected")
    if width <= tol_width:
        return None
    allowed = (nu >= width).astype(np.uint8)
    hops = kernels.bfs_hops(indptr, nbr, eid, allowed, dst)
    path = []
    node = src
    while node != dst:
        best = None
        for k in range(indptr[node], indptr[node + 1]):
            e, v = int(eid[k]), int(nbr[k])
            if allowed[e] and hops[v] == hops[node] - 1 and (best is None or e < best[0]):
                best = (e, v)
        path.append(best[0])
        node = best[1]
    return PathRow(pair_index, tuple(path)), width


def path_weight(row: PathRow, weights) -> float:
    w = np.asarray(weights, dtype=float)
    return float(w[list(row.edge_set)].sum())


def shortest_violated_path(graph: EmbeddedPlanarGraph, X, pair: tuple[int, int], pair_index: int = 0,
                           tol_path: float = TOL_PATH) -> PathRow | None:
    """Minimum-``X`` path between ``pair`` if its weight is below ``1 - tol_path``."""
    x = np.ascontiguousarray(X, dtype=np.float64)
    src, dst = int(pair[0]), int(pair[1])
    indptr, nbr, eid = graph.adjacency
    dist, pred = kernels.dijkstra(indptr, nbr, eid, x, src, dst)
    if not np.isfinite(dist[dst]):
        raise SeparationError(f"nodes {src} and {dst} are disconnected")
    if dist[dst] >= 1.0 - tol_path:
        return None
    return PathRow(pair_index, _trace_back(graph, pred, src, dst))


__all__ = [
    "NuWeights",
    "SeparationError",
    "TOL_COL",
    "TOL_PATH",
    "compute_nu",
    "find_violating_column",
    "most_violated_column",
    "oracle_weights",
    "path_weight",
    "shortest_violated_path",
    "widest_path",
]
