"""Minimum-cost 2-colorable multicuts (the column oracle).

On a connected plane graph the edge sets of bipartition cuts are exactly the
edge sets whose dual is an even subgraph.  The cheapest even subgraph under
signed weights ``w`` is a minimum-cost perfect matching on an expanded dual
graph in which each dual vertex is replaced by a small gadget.  A T-join
variant (negative edges plus a parity repair) is kept as a cross-check.
"""

from __future__ import annotations

import logging
import weakref
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .instance import EmbeddedPlanarGraph, _csr
from .matching import WeightedMatchingProblem, min_weight_perfect_matching

log = logging.getLogger(__name__)

BRUTE_FORCE_MAX_NODES = 20


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class TwoColorableCut:
    """One column of the cut matrix: a cut together with a 2-coloring realizing it."""

    cut_edges: np.ndarray
    side_of: np.ndarray

    def __post_init__(self):
        cut = np.asarray(self.cut_edges, dtype=bool)
        side = np.asarray(self.side_of, dtype=np.int8)
        cut.setflags(write=False)
        side.setflags(write=False)
        object.__setattr__(self, "cut_edges", cut)
        object.__setattr__(self, "side_of", side)

    @classmethod
    def from_sides(cls, graph: EmbeddedPlanarGraph, side_of) -> "TwoColorableCut":
        side = np.asarray(side_of, dtype=np.int8)
        e = graph.edges_array
        return cls(side[e[:, 0]] != side[e[:, 1]], side)

    @cached_property
    def key(self) -> bytes:
        return np.packbits(self.cut_edges).tobytes() + len(self.cut_edges).to_bytes(8, "little")

    @property
    def is_empty(self) -> bool:
        return not self.cut_edges.any()

    def cost(self, weights) -> float:
        return float(np.dot(np.asarray(weights, dtype=float), self.cut_edges))

    def is_valid(self, graph: EmbeddedPlanarGraph) -> bool:
        e = graph.edges_array
        return bool(np.array_equal(self.side_of[e[:, 0]] != self.side_of[e[:, 1]], self.cut_edges))


def brute_force_two_colorable_min(graph: EmbeddedPlanarGraph, weights) -> tuple[TwoColorableCut, float]:
    """Enumerate all ``2**(|V|-1)`` colorings; ties go to the smallest side vector."""
    if graph.node_count > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_NODES} nodes, got {graph.node_count}")
    w = np.ascontiguousarray(weights, dtype=np.float64)
    e = graph.edges_array
    cost, side = kernels.min_bipartition(graph.node_count, np.ascontiguousarray(e[:, 0]),
                                         np.ascontiguousarray(e[:, 1]), w)
    cut = TwoColorableCut.from_sides(graph, side)
    return cut, float(cost)


class _DualGraph:
    """Dual multigraph of an embedding; loops (dual of bridges) are kept aside."""

    def __init__(self, graph: EmbeddedPlanarGraph):
        ef = graph.edge_faces
        self.loop = ef[:, 0] == ef[:, 1]
        self.face_count = graph.face_count
        # CSR over all dual edges; loops are harmless to label-setting search
        self.indptr, self.nbr, self.eid = _csr(graph.face_count, ef)
        self.ends = ef


_duals: "weakref.WeakKeyDictionary[EmbeddedPlanarGraph, _DualGraph]" = weakref.WeakKeyDictionary()


def _dual(graph: EmbeddedPlanarGraph) -> _DualGraph:
    dual = _duals.get(graph)
    if dual is None:
        dual = _duals[graph] = _DualGraph(graph)
    return dual


def _color_from_cut(graph: EmbeddedPlanarGraph, cut: np.ndarray) -> np.ndarray:
    """2-coloring with node 0 on side 0 whose cut is ``cut``; raises if none exists."""
    indptr, nbr, eid = graph.adjacency
    side = np.full(graph.node_count, -1, dtype=np.int8)
    side[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for k in range(indptr[u], indptr[u + 1]):
            v, e = nbr[k], eid[k]
            want = side[u] ^ int(cut[e])
            if side[v] < 0:
                side[v] = want
                stack.append(int(v))
            elif side[v] != want:
                raise OracleError("edge set is not a cut of any bipartition")
    return side


def _gadget_graph(dual: _DualGraph) -> tuple[int, list[tuple[int, int, float]], np.ndarray]:
    """Matching graph whose perfect matchings are the even subgraphs of the dual.

    Every dual vertex is split into a chain of degree-3 vertices joined by
    zero-weight links.  A degree-3 vertex becomes a triangle on its three
    ports plus one dummy node adjacent to all of them, so exactly the even
    subsets of ports can be left to external edges.  Degrees 1 and 2 use a
    port-dummy edge and a port-port edge.  Returns the node count, the
    zero-weight internal edges and, per real dual edge, its two port nodes
    (-1 for loops, which are handled outside the gadget).
    """
    ends = dual.ends
    live = np.flatnonzero(~dual.loop)
    incident: list[list[int]] = [[] for _ in range(dual.face_count)]
    for e in live:
        incident[ends[e, 0]].append(2 * int(e))
        incident[ends[e, 1]].append(2 * int(e) + 1)
    port_of = np.full(2 * len(ends), -1, dtype=np.int64)
    internal: list[tuple[int, int, float]] = []
    count = 0

    def gadget(slots: list[int]) -> list[int]:
        # slots >= 0 are dart-like incidences; -1 marks a chain link port
        nonlocal count
        ports = list(range(count, count + len(slots)))
        count += len(slots)
        for slot, port in zip(slots, ports):
            if slot >= 0:
                port_of[slot] = port
        if len(ports) == 2:
            internal.append((ports[0], ports[1], 0.0))
        else:
            dummy = count
            count += 1
            internal.extend((p, dummy, 0.0) for p in ports)
            if len(ports) == 3:
                a, b, c = ports
                internal.extend(((a, b, 0.0), (b, c, 0.0), (a, c, 0.0)))
        return ports

    for inc in incident:
        d = len(inc)
        if d <= 3:
            if d:
                gadget(inc)
            continue
        prev = gadget([inc[0], inc[1], -1])[2]
        for k in range(2, d - 2):
            ports = gadget([-1, inc[k], -1])
            internal.append((prev, ports[0], 0.0))
            prev = ports[2]
        ports = gadget([-1, inc[d - 2], inc[d - 1]])
        internal.append((prev, ports[0], 0.0))
    return count, internal, port_of.reshape(-1, 2)


def _even_subgraph_gadget(dual: _DualGraph, w: np.ndarray) -> np.ndarray:
    count, internal, ports = _gadget_graph(dual)
    live = np.flatnonzero(~dual.loop)
    if count == 0:
        return np.zeros(len(w), dtype=bool)
    external = [(int(ports[e, 0]), int(ports[e, 1]), float(w[e])) for e in live]
    pairs, _ = min_weight_perfect_matching(WeightedMatchingProblem(count, tuple(internal + external)))
    port_edge = {}
    for e in live:
        a, b = int(ports[e, 0]), int(ports[e, 1])
        port_edge[(min(a, b), max(a, b))] = int(e)
    chosen = np.zeros(len(w), dtype=bool)
    for pair in pairs:
        e = port_edge.get(pair)
        if e is not None:
            chosen[e] = True
    return chosen


def _even_subgraph_tjoin(dual: _DualGraph, w: np.ndarray) -> np.ndarray:
    chosen = (w < 0) & ~dual.loop
    degree = np.zeros(dual.face_count, dtype=np.int64)
    np.add.at(degree, dual.ends[chosen, 0], 1)
    np.add.at(degree, dual.ends[chosen, 1], 1)
    odd = np.flatnonzero(degree % 2 == 1)
    if len(odd) == 0:
        return chosen
    absw = np.abs(w)
    absw[dual.loop] = np.inf  # a loop never helps a T-join
    trees = {}
    match_edges = []
    for i, t in enumerate(odd):
        dist, pred = kernels.dijkstra(dual.indptr, dual.nbr, dual.eid, absw, int(t))
        trees[int(t)] = pred
        for j in range(i + 1, len(odd)):
            match_edges.append((i, j, float(dist[odd[j]])))
    pairs, _ = min_weight_perfect_matching(WeightedMatchingProblem(len(odd), tuple(match_edges)))
    for i, j in pairs:
        a, b = int(odd[i]), int(odd[j])
        pred = trees[a]
        node = b
        while node != a:
            e = int(pred[node])
            chosen[e] ^= True
            ends = dual.ends[e]
            node = int(ends[0] if ends[1] == node else ends[1])
    return chosen


ORACLE_METHODS = ("gadget", "tjoin")


def planar_two_colorable_min(graph: EmbeddedPlanarGraph, weights,
                             method: str = "gadget") -> tuple[TwoColorableCut, float]:
    """Exact minimum of ``weights . z`` over bipartition cuts ``z`` of a plane graph.

    ``method="gadget"`` matches on the expanded dual (linear size);
    ``"tjoin"`` matches odd dual vertices under shortest-path distances,
    which is faster when few dual vertices are odd.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (graph.edge_count,):
        raise ValueError("weights must have one entry per edge")
    if method not in ORACLE_METHODS:
        raise ValueError(f"unknown oracle method {method!r}")
    dual = _dual(graph)
    if method == "gadget":
        chosen = _even_subgraph_gadget(dual, w)
    else:
        chosen = _even_subgraph_tjoin(dual, w)
    chosen |= (w < 0) & dual.loop
    side = _color_from_cut(graph, chosen)
    cut = TwoColorableCut(chosen, side)
    return cut, cut.cost(w)


def isolating_cuts(graph: EmbeddedPlanarGraph, cut: TwoColorableCut) -> list[TwoColorableCut]:
    """The cut around each component of the graph minus ``cut``, deduplicated.

    A single component yields the empty cut; callers decide whether to keep it.
    """
    comp = graph.components(~cut.cut_edges)
    e = graph.edges_array
    cu, cv = comp[e[:, 0]], comp[e[:, 1]]
    out: list[TwoColorableCut] = []
    seen: set[bytes] = set()
    for k in range(int(comp.max()) + 1):
        inside = comp == k
        col = TwoColorableCut((cu == k) != (cv == k), inside.astype(np.int8) ^ int(inside[0]))
        if col.key not in seen:
            seen.add(col.key)
            out.append(col)
    return out
