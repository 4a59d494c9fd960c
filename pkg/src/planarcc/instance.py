"""Problem instances: embedded planar graphs, edge costs and repulsive pairs.

A graph carries its own combinatorial embedding as a list of faces.  Each
face is a closed walk of *darts*; dart ``2*e`` traverses edge ``e`` from its
first to its second endpoint and dart ``2*e + 1`` traverses it backwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


class InstanceError(ValueError):
    """Raised when an instance violates a structural invariant."""


class InstanceFormatError(InstanceError):
    """Raised for malformed instance files; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def dart(edge: int, forward: bool = True) -> int:
    return 2 * edge + (0 if forward else 1)


def dart_edge(d: int) -> int:
    return d >> 1


def dart_reversed(d: int) -> int:
    return d ^ 1


@dataclass(frozen=True, eq=False)
class EmbeddedPlanarGraph:
    """Connected planar graph together with its face structure.

    ``faces`` holds one tuple of darts per face.  Construction validates that
    the faces form a combinatorial map of the sphere: every dart is used
    exactly once, every face is a closed walk, the rotation around every node
    is a single cycle, and Euler's formula holds.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "faces", tuple(tuple(int(d) for d in f) for f in self.faces))
        self._validate()

    # -- validation -------------------------------------------------------

    def _validate(self) -> None:
        n, m = self.node_count, len(self.edges)
        if n < 1:
            raise InstanceError("node_count must be positive")
        if m == 0:
            raise InstanceError("graph has no edges")
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise InstanceError(f"edge {e} has endpoint out of range")
            if u == v:
                raise InstanceError(f"edge {e} is a self-loop")
        if not self.is_connected():
            raise InstanceError("graph is not connected")

        seen = np.zeros(2 * m, dtype=np.int64)
        for fid, face in enumerate(self.faces):
            if not face:
                raise InstanceError(f"face {fid} is empty")
            for i, d in enumerate(face):
                if not 0 <= d < 2 * m:
                    raise InstanceError(f"face {fid} references unknown edge {d >> 1}")
                seen[d] += 1
                nxt = face[(i + 1) % len(face)]
                if self.head(d) != self.tail(nxt):
                    raise InstanceError(f"face {fid} is not a closed walk")
        euler = n - m + len(self.faces)
        if euler != 2:
            raise InstanceError(f"Euler formula violated: {n} - {m} + {len(self.faces)} = {euler} != 2")
        if np.any(seen != 1):
            e = int(np.flatnonzero(seen != 1)[0]) >> 1
            raise InstanceError(f"edge {e} must appear in exactly two faces, once per orientation")

        # rotation around node tail(d) maps d to next_in_face(reverse(d))
        nxt = np.empty(2 * m, dtype=np.int64)
        for face in self.faces:
            for i, d in enumerate(face):
                nxt[d] = face[(i + 1) % len(face)]
        visited = np.zeros(2 * m, dtype=bool)
        rotations = 0
        for start in range(2 * m):
            if visited[start]:
                continue
            rotations += 1
            d = start
            while not visited[d]:
                visited[d] = True
                d = int(nxt[d ^ 1])
        if rotations != n:
            raise InstanceError("faces do not induce a single rotation at every node")

    def is_connected(self) -> bool:
        labels = _components(self.node_count, self.edges_array, np.ones(len(self.edges), dtype=bool))
        return int(labels.max()) == 0

    # -- basic accessors -------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def tail(self, d: int) -> int:
        u, v = self.edges[d >> 1]
        return v if d & 1 else u

    def head(self, d: int) -> int:
        u, v = self.edges[d >> 1]
        return u if d & 1 else v

    @cached_property
    def edges_array(self) -> np.ndarray:
        arr = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR adjacency ``(indptr, neighbor, edge_id)``, edges in id order per node."""
        return _csr(self.node_count, self.edges_array)

    @cached_property
    def edge_faces(self) -> np.ndarray:
        """``(|E|, 2)`` array: face containing the forward dart, face containing the reverse."""
        out = np.empty((self.edge_count, 2), dtype=np.int64)
        for fid, face in enumerate(self.faces):
            for d in face:
                out[d >> 1, d & 1] = fid
        out.setflags(write=False)
        return out

    def components(self, uncut: np.ndarray) -> np.ndarray:
        """Component id per node of the subgraph keeping edges where ``uncut`` is true."""
        return _components(self.node_count, self.edges_array, np.asarray(uncut, dtype=bool))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rotation(cls, node_count: int, edges: Sequence[tuple[int, int]],
                      rotation: Sequence[Sequence[int]]) -> "EmbeddedPlanarGraph":
        """Build faces from a rotation system.

        ``rotation[v]`` lists the darts leaving ``v`` in counter-clockwise
        order.  Faces are traced by turning to the clockwise-next dart at
        each node, which yields faces with their interior on the left.
        """
        m = len(edges)
        pred = np.empty(2 * m, dtype=np.int64)  # clockwise neighbour around the tail
        for darts in rotation:
            k = len(darts)
            for i, d in enumerate(darts):
                pred[d] = darts[(i - 1) % k]
        used = np.zeros(2 * m, dtype=bool)
        faces = []
        for start in range(2 * m):
            if used[start]:
                continue
            face = []
            d = start
            while not used[d]:
                used[d] = True
                face.append(d)
                d = int(pred[d ^ 1])
            faces.append(tuple(face))
        return cls(node_count, tuple(edges), tuple(faces))

    @classmethod
    def from_straight_line(cls, coords: np.ndarray, edges: Sequence[tuple[int, int]]) -> "EmbeddedPlanarGraph":
        """Embedding induced by a crossing-free straight-line drawing."""
        coords = np.asarray(coords, dtype=float)
        n = len(coords)
        out: list[list[tuple[float, int]]] = [[] for _ in range(n)]
        for e, (u, v) in enumerate(edges):
            du = coords[v] - coords[u]
            out[u].append((math.atan2(du[1], du[0]), 2 * e))
            out[v].append((math.atan2(-du[1], -du[0]), 2 * e + 1))
        rotation = [[d for _, d in sorted(items)] for items in out]
        return cls.from_rotation(n, edges, rotation)


def grid_graph(rows: int, cols: int) -> EmbeddedPlanarGraph:
    """``rows x cols`` grid; node ``r*cols + c``; horizontal edges first."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise InstanceError("grid needs at least two nodes")
    coords = np.array([(c, -r) for r in range(rows) for c in range(cols)], dtype=float)
    edges = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    edges += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    return EmbeddedPlanarGraph.from_straight_line(coords, edges)


def cycle_graph(n: int) -> EmbeddedPlanarGraph:
    """Cycle on ``n >= 3`` nodes; edge ``i`` joins ``i`` and ``i+1 mod n``."""
    if n < 3:
        raise InstanceError("a cycle needs at least three nodes")
    angle = 2 * np.pi * np.arange(n) / n
    coords = np.column_stack([np.cos(angle), np.sin(angle)])
    return EmbeddedPlanarGraph.from_straight_line(coords, [(i, (i + 1) % n) for i in range(n)])


def random_planar_graph(rng: np.random.Generator, node_count: int,
                        keep: float = 0.5) -> EmbeddedPlanarGraph:
    """Random connected plane graph: a Delaunay triangulation of random points,
    thinned to a random spanning tree plus each remaining edge with probability ``keep``."""
    from scipy.spatial import Delaunay

    if node_count < 2:
        raise InstanceError("need at least two nodes")
    coords = rng.random((node_count, 2))
    if node_count == 2:
        return EmbeddedPlanarGraph.from_straight_line(coords, [(0, 1)])
    tri = Delaunay(coords)
    cand = set()
    for a, b, c in tri.simplices:
        for u, v in ((a, b), (b, c), (a, c)):
            cand.add((int(min(u, v)), int(max(u, v))))
    cand = sorted(cand)
    order = rng.permutation(len(cand))
    parent = list(range(node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for i in order:
        u, v = cand[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
        elif rng.random() < keep:
            chosen.append((u, v))
    return EmbeddedPlanarGraph.from_straight_line(coords, sorted(chosen))


def _csr(n: int, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = len(edges)
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((eid, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    indptr = np.cumsum(indptr)
    nbr = np.ascontiguousarray(dst[order], dtype=np.int64)
    eids = np.ascontiguousarray(eid[order], dtype=np.int64)
    for a in (indptr, nbr, eids):
        a.setflags(write=False)
    return indptr, nbr, eids


def _components(n: int, edges: np.ndarray, keep: np.ndarray) -> np.ndarray:
    kept = edges[keep]
    adj = coo_matrix((np.ones(len(kept)), (kept[:, 0], kept[:, 1])), shape=(n, n))
    _, labels = connected_components(adj, directed=False)
    # relabel by first appearance so ids are canonical
    _, first = np.unique(labels, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(np.argsort(first))] = np.arange(len(first))
    return rank[labels]


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """Graph, per-edge cut costs ``theta`` and node pairs that must be separated."""

    graph: EmbeddedPlanarGraph
    theta: np.ndarray
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        theta = np.array(self.theta, dtype=np.float64).reshape(-1)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))
        if len(theta) != self.graph.edge_count:
            raise InstanceError(f"theta has length {len(theta)}, expected {self.graph.edge_count}")
        if not np.all(np.isfinite(theta)):
            raise InstanceError("theta must be finite")
        for i, (a, b) in enumerate(self.pairs):
            if a == b:
                raise InstanceError(f"pair {i} joins node {a} to itself")
            if not (0 <= a < self.graph.node_count and 0 <= b < self.graph.node_count):
                raise InstanceError(f"pair {i} has node out of range")

    @property
    def theta_plus(self) -> np.ndarray:
        return np.maximum(self.theta, 0.0)

    @property
    def theta_minus(self) -> np.ndarray:
        return np.minimum(self.theta, 0.0)


def split_theta(instance: ProblemInstance) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative parts of the edge costs; they sum back to theta."""
    return instance.theta_plus, instance.theta_minus


@dataclass(frozen=True, eq=False)
class MulticutLabeling:
    edge_cut: np.ndarray
    component_of: np.ndarray = field(repr=False)

    @classmethod
    def from_components(cls, graph: EmbeddedPlanarGraph, component_of: Sequence[int]) -> "MulticutLabeling":
        comp = np.asarray(component_of, dtype=np.int64)
        e = graph.edges_array
        cut = comp[e[:, 0]] != comp[e[:, 1]]
        # canonical ids: components of the uncut subgraph
        return cls(cut, graph.components(~cut))

    @classmethod
    def from_edge_cut(cls, graph: EmbeddedPlanarGraph, edge_cut: Sequence[bool]) -> "MulticutLabeling":
        """Labeling whose components are those of the uncut subgraph.

        Cut edges inside a component are dropped, so the result is always a
        consistent multicut.
        """
        cut = np.asarray(edge_cut, dtype=bool)
        comp = graph.components(~cut)
        return cls.from_components(graph, comp)

    @property
    def component_count(self) -> int:
        return int(self.component_of.max()) + 1 if len(self.component_of) else 0

    def cost(self, theta: np.ndarray) -> float:
        return float(np.dot(theta, self.edge_cut))

    def separates(self, pairs: Iterable[tuple[int, int]]) -> bool:
        comp = self.component_of
        return all(comp[a] != comp[b] for a, b in pairs)

    def is_consistent(self, graph: EmbeddedPlanarGraph) -> bool:
        e = graph.edges_array
        return bool(np.array_equal(self.component_of[e[:, 0]] != self.component_of[e[:, 1]], self.edge_cut))


# -- file format -----------------------------------------------------------

def _signed_dart(token: str, line: int) -> int:
    neg = token.startswith("-")
    body = token[1:] if token[:1] in "+-" else token
    if not body.isdigit():
        raise InstanceFormatError(f"bad face entry {token!r}", line)
    return dart(int(body), forward=not neg)


def parse_instance(text: str) -> ProblemInstance:
    """Parse the line-oriented instance format.

    Blank lines and ``#`` comments are ignored.  Structural problems are
    raised as :class:`InstanceError` after parsing succeeds.
    """
    header = None
    edges: dict[int, tuple[int, int, float]] = {}
    faces: dict[int, tuple[int, ...]] = {}
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        kind = tokens[0]
        try:
            if header is None:
                if (len(tokens) != 8 or tokens[0::2] != ["nodes", "edges", "faces", "pairs"]):
                    raise InstanceFormatError("expected header 'nodes N edges M faces K pairs P'", lineno)
                header = tuple(int(t) for t in tokens[1::2])
                if min(header) < 0:
                    raise InstanceFormatError("negative count in header", lineno)
            elif kind == "edge":
                if len(tokens) != 5:
                    raise InstanceFormatError("expected 'edge <id> <u> <v> <theta>'", lineno)
                eid = int(tokens[1])
                if eid in edges:
                    raise InstanceFormatError(f"duplicate edge id {eid}", lineno)
                edges[eid] = (int(tokens[2]), int(tokens[3]), float(tokens[4]))
            elif kind == "face":
                if len(tokens) < 3:
                    raise InstanceFormatError("expected 'face <id> <signed edge ids...>'", lineno)
                fid = int(tokens[1])
                if fid in faces:
                    raise InstanceFormatError(f"duplicate face id {fid}", lineno)
                faces[fid] = tuple(_signed_dart(t, lineno) for t in tokens[2:])
            elif kind == "pair":
                if len(tokens) != 3:
                    raise InstanceFormatError("expected 'pair <f1> <f2>'", lineno)
                pairs.append((int(tokens[1]), int(tokens[2])))
            else:
                raise InstanceFormatError(f"unknown record {kind!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, InstanceFormatError):
                raise
            raise InstanceFormatError(str(exc), lineno) from None
    if header is None:
        raise InstanceFormatError("missing header")
    n, m, k, p = header
    if sorted(edges) != list(range(m)):
        raise InstanceFormatError(f"expected edge ids 0..{m - 1}, found {len(edges)} edge records")
    if len(pairs) != p:
        raise InstanceFormatError(f"header declares {p} pairs, found {len(pairs)}")
    if sorted(faces) != list(range(len(faces))):
        raise InstanceFormatError("face ids must be 0..K-1")
    if len(faces) != k:
        n_e = n - m + len(faces)
        raise InstanceError(
            f"Euler formula violated: header declares {k} faces, file lists {len(faces)} "
            f"({n} - {m} + {len(faces)} = {n_e})")
    graph = EmbeddedPlanarGraph(n, tuple(edges[e][:2] for e in range(m)), tuple(faces[f] for f in range(k)))
    theta = np.array([edges[e][2] for e in range(m)])
    return ProblemInstance(graph, theta, tuple(pairs))


def _format_dart(d: int) -> str:
    return f"{'-' if d & 1 else '+'}{d >> 1}"


def serialize_instance(instance: ProblemInstance) -> str:
    g = instance.graph
    lines = [f"nodes {g.node_count} edges {g.edge_count} faces {g.face_count} pairs {len(instance.pairs)}"]
    for e, ((u, v), t) in enumerate(zip(g.edges, instance.theta)):
        lines.append(f"edge {e} {u} {v} {float(t)!r}")
    for f, face in enumerate(g.faces):
        lines.append(f"face {f} " + " ".join(_format_dart(d) for d in face))
    for a, b in instance.pairs:
        lines.append(f"pair {a} {b}")
    return "\n".join(lines) + "\n"


def read_instance(path) -> ProblemInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(instance: ProblemInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(instance))


# -- synthetic data -------------------------------------------------------

def synthetic_instance(seed: int, rows: int, cols: int, noise: float, num_pairs: int,
                       regions: int | None = None) -> tuple[ProblemInstance, np.ndarray]:
    """Noisy grid instance plus the hidden partition it was drawn from.

    Regions are grown from random seeds so each is connected.  Costs are
    ``sign * U(0.5, 1.5) + noise * N(0, 1)`` rounded to three decimals, with
    the sign negative across region boundaries.
    """
    if rows * cols < 2:
        raise ValueError("rows * cols must be at least 2")
    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise must lie in [0, 1]")
    if num_pairs < 0:
        raise ValueError("num_pairs must be nonnegative")
    rng = np.random.default_rng(seed)
    graph = grid_graph(rows, cols)
    n = graph.node_count
    k = regions if regions is not None else max(2, round(n / 12))
    k = min(k, n)

    indptr, nbr, _ = graph.adjacency
    label = np.full(n, -1, dtype=np.int64)
    seeds = rng.choice(n, size=k, replace=False)
    label[seeds] = np.arange(k)
    frontier = [int(s) for s in seeds]
    while frontier:
        i = int(rng.integers(len(frontier)))
        u = frontier[i]
        free = [int(v) for v in nbr[indptr[u]:indptr[u + 1]] if label[v] < 0]
        if not free:
            frontier[i] = frontier[-1]
            frontier.pop()
            continue
        v = free[int(rng.integers(len(free)))]
        label[v] = label[u]
        frontier.append(v)

    e = graph.edges_array
    sign = np.where(label[e[:, 0]] != label[e[:, 1]], -1.0, 1.0)
    theta = sign * rng.uniform(0.5, 1.5, size=len(e)) + noise * rng.standard_normal(len(e))
    theta = np.round(theta, 3)

    us, vs = np.triu_indices(n, k=1)
    cross = label[us] != label[vs]
    candidates = np.stack([us[cross], vs[cross]], axis=1)
    if num_pairs > len(candidates):
        raise ValueError(
            f"num_pairs={num_pairs} exceeds the limit of {len(candidates)} cross-region pairs")
    chosen = np.sort(rng.choice(len(candidates), size=num_pairs, replace=False))
    pairs = tuple((int(a), int(b)) for a, b in candidates[chosen])
    return ProblemInstance(graph, theta, pairs), label


def generate_synthetic(seed: int, rows: int, cols: int, noise: float, num_pairs: int,
                       regions: int | None = None) -> ProblemInstance:
    return synthetic_instance(seed, rows, cols, noise, num_pairs, regions)[0]
