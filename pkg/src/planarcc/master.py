"""Restricted master LP over the current cut columns and path rows.

Primal, over columns ``Z`` (edges x columns) and path rows ``S`` (rows x edges)::

    min  theta.(Z gamma) - theta_minus.beta + theta_plus.kappa
    s.t. Z gamma - beta <= 1              (dual lambda >= 0, one per edge)
         S Z gamma + S kappa >= 1         (dual psi >= 0, one per row)
         gamma, beta, kappa >= 0

Its dual maximizes ``-sum(lambda) + sum(psi)`` subject to the column
constraints ``(theta + lambda - S^T psi).z >= 0`` and the box bounds
``lambda <= -theta_minus`` and ``S^T psi <= theta_plus`` contributed by the
``beta`` and ``kappa`` variables.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .instance import EmbeddedPlanarGraph, ProblemInstance
from .oracle import TwoColorableCut

log = logging.getLogger(__name__)

TOL_FEAS = 1e-8
TOL_GAP = 1e-7
TOL_CS = 1e-7
LP_TOL = 1e-9
LP_TOL_TIGHT = 1e-10


class MasterError(RuntimeError):
    """The restricted LP could not be solved."""


@dataclass(frozen=True, eq=False)
class PathRow:
    """A path constraint: the walk ``edge_sequence`` joins the nodes of pair ``pair_index``."""

    pair_index: int
    edge_sequence: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_sequence", tuple(int(e) for e in self.edge_sequence))
        if not self.edge_sequence:
            raise ValueError("a path row needs at least one edge")

    @cached_property
    def edge_set(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.edge_sequence)))

    @property
    def key(self) -> tuple[int, ...]:
        # rows with equal edge sets are the same constraint
        return self.edge_set

    def indicator(self, edge_count: int) -> np.ndarray:
        out = np.zeros(edge_count, dtype=bool)
        out[list(self.edge_set)] = True
        return out

    def is_valid(self, graph: EmbeddedPlanarGraph, pairs: Sequence[tuple[int, int]]) -> bool:
        if not 0 <= self.pair_index < len(pairs):
            return False
        if any(not 0 <= e < graph.edge_count for e in self.edge_sequence):
            return False
        src, dst = pairs[self.pair_index]
        e = graph.edges_array
        at = src
        for k in self.edge_sequence:
            u, v = int(e[k, 0]), int(e[k, 1])
            if at == u:
                at = v
            elif at == v:
                at = u
            else:
                return False
        return at == dst


@dataclass(frozen=True, eq=False)
class MasterState:
    """A snapshot of the restricted master: its columns, rows and (possibly) a solution."""

    edge_count: int
    columns: tuple[TwoColorableCut, ...] = ()
    rows: tuple[PathRow, ...] = ()
    gamma: np.ndarray = field(default=None, repr=False)
    beta: np.ndarray = field(default=None, repr=False)
    kappa: np.ndarray = field(default=None, repr=False)
    lam: np.ndarray = field(default=None, repr=False)
    psi: np.ndarray = field(default=None, repr=False)
    primal_objective: float | None = None
    dual_objective: float | None = None
    solved: bool = False

    def __post_init__(self):
        m, r, p = self.edge_count, len(self.columns), len(self.rows)
        for name, size in (("gamma", r), ("beta", m), ("kappa", m), ("lam", m), ("psi", p)):
            value = getattr(self, name)
            arr = np.zeros(size) if value is None else np.array(value, dtype=np.float64)
            if arr.shape != (size,):
                raise ValueError(f"{name} has shape {arr.shape}, expected ({size},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def empty(cls, edge_count: int) -> "MasterState":
        return cls(edge_count)

    @cached_property
    def column_matrix(self) -> sparse.csc_matrix:
        """``Z`` as an edges x columns 0/1 matrix."""
        return _column_matrix(self.columns, self.edge_count)

    @cached_property
    def row_matrix(self) -> sparse.csr_matrix:
        """``S`` as a rows x edges 0/1 matrix."""
        return _row_matrix(self.rows, self.edge_count)

    @property
    def cover(self) -> np.ndarray:
        """``Z gamma``, the fractional cut mass on each edge."""
        if not self.columns:
            return np.zeros(self.edge_count)
        return np.asarray(self.column_matrix @ self.gamma).reshape(-1)

    @property
    def row_load(self) -> np.ndarray:
        """``S^T psi``, the path-dual mass on each edge."""
        if not self.rows:
            return np.zeros(self.edge_count)
        return np.asarray(self.row_matrix.T @ self.psi).reshape(-1)

    def column_keys(self) -> set[bytes]:
        return {c.key for c in self.columns}

    def row_keys(self) -> set[tuple[int, ...]]:
        return {r.key for r in self.rows}


def _column_matrix(columns: Sequence[TwoColorableCut], edge_count: int) -> sparse.csc_matrix:
    if not columns:
        return sparse.csc_matrix((edge_count, 0))
    dense = np.column_stack([c.cut_edges for c in columns]).astype(np.float64)
    return sparse.csc_matrix(dense)


def _row_matrix(rows: Sequence[PathRow], edge_count: int) -> sparse.csr_matrix:
    if not rows:
        return sparse.csr_matrix((0, edge_count))
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    indices = []
    for i, row in enumerate(rows):
        indices.extend(row.edge_set)
        indptr[i + 1] = len(indices)
    data = np.ones(len(indices))
    return sparse.csr_matrix((data, np.array(indices, dtype=np.int64), indptr), shape=(len(rows), edge_count))


def _clean_duals(instance: ProblemInstance, S: sparse.csr_matrix, lam: np.ndarray, psi: np.ndarray):
    """Project solver duals onto the exact box ``0 <= lam <= -theta_minus``, ``S^T psi <= theta_plus``."""
    lam = np.clip(lam, 0.0, -instance.theta_minus)
    psi = np.maximum(psi, 0.0)
    if len(psi):
        load = np.asarray(S.T @ psi).reshape(-1)
        tp = instance.theta_plus
        ratio = np.ones_like(load)
        over = load > tp
        ratio[over] = tp[over] / load[over]
        # scale each row by the tightest ratio along it
        for i in range(S.shape[0]):
            lo, hi = S.indptr[i], S.indptr[i + 1]
            if hi > lo:
                psi[i] *= float(ratio[S.indices[lo:hi]].min())
    return lam, psi


def solve_restricted_lp(instance: ProblemInstance, columns: Sequence[TwoColorableCut],
                        rows: Sequence[PathRow], warm_start: MasterState | None = None,
                        tight: bool = False) -> MasterState:
    """Jointly optimal primal and dual solution of the restricted master.

    ``warm_start`` is accepted for interface stability; HiGHS is restarted
    from scratch each call (the solves are small).  ``tight`` lowers the
    solver feasibility tolerances further.
    """
    m = instance.graph.edge_count
    columns, rows = tuple(columns), tuple(rows)
    r, p = len(columns), len(rows)
    theta, tp, tm = instance.theta, instance.theta_plus, instance.theta_minus
    Z = _column_matrix(columns, m)
    S = _row_matrix(rows, m)

    cost = np.concatenate([np.asarray(Z.T @ theta).reshape(-1), -tm, tp])
    eye = sparse.identity(m, format="csr")
    cover_rows = sparse.hstack([Z, -eye, sparse.csr_matrix((m, m))], format="csr")
    if p:
        SZ = S @ Z
        path_rows = sparse.hstack([-SZ, sparse.csr_matrix((p, m)), -S], format="csr")
        A = sparse.vstack([cover_rows, path_rows], format="csr")
        b = np.concatenate([np.ones(m), -np.ones(p)])
    else:
        A, b = cover_rows, np.ones(m)

    tol = LP_TOL_TIGHT if tight else LP_TOL
    res = linprog(cost, A_ub=A, b_ub=b, bounds=(0, None), method="highs-ds",
                  options={"presolve": False, "primal_feasibility_tolerance": tol,
                           "dual_feasibility_tolerance": tol})
    if res.status != 0:
        # status 2 (infeasible) cannot happen: kappa satisfies every path row
        raise MasterError(f"restricted LP failed (status {res.status}): {res.message}")

    x = np.maximum(res.x, 0.0)
    gamma, beta, kappa = x[:r], x[r:r + m], x[r + m:]
    marg = -np.asarray(res.ineqlin.marginals)
    lam, psi = _clean_duals(instance, S, marg[:m], marg[m:])
    primal = float(cost @ x)
    dual = float(-lam.sum() + psi.sum())
    if abs(primal - dual) > TOL_GAP * max(1.0, abs(primal)):
        log.warning("master duality gap %.3g exceeds tolerance", primal - dual)
    state = MasterState(m, columns, rows, gamma, beta, kappa, lam, psi, primal, dual, True)
    # share the matrices already built
    state.__dict__["column_matrix"] = Z
    state.__dict__["row_matrix"] = S
    return state


def primal_value(instance: ProblemInstance, state: MasterState) -> float:
    return float(instance.theta @ state.cover - instance.theta_minus @ state.beta
                 + instance.theta_plus @ state.kappa)


def dual_value(state: MasterState) -> float:
    return float(-state.lam.sum() + state.psi.sum())


def reduced_costs(instance: ProblemInstance, state: MasterState) -> np.ndarray:
    """``(theta + lambda - S^T psi).z`` for every current column."""
    w = instance.theta + state.lam - state.row_load
    if not state.columns:
        return np.zeros(0)
    return np.asarray(state.column_matrix.T @ w).reshape(-1)


def complementary_slackness_violation(instance: ProblemInstance, state: MasterState) -> float:
    """Largest product of a primal value with its dual slack (or a dual with its primal slack)."""
    cover = state.cover
    out = [0.0]
    if state.columns:
        out.append(float(np.max(state.gamma * np.abs(reduced_costs(instance, state)))))
    out.append(float(np.max(state.beta * np.abs(-instance.theta_minus - state.lam), initial=0.0)))
    out.append(float(np.max(state.kappa * np.abs(instance.theta_plus - state.row_load), initial=0.0)))
    out.append(float(np.max(state.lam * np.abs(1.0 - cover + state.beta), initial=0.0)))
    if state.rows:
        load = np.asarray(state.row_matrix @ (cover + state.kappa)).reshape(-1)
        out.append(float(np.max(state.psi * np.abs(load - 1.0))))
    return max(out)


def edge_values(state: MasterState) -> np.ndarray:
    """``X = min(1, Z gamma + kappa)``."""
    return np.clip(state.cover + state.kappa, 0.0, 1.0)


def reduce_slacks(state: MasterState) -> MasterState:
    """Greedily remove slack mass from ``kappa`` and ``beta``.

    Each edge in id order gives up as much ``kappa`` as every path row through
    it can spare, so a remaining positive ``kappa_e`` sits on a tight row.
    ``beta`` drops to ``max(0, Z gamma - 1)``.  At an optimum the removed mass
    has zero cost.
    """
    cover = state.cover
    kappa = state.kappa.copy()
    if state.rows:
        S = state.row_matrix
        slack = np.asarray(S @ (cover + kappa)).reshape(-1) - 1.0
        St = S.T.tocsr()
        for e in np.flatnonzero(kappa > 0):
            through = St.indices[St.indptr[e]:St.indptr[e + 1]]
            spare = kappa[e] if len(through) == 0 else min(kappa[e], float(slack[through].min()))
            if spare > 0:
                kappa[e] -= spare
                slack[through] -= spare
    else:
        kappa[:] = 0.0
    beta = np.maximum(0.0, cover - 1.0)
    out = replace(state, kappa=kappa, beta=beta)
    for name in ("column_matrix", "row_matrix"):
        if name in state.__dict__:
            out.__dict__[name] = state.__dict__[name]
    return out


def add_column(state: MasterState, cut: TwoColorableCut) -> MasterState:
    """Append ``cut`` with ``gamma = 0``; empty or duplicate cuts leave ``state`` unchanged."""
    if cut.is_empty or len(cut.cut_edges) != state.edge_count or cut.key in state.column_keys():
        return state
    return replace(state, columns=state.columns + (cut,), gamma=np.append(state.gamma, 0.0), solved=False)


def add_row(state: MasterState, row: PathRow) -> MasterState:
    """Append ``row`` with ``psi = 0``; a row with an existing edge set is a no-op."""
    if row.key in state.row_keys():
        return state
    return replace(state, rows=state.rows + (row,), psi=np.append(state.psi, 0.0), solved=False)


__all__ = [
    "MasterError",
    "MasterState",
    "PathRow",
    "TOL_CS",
    "TOL_FEAS",
    "TOL_GAP",
    "add_column",
    "add_row",
    "complementary_slackness_violation",
    "dual_value",
    "edge_values",
    "primal_value",
    "reduce_slacks",
    "reduced_costs",
    "solve_restricted_lp",
]
