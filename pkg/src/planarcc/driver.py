"""Column-and-row generation loop with anytime bounds, and the benchmark harness."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import (GAP_THRESHOLDS, MU_GRID, BoundsRecord, lower_bound, normalized_gap,
                     round_upper_bound)
from .instance import MulticutLabeling, ProblemInstance, synthetic_instance
from .master import (MasterState, PathRow, edge_values, reduce_slacks, solve_restricted_lp)
from .oracle import ORACLE_METHODS, TwoColorableCut, isolating_cuts
from .separation import compute_nu, most_violated_column, shortest_violated_path, widest_path

log = logging.getLogger(__name__)

VARIANTS = ("widest_path", "naive")
CONVERGED = "converged"
CONVERGED_AT_TOLERANCE = "converged_at_tolerance"
ITERATION_CAP = "iteration_cap"
TIME_CAP = "time_cap"
PAIR_LADDER = (28, 58, 208, 308, 408, 508)


@dataclass(frozen=True)
class SolverConfig:
    variant: str = "widest_path"
    max_iterations: int = 500
    time_limit: float = 600.0
    tol_col: float = 1e-6
    tol_path: float = 1e-6
    tol_gap: float = 1e-7
    mu_grid: tuple[float, ...] = MU_GRID
    seed: int = 0
    bound_stride: int = 1
    oracle_method: str = "gadget"

    def __post_init__(self):
        object.__setattr__(self, "mu_grid", tuple(float(m) for m in self.mu_grid))
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.time_limit > 0:
            raise ValueError("time_limit must be positive")
        if min(self.tol_col, self.tol_path, self.tol_gap) <= 0:
            raise ValueError("tolerances must be positive")
        if not self.mu_grid or any(not 0 < m < 1 for m in self.mu_grid):
            raise ValueError("mu_grid values must lie strictly between 0 and 1")
        if self.bound_stride < 1:
            raise ValueError("bound_stride must be at least 1")
        if self.oracle_method not in ORACLE_METHODS:
            raise ValueError(f"oracle_method must be one of {ORACLE_METHODS}")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    elapsed: float
    lp_objective: float
    dual_objective: float
    columns: int
    rows: int
    oracle_value: float
    lower_candidate: float
    upper: float
    lower: float
    added_columns: int = 0
    added_rows: int = 0
    # largest breach of 0 <= lam <= -theta_minus and S^T psi <= theta_plus
    box_violation: float = 0.0

    @property
    def gap(self) -> float:
        return normalized_gap(self.upper, self.lower)


@dataclass(frozen=True, eq=False)
class SolveReport:
    labeling: MulticutLabeling
    upper: float
    lower: float
    trace: tuple[IterationRecord, ...]
    termination: str
    state: MasterState = field(repr=False)
    edge_values: np.ndarray = field(repr=False)
    config: SolverConfig = field(repr=False)

    @property
    def converged(self) -> bool:
        return self.termination in (CONVERGED, CONVERGED_AT_TOLERANCE)

    @property
    def gap(self) -> float:
        return normalized_gap(self.upper, self.lower)

    @property
    def iterations(self) -> int:
        return len(self.trace)


def _singletons(instance: ProblemInstance) -> tuple[MulticutLabeling, float]:
    labeling = MulticutLabeling.from_components(instance.graph, np.arange(instance.graph.node_count))
    return labeling, labeling.cost(instance.theta)


def _box_violation(instance: ProblemInstance, state: MasterState) -> float:
    parts = [0.0, -state.lam, state.lam + instance.theta_minus, state.row_load - instance.theta_plus]
    if state.psi.size:
        parts.append(-state.psi)
    return float(max(np.max(p, initial=0.0) for p in parts))


def solve(instance: ProblemInstance, config: SolverConfig = SolverConfig(),
          callback: Callable[[IterationRecord], None] | None = None) -> SolveReport:
    """Alternate restricted LP solves with column and row separation until nothing is violated."""
    graph, pairs = instance.graph, instance.pairs
    widest = config.variant == "widest_path"
    start = time.perf_counter()
    record = BoundsRecord()
    # every node on its own separates every pair
    record.offer_upper(_singletons(instance))
    columns: list[TwoColorableCut] = []
    rows: list[PathRow] = []
    column_keys: set[bytes] = set()
    row_keys: set[tuple[int, ...]] = set()
    trace: list[IterationRecord] = []
    state: MasterState | None = None
    X = np.zeros(graph.edge_count)
    tight = False
    termination = ITERATION_CAP

    for it in range(1, config.max_iterations + 1):
        state = solve_restricted_lp(instance, columns, rows, warm_start=state, tight=tight)
        elapsed = time.perf_counter() - start
        reduced = reduce_slacks(state)
        X = edge_values(reduced)

        cut, oracle_value = most_violated_column(instance, state, config.oracle_method)
        lb = lower_bound(instance, state.lam, state.psi, rows, oracle_value=oracle_value)
        record.offer_lower(lb)
        if (it - 1) % config.bound_stride == 0:
            record.offer_upper(round_upper_bound(instance, X, config.mu_grid))

        new_columns = []
        if oracle_value < -config.tol_col:
            for col in isolating_cuts(graph, cut):
                if not col.is_empty and col.key not in column_keys:
                    column_keys.add(col.key)
                    new_columns.append(col)

        new_rows = []
        violated_path = False
        nu = compute_nu(instance, state) if widest else None
        for i, pair in enumerate(pairs):
            candidates = []
            if widest:
                found = widest_path(graph, nu, pair, i)
                if found is not None:
                    candidates.append(found[0])
            short = shortest_violated_path(graph, X, pair, i, config.tol_path)
            if short is not None:
                violated_path = True
                candidates.append(short)
            for row in candidates:
                if row.key not in row_keys:
                    row_keys.add(row.key)
                    new_rows.append(row)

        entry = IterationRecord(it, elapsed, state.primal_objective, state.dual_objective, len(columns),
                                len(rows), oracle_value, lb, record.upper_cost, record.best_lower,
                                len(new_columns), len(new_rows), _box_violation(instance, state))
        trace.append(entry)
        record.stamp(elapsed)
        log.debug("iter %d lp=%.6g oracle=%.3g ub=%.6g lb=%.6g +cols=%d +rows=%d", it,
                  state.primal_objective, oracle_value, entry.upper, entry.lower,
                  len(new_columns), len(new_rows))
        if callback is not None:
            callback(entry)

        if oracle_value >= -config.tol_col and not violated_path:
            termination = CONVERGED
            break
        if not new_columns and not new_rows:
            if tight:
                termination = CONVERGED_AT_TOLERANCE
                break
            # nothing new but still violated: re-solve once with tighter tolerances
            tight = True
        columns.extend(new_columns)
        rows.extend(new_rows)
        if time.perf_counter() - start > config.time_limit:
            termination = TIME_CAP
            break

    record.offer_upper(round_upper_bound(instance, X, config.mu_grid))
    labeling, upper = record.best_upper
    log.info("%s after %d iterations: ub=%.6g lb=%.6g", termination, len(trace), upper, record.best_lower)
    return SolveReport(labeling, upper, record.best_lower, tuple(trace), termination,
                       reduce_slacks(state), X, config)


@dataclass(frozen=True)
class BenchRow:
    name: str
    pair_count: int
    variant: str
    termination: str
    iterations: int
    elapsed: float
    upper: float
    lower: float
    reference_lower: float
    final_gap: float
    time_to: dict[float, float | None]


@dataclass(frozen=True)
class BenchResult:
    rows: tuple[BenchRow, ...]
    thresholds: tuple[float, ...]
    gap_series: dict[tuple[str, str], tuple[tuple[float, float], ...]]

    @property
    def variants(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.variant for r in self.rows))

    def _select(self, variant: str, pair_count: int | None) -> list[BenchRow]:
        return [r for r in self.rows if r.variant == variant
                and (pair_count is None or r.pair_count == pair_count)]

    def converged_fraction(self, variant: str) -> float:
        rows = self._select(variant, None)
        return sum(r.termination in (CONVERGED, CONVERGED_AT_TOLERANCE) for r in rows) / len(rows)

    def solved_proportion(self, variant: str, threshold: float, pair_count: int | None = None) -> float:
        rows = self._select(variant, pair_count)
        return sum(r.time_to[threshold] is not None for r in rows) / len(rows) if rows else 0.0

    def curve(self, variant: str, threshold: float, pair_count: int | None = None
              ) -> tuple[tuple[float, float], ...]:
        """Step points ``(time, proportion solved to the threshold by that time)``."""
        rows = self._select(variant, pair_count)
        times = sorted(r.time_to[threshold] for r in rows if r.time_to[threshold] is not None)
        return tuple((t, (k + 1) / len(rows)) for k, t in enumerate(times))

    def pair_counts(self) -> tuple[int, ...]:
        return tuple(sorted({r.pair_count for r in self.rows}))


def _time_to(series: Sequence[tuple[float, float]], threshold: float) -> float | None:
    for t, gap in series:
        if gap <= threshold:
            return t
    return None


def bench(instances: Sequence[tuple[str, ProblemInstance]], configs: Sequence[SolverConfig] | None = None,
          thresholds: Sequence[float] = GAP_THRESHOLDS) -> BenchResult:
    """Run every configuration on every instance and measure GAP against the best lower bound."""
    if not instances:
        raise ValueError("bench needs at least one instance")
    if configs is None:
        configs = (SolverConfig(variant="widest_path"), SolverConfig(variant="naive"))
    thresholds = tuple(thresholds)
    rows: list[BenchRow] = []
    series: dict[tuple[str, str], tuple[tuple[float, float], ...]] = {}
    for name, instance in instances:
        reports: dict[str, SolveReport | Exception] = {}
        for config in configs:
            try:
                reports[config.variant] = solve(instance, config)
            except Exception as exc:  # recorded, the suite goes on
                log.warning("instance %s variant %s failed: %s", name, config.variant, exc)
                reports[config.variant] = exc
        lowers = [r.lower for r in reports.values() if isinstance(r, SolveReport)]
        best_lb = max(lowers) if lowers else -math.inf
        for variant, report in reports.items():
            if isinstance(report, Exception):
                rows.append(BenchRow(name, len(instance.pairs), variant, f"error: {report}", 0, math.nan,
                                     math.inf, -math.inf, best_lb, math.inf, {t: None for t in thresholds}))
                continue
            gaps = tuple((e.elapsed, normalized_gap(e.upper, best_lb)) for e in report.trace)
            series[(name, variant)] = gaps
            rows.append(BenchRow(name, len(instance.pairs), variant, report.termination, report.iterations,
                                 report.trace[-1].elapsed, report.upper, report.lower, best_lb,
                                 normalized_gap(report.upper, best_lb),
                                 {t: _time_to(gaps, t) for t in thresholds}))
    return BenchResult(tuple(rows), thresholds, series)


def synthetic_suite(count: int, seed: int = 0, rows: int = 5, cols: int = 5, noise: float = 0.3,
                    pair_counts: Sequence[int] = PAIR_LADDER) -> list[tuple[str, ProblemInstance]]:
    """``count`` generated instances cycling through ``pair_counts``."""
    suite = []
    for k in range(count):
        pairs = pair_counts[k % len(pair_counts)]
        instance, _ = synthetic_instance(seed + k, rows, cols, noise, pairs)
        suite.append((f"syn{k:03d}_r{rows}c{cols}_p{pairs}_s{seed + k}", instance))
    return suite


__all__ = [
    "BenchResult",
    "BenchRow",
    "CONVERGED",
    "CONVERGED_AT_TOLERANCE",
    "ITERATION_CAP",
    "IterationRecord",
    "PAIR_LADDER",
    "SolveReport",
    "SolverConfig",
    "TIME_CAP",
    "VARIANTS",
    "bench",
    "solve",
    "synthetic_suite",
]
