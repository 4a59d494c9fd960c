"""Multicut (correlation clustering) on planar graphs by dual column and row generation."""

from .bounds import (BoundsRecord, brute_force_optimal, cyc_membership_check, lower_bound,
                     normalized_gap, round_upper_bound)
from .driver import SolveReport, SolverConfig, bench, solve
from .instance import (EmbeddedPlanarGraph, MulticutLabeling, ProblemInstance, cycle_graph, generate_synthetic,
                       grid_graph, parse_instance, read_instance, serialize_instance, split_theta, write_instance)
from .kernels import BACKEND
from .master import MasterState, PathRow, solve_restricted_lp
from .oracle import TwoColorableCut, brute_force_two_colorable_min, isolating_cuts, planar_two_colorable_min

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundsRecord",
    "EmbeddedPlanarGraph",
    "MasterState",
    "MulticutLabeling",
    "PathRow",
    "ProblemInstance",
    "SolveReport",
    "SolverConfig",
    "TwoColorableCut",
    "bench",
    "brute_force_optimal",
    "brute_force_two_colorable_min",
    "cyc_membership_check",
    "cycle_graph",
    "generate_synthetic",
    "grid_graph",
    "isolating_cuts",
    "lower_bound",
    "normalized_gap",
    "parse_instance",
    "planar_two_colorable_min",
    "read_instance",
    "round_upper_bound",
    "serialize_instance",
    "solve",
    "solve_restricted_lp",
    "split_theta",
    "write_instance",
]
