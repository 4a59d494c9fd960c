"""Command-line interface: ``planarcc {generate,solve,verify,bench}``.

Exit codes
    0  success (solve converged, verify passed)
    1  verify ran but a check failed
    2  bad input: flags, parse errors, size guards, empty suites
    3  solve stopped at the iteration or time cap (bounds still valid)
    4  internal error
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

from .bounds import (BRUTE_FORCE_OPT_MAX_NODES, GAP_THRESHOLDS, brute_force_optimal,
                     cyc_membership_check)
from .driver import SolveReport, SolverConfig, bench, solve
from .instance import InstanceError, read_instance, serialize_instance, synthetic_instance
from .oracle import ORACLE_METHODS

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4
VARIANT_NAMES = {"alg1": "widest_path", "alg2": "naive"}
LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
SUITE_SUFFIXES = (".inst", ".txt")

log = logging.getLogger("planarcc")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _configure_logging() -> None:
    name = os.environ.get("MULTICUT_LOG", "quiet").strip().lower()
    level = LOG_LEVELS.get(name, logging.WARNING)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("planarcc")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False
    if name not in LOG_LEVELS:
        log.warning("unknown MULTICUT_LOG=%r, using quiet", name)


def _finite(x: float) -> float | None:
    return float(x) if math.isfinite(x) else None


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _config(args) -> SolverConfig:
    return SolverConfig(variant=VARIANT_NAMES[args.variant], max_iterations=args.max_iters,
                        time_limit=args.time_limit, seed=args.seed, oracle_method=args.oracle,
                        bound_stride=args.bound_stride)


def _read(path: str):
    try:
        return read_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except InstanceError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def report_dict(report: SolveReport, source: str | None = None) -> dict:
    last = report.trace[-1]
    return {
        "instance": source,
        "variant": report.config.variant,
        "termination": report.termination,
        "converged": report.converged,
        "iterations": report.iterations,
        "elapsed": last.elapsed,
        "upper": _finite(report.upper),
        "lower": _finite(report.lower),
        "gap": _finite(report.gap),
        "component_count": report.labeling.component_count,
        "edge_cut": [int(x) for x in report.labeling.edge_cut],
        "columns": last.columns,
        "rows": last.rows,
        "config": {
            "variant": report.config.variant,
            "max_iterations": report.config.max_iterations,
            "time_limit": report.config.time_limit,
            "tol_col": report.config.tol_col,
            "tol_path": report.config.tol_path,
            "tol_gap": report.config.tol_gap,
            "mu_grid": list(report.config.mu_grid),
            "seed": report.config.seed,
            "oracle_method": report.config.oracle_method,
        },
    }


TRACE_FIELDS = ("elapsed", "upper", "lower", "gap", "columns", "rows", "iteration", "lp_objective",
                "dual_objective", "oracle_value", "added_columns", "added_rows")


def write_artifacts(report: SolveReport, out_dir: Path, source: str | None = None) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "report.json", "w") as fh:
        json.dump(report_dict(report, source), fh, indent=2)
        fh.write("\n")
    with open(out_dir / "trace.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_FIELDS)
        for e in report.trace:
            writer.writerow([repr(float(e.elapsed)), repr(float(e.upper)), repr(float(e.lower)),
                             repr(float(e.gap)), e.columns, e.rows, e.iteration, repr(float(e.lp_objective)),
                             repr(float(e.dual_objective)), repr(float(e.oracle_value)),
                             e.added_columns, e.added_rows])
    with open(out_dir / "labels.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("node", "component"))
        for node, comp in enumerate(report.labeling.component_of):
            writer.writerow((node, int(comp)))


def cmd_generate(args) -> int:
    if args.rows < 1 or args.cols < 1 or args.rows * args.cols < 2:
        raise UsageError("--rows * --cols must be at least 2")
    if not 0 <= args.noise <= 1:
        raise UsageError("--noise must lie in [0, 1]")
    if args.pairs < 0 or args.count < 1:
        raise UsageError("--pairs must be nonnegative and --count positive")
    try:
        made = [synthetic_instance(args.seed + k, args.rows, args.cols, args.noise, args.pairs)[0]
                for k in range(args.count)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.count == 1 and args.out in (None, "-"):
        sys.stdout.write(serialize_instance(made[0]))
        return EXIT_OK
    if args.out in (None, "-"):
        raise UsageError("--count > 1 needs --out DIR")
    target = Path(args.out)
    try:
        if args.count == 1:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(serialize_instance(made[0]))
            paths = [target]
        else:
            target.mkdir(parents=True, exist_ok=True)
            paths = []
            for k, inst in enumerate(made):
                path = target / f"grid{args.rows}x{args.cols}_p{args.pairs}_s{args.seed + k}.inst"
                path.write_text(serialize_instance(inst))
                paths.append(path)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}") from exc
    g = made[0].graph
    print(f"wrote {len(paths)} instance(s): nodes {g.node_count} edges {g.edge_count} "
          f"faces {g.face_count} pairs {len(made[0].pairs)} -> {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = _read(args.input)
    report = solve(instance, _config(args))
    write_artifacts(report, Path(args.out_dir), args.input)
    gap = report.gap
    print(f"{report.termination} iterations {report.iterations} upper {report.upper:.10g} "
          f"lower {report.lower:.10g} gap {gap:.6g}")
    return EXIT_OK if report.converged else EXIT_CAP


def cmd_verify(args) -> int:
    instance = _read(args.input)
    if instance.graph.node_count > BRUTE_FORCE_OPT_MAX_NODES:
        raise UsageError(f"verify needs at most {BRUTE_FORCE_OPT_MAX_NODES} nodes, "
                         f"got {instance.graph.node_count}")
    report = solve(instance, _config(args))
    _, opt = brute_force_optimal(instance)
    cyc = cyc_membership_check(instance.graph, report.edge_values)
    tol = 1e-6 * max(1.0, abs(opt))
    sandwich = report.lower <= opt + tol and opt <= report.upper + tol
    passed = sandwich and bool(cyc)
    print(f"OPT {opt:.10g}")
    print(f"UB {report.upper:.10g}")
    print(f"LB {report.lower:.10g}")
    print(f"CYC {'pass' if cyc else 'fail'}")
    print(f"termination {report.termination}")
    print(f"verdict {'pass' if passed else 'fail'}")
    return EXIT_OK if passed else EXIT_FAIL


def _threshold_label(t: float) -> str:
    exp = math.log2(t)
    return f"2^{int(exp)}" if exp.is_integer() else repr(t)


def cmd_bench(args) -> int:
    suite_dir = Path(args.suite)
    if not suite_dir.is_dir():
        raise UsageError(f"suite directory {suite_dir} does not exist")
    files = sorted(p for p in suite_dir.iterdir() if p.suffix in SUITE_SUFFIXES)
    if not files:
        raise UsageError(f"suite directory {suite_dir} has no instance files")
    try:
        thresholds = tuple(float(eval_threshold(t)) for t in args.thresholds.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --thresholds: {exc}") from exc
    instances = [(p.stem, _read(str(p))) for p in files]
    base = _config(args)
    configs = [SolverConfig(**{**base.__dict__, "variant": v}) for v in ("widest_path", "naive")]
    result = bench(instances, configs, thresholds)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "bench_table.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "pairs", "variant", "termination", "iterations", "elapsed", "upper",
                         "lower", "reference_lower", "final_gap"]
                        + [f"time_to_{_threshold_label(t)}" for t in thresholds])
        for r in result.rows:
            writer.writerow([r.name, r.pair_count, r.variant, r.termination, r.iterations, r.elapsed,
                             r.upper, r.lower, r.reference_lower, r.final_gap]
                            + ["" if r.time_to[t] is None else r.time_to[t] for t in thresholds])
    groups = [None] + (list(result.pair_counts()) if args.by_pairs else [])
    for t in thresholds:
        with open(out / f"curve_{_threshold_label(t)}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["pairs", "variant", "time", "proportion"])
            for group in groups:
                for variant in result.variants:
                    for time_, prop in result.curve(variant, t, group):
                        writer.writerow(["all" if group is None else group, variant, time_, prop])
    with open(out / "gap_series.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "variant", "time", "gap"])
        for (name, variant), points in result.gap_series.items():
            for time_, gap in points:
                writer.writerow([name, variant, time_, gap])
    summary = {
        "instances": len(instances),
        "thresholds": list(thresholds),
        "variants": {},
    }
    for variant in result.variants:
        entry = {"converged_fraction": result.converged_fraction(variant),
                 "solved_proportion": {_threshold_label(t): result.solved_proportion(variant, t)
                                       for t in thresholds}}
        if args.by_pairs:
            entry["by_pairs"] = {str(pc): {_threshold_label(t): result.solved_proportion(variant, t, pc)
                                           for t in thresholds} for pc in result.pair_counts()}
        summary["variants"][variant] = entry
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    for variant, entry in summary["variants"].items():
        props = " ".join(f"{k}:{v:.3f}" for k, v in entry["solved_proportion"].items())
        print(f"{variant} converged {entry['converged_fraction']:.3f} solved {props}")
    return EXIT_OK


def eval_threshold(text: str) -> float:
    """Parse ``0.125``, ``2^-3`` or ``2**-3``."""
    text = text.strip().replace("**", "^")
    if "^" in text:
        base, exp = text.split("^", 1)
        value = float(base) ** float(exp)
    else:
        value = float(text)
    if not value > 0:
        raise ValueError(f"threshold {text} must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="planarcc", description="Planar multicut solver with anytime bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write a synthetic grid instance")
    gen.add_argument("--rows", type=int, required=True)
    gen.add_argument("--cols", type=int, required=True)
    gen.add_argument("--noise", type=float, default=0.3)
    gen.add_argument("--pairs", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1, help="write COUNT instances (seeds SEED, SEED+1, ...) into --out DIR")
    gen.add_argument("--out", default=None, help="output file, or directory with --count; '-' for stdout")
    gen.set_defaults(func=cmd_generate)

    def solver_flags(p):
        p.add_argument("--variant", choices=sorted(VARIANT_NAMES), default="alg1")
        p.add_argument("--time-limit", type=_positive_float, default=600.0)
        p.add_argument("--max-iters", type=int, default=500)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--oracle", choices=ORACLE_METHODS, default="gadget")
        p.add_argument("--bound-stride", type=int, default=1)

    sol = sub.add_parser("solve", help="solve an instance and write report, trace and labels")
    sol.add_argument("--in", dest="input", required=True)
    sol.add_argument("--out-dir", required=True)
    solver_flags(sol)
    sol.set_defaults(func=cmd_solve)

    ver = sub.add_parser("verify", help="compare solver bounds with the brute-force optimum")
    ver.add_argument("--in", dest="input", required=True)
    solver_flags(ver)
    ver.set_defaults(func=cmd_verify)

    ben = sub.add_parser("bench", help="run both variants over a suite directory")
    ben.add_argument("--suite", required=True)
    ben.add_argument("--out-dir", required=True)
    ben.add_argument("--thresholds", default=",".join(repr(t) for t in GAP_THRESHOLDS))
    ben.add_argument("--by-pairs", action="store_true", help="also break curves down by pair count")
    solver_flags(ben)
    ben.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "max_iters", 1) < 1 or getattr(args, "bound_stride", 1) < 1:
            raise UsageError("--max-iters and --bound-stride must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"planarcc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:
        log.debug("internal error", exc_info=True)
        print(f"planarcc: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
