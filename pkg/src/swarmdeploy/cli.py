"""Command-line entry point: solve scenario files and run the benchmark sweeps."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import experiments
from .colocated import solve_colocated
from .deploy3d import Scenario3d, TwoSidedSweep, solve_3d
from .files import ScenarioFile, dumps, parse_scenario, placement_doc, result_document
from .linedeploy import B_LOW_FLOOR, check_feasible, solve_line
from .model import (
    CoverageModel,
    DomainError,
    InfeasibleError,
    SolveReport,
    leftover,
    travel_distance,
    validate_placements,
)
from .oracle import GridSpec, brute_force
from .permheur import solve_kappa

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3
EXIT_TOLERANCE = 4


def _read(path: str) -> ScenarioFile:
    if path == "-":
        return parse_scenario(sys.stdin.read())
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _origins(scenario):
    if isinstance(scenario, Scenario3d):
        out = {u.id: (u, scenario.station_left) for u in scenario.left_uavs}
        out.update({u.id: (u, scenario.station_right) for u in scenario.right_uavs})
        return out
    return {u.id: (u, (u.x, u.y)) for u in scenario.uavs}


def verify(report: SolveReport, scenario, tol: float) -> list[str]:
    """Re-derive distances and leftovers from the model and re-check coverage and NFZs."""
    model = scenario.model
    problems = validate_placements(scenario.length, scenario.nfzs, model, report.placements, tol)
    origins = _origins(scenario)
    for p in report.placements:
        uav, (ox, oy) = origins[p.uav_id]
        if not p.deployed:
            if p.leftover != uav.battery:
                problems.append(f"UAV {p.uav_id}: grounded but leftover {p.leftover} != battery")
            continue
        d = travel_distance(model, ox, oy, p.x_final, p.y_final, p.altitude)
        if abs(leftover(model, uav.battery, d) - p.leftover) > tol:
            problems.append(f"UAV {p.uav_id}: leftover does not match its flight")
    if report.placements and abs(min(p.leftover for p in report.placements) - report.bhat) > tol:
        problems.append("reported bhat is not the minimum leftover")
    return problems


def _solve(sf: ScenarioFile, args) -> SolveReport:
    scenario = sf.scenario
    eps = args.epsilon if args.epsilon is not None else sf.options.get("epsilon", 1e-3)
    floor = args.b_low_floor
    if sf.mode == "colocated":
        return solve_colocated(scenario)
    if sf.mode == "line":
        return solve_line(scenario, eps, floor)
    if sf.mode == "kappa":
        kappa = args.kappa if args.kappa is not None else sf.options.get("kappa", 0)
        return solve_kappa(scenario, min(kappa, scenario.n), eps, floor)
    if sf.mode == "3d":
        return solve_3d(scenario, eps, floor)
    return brute_force(scenario, _grid(sf, args))


def _grid(sf: ScenarioFile, args) -> GridSpec:
    grid = sf.options.get("grid", {})
    dx = args.grid_dx if args.grid_dx is not None else grid.get("dx", 1e-3)
    dh = args.grid_dh if args.grid_dh is not None else grid.get("dh", 1e-3)
    return GridSpec(dx, dh)


def _finish(report: SolveReport, sf: ScenarioFile, args) -> int:
    problems = verify(report, sf.scenario, args.tol)
    doc = result_document(report, sf)
    if problems:
        doc["diagnostics"]["problems"] = problems
    _emit(dumps(doc), args.out)
    if problems:
        for line in problems:
            print(f"tolerance failure: {line}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_solve(args) -> int:
    sf = _read(args.scenario)
    return _finish(_solve(sf, args), sf, args)


def cmd_oracle(args) -> int:
    sf = _read(args.scenario)
    if isinstance(sf.scenario, Scenario3d):
        raise DomainError("the oracle handles on-line scenarios only")
    return _finish(brute_force(sf.scenario, _grid(sf, args)), sf, args)


def cmd_check(args) -> int:
    sf = _read(args.scenario)
    s = sf.scenario
    if isinstance(s, Scenario3d):
        sweeps = TwoSidedSweep(s)
        feasible = sweeps.feasible(args.leftover)
        placements = []
        if feasible:
            left, right = sweeps.deploy(args.leftover)
            placements = sorted(left + right, key=lambda p: p.uav_id)
        frontier = list(sweeps.frontiers(args.leftover))
    else:
        outcome = check_feasible(s, args.leftover)
        feasible, placements, frontier = outcome.feasible, outcome.placements, outcome.frontier
    doc = {
        "feasible": feasible,
        "frontier": frontier,
        "leftover": args.leftover,
        "placements": [placement_doc(p) for p in sorted(placements, key=lambda p: p.uav_id)],
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return v


def cmd_bench(args) -> int:
    eps = args.epsilon if args.epsilon is not None else 1e-3
    if args.figure == 7:
        model = CoverageModel(h_star=args.h_star)
        rows = experiments.fig7_rows(8, args.n_max or 16, tuple(args.nfz), model=model)
        columns = experiments.FIG7_COLUMNS
    elif args.figure == 8:
        ns = [n for n in (8, 16, 32, 64) if n <= (args.n_max or 64)]
        rows = experiments.fig8_rows(ns, seed=args.seed, repeats=args.repeats)
        columns = experiments.FIG8_COLUMNS
    else:
        rows = experiments.fig9_rows(
            args.instances, args.n or 6, tuple(range(args.kappa_max + 1)), seed=args.seed, epsilon=eps
        )
        columns = experiments.FIG9_COLUMNS
    _emit(_csv(columns, rows), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    eps = args.epsilon if args.epsilon is not None else 1e-3
    rows = experiments.fig10_rows(args.n or 10, args.length, epsilon=eps)
    _emit(_csv(experiments.FIG10_COLUMNS, rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmdeploy", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=float, help="relative error of the leftover grid search (default 1e-3)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for generated instances")
    common.add_argument("--b-low-floor", type=float, default=B_LOW_FLOOR, help="smallest grid lower bound (Wh)")
    common.add_argument("--tol", type=float, default=1e-7, help="tolerance when re-validating output")

    for name, fn, text in (
        ("solve", cmd_solve, "solve a scenario file according to its mode"),
        ("oracle", cmd_oracle, "brute-force a small on-line scenario"),
        ("check", cmd_check, "test feasibility of a leftover target"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("scenario", help="scenario JSON file, or - for stdin")
        p.add_argument("--kappa", type=int, help="order-changing degree for kappa mode")
        p.add_argument("--grid-dx", type=float, help="oracle ground step (km)")
        p.add_argument("--grid-dh", type=float, help="oracle altitude step (km)")
        if name == "check":
            p.add_argument("--leftover", type=float, required=True, help="leftover target (Wh)")
        p.set_defaults(func=fn)

    p = sub.add_parser("bench", parents=[common], help="benchmark sweeps as CSV")
    p.add_argument("--figure", type=int, choices=(7, 8, 9), required=True)
    p.add_argument("--n-max", type=int, help="largest fleet size")
    p.add_argument("--n", type=int, help="fleet size for figure 9")
    p.add_argument("--instances", type=int, default=20, help="random instances for figure 9")
    p.add_argument("--kappa-max", type=int, default=3)
    p.add_argument("--repeats", type=int, default=5, help="timing repeats for figure 8 (minimum is kept)")
    p.add_argument("--nfz", type=float, nargs=2, default=list(experiments.DEFAULT_NFZ), metavar=("LEFT", "RIGHT"))
    p.add_argument("--h-star", type=float, default=experiments.FIG7_MODEL.h_star, help="turning point for figure 7")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", parents=[common], help="station split sweep as CSV")
    p.add_argument("--figure", type=int, choices=(10,), default=10)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--length", type=float, default=20.0)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
