"""End-to-end acceptance checks, one test per criterion, each reporting a PASS/FAIL line."""

import itertools
import json
import random
import time

from swarmdeploy import (
    CoverageModel,
    GridSpec,
    InfeasibleError,
    Nfz,
    Scenario,
    UavSpec,
    brute_force,
    partition_scenario,
    solve_3d,
    solve_colocated,
    solve_equal_leftover,
    solve_kappa,
    solve_line,
)
from swarmdeploy.cli import main
from swarmdeploy.deploy3d import Scenario3d, split_scenario
from swarmdeploy.experiments import fig7_rows, fig8_rows, fig10_rows, mixed_fleet
from swarmdeploy.linedeploy import base_order, check_feasible
from swarmdeploy.model import validate_placements

M = CoverageModel()


def fleet(batteries, x=0.0):
    return [UavSpec(i + 1, x, b) for i, b in enumerate(batteries)]


def regular(sol, model=M):
    return all(p.deployed and 0.0101 < p.altitude < model.h_star - 1e-6 for p in sol.placements)


def colocated_suite(count=100, seed=2024):
    """Random feasible colocated instances (n <= 10) whose optimum is unaffected by the altitude cap."""
    rng = random.Random(seed)
    out = []
    rejected = 0
    while len(out) < count:
        n = rng.randint(1, 10)
        equal = rng.random() < 0.4
        batteries = [780.0] * n if equal else [round(rng.uniform(700, 850), 1) for _ in range(n)]
        length = rng.uniform(0.3, 0.9) * 2 * n * M.r_max
        try:
            sol = solve_equal_leftover(Scenario(length, fleet(batteries)))
        except InfeasibleError:
            rejected += 1
            continue
        if not regular(sol):
            rejected += 1
            continue
        out.append((length, batteries, sol))
    return out, rejected


def test_criterion_01_single_uav_closed_form(verdict):
    scenario = Scenario(2.0, fleet([780.0]))
    solve_colocated(scenario)
    r = solve_colocated(scenario)
    (p,) = r.placements
    err = max(abs(r.bhat - 754.08), abs(p.x_final - 1.0), abs(p.altitude - 1.0))
    ok = abs(r.bhat - 754.08) <= 1e-6 and abs(p.x_final - 1) <= 1e-6 and abs(p.altitude - 1) <= 1e-6
    ok &= r.runtime < 0.010
    assert verdict(1, ok, f"bhat={r.bhat:.9f} max_err={err:.2e} runtime={r.runtime * 1e3:.2f}ms")


def test_criterion_02_two_uavs(verdict):
    r = solve_colocated(Scenario(2.0, fleet([780.0, 780.0])))
    got = sorted((p.x_final, p.altitude) for p in r.placements)
    want = [(0.6, 0.36), (1.6, 0.16)]
    err = max(abs(a - b) for g, w in zip(got, want) for a, b in zip(g, w))
    ok = abs(r.bhat - 769.632) <= 1e-6 and err <= 1e-6
    assert verdict(2, ok, f"bhat={r.bhat:.9f} placement_err={err:.2e}")


def test_criterion_03_equal_leftover_and_tiling(verdict):
    suite, rejected = colocated_suite()
    worst_spread = worst_gap = 0.0
    for length, batteries, sol in suite:
        deployed = sorted(sol.placements, key=lambda p: p.x_final)
        left = [p.leftover for p in deployed]
        worst_spread = max(worst_spread, (max(left) - min(left)) / min(batteries))
        spans = [p.interval for p in deployed]
        gaps = [abs(spans[0][0]), abs(spans[-1][1] - length)]
        gaps += [abs(b[0] - a[1]) for a, b in zip(spans, spans[1:])]
        worst_gap = max(worst_gap, max(gaps))
    ok = worst_spread < 1e-6 and worst_gap < 1e-6
    assert verdict(
        3, ok, f"{len(suite)} instances ({rejected} capped/infeasible skipped) "
        f"rel_spread={worst_spread:.1e} gap={worst_gap:.1e}"
    )


def test_criterion_04_ordering(verdict):
    suite, _ = colocated_suite()
    bad_x = bad_h = 0
    equal_count = 0
    for _, batteries, sol in suite:
        bat = {u.id: u.battery for u in fleet(batteries)}
        by_battery = sorted(sol.placements, key=lambda p: (bat[p.uav_id], p.x_final))
        xs = [p.x_final for p in by_battery]
        bad_x += any(b < a - 1e-9 for a, b in zip(xs, xs[1:]))
        if len(set(batteries)) == 1:
            equal_count += 1
            hs = [p.altitude for p in sorted(sol.placements, key=lambda p: p.x_final)]
            bad_h += any(b >= a for a, b in zip(hs, hs[1:]))
    ok = bad_x == 0 and bad_h == 0
    assert verdict(4, ok, f"x-order violations={bad_x}/{len(suite)} h-order violations={bad_h}/{equal_count}")


def test_criterion_05_nfz_edges(verdict):
    model = CoverageModel(h_star=20.0)
    zone = Nfz(10.0, 13.0)
    base = solve_colocated(Scenario(20.0, fleet([780.0] * 5), [zone], model))
    at_13 = any(p.deployed and abs(p.x_final - 13.0) <= 1e-6 for p in base.placements)
    raised = solve_colocated(Scenario(20.0, fleet([780.0, 780.0, 900.0, 780.0, 780.0]), [zone], model))
    xs = {p.uav_id: p.x_final for p in raised.placements if p.deployed}
    third_rightmost = xs.get(3) == max(xs.values())
    at_10 = any(abs(x - 10.0) <= 1e-6 for x in xs.values())
    ok = at_13 and third_rightmost and at_10
    base_xs = sorted(round(p.x_final, 3) for p in base.placements if p.deployed)
    raised_xs = sorted(round(x, 3) for x in xs.values())
    assert verdict(
        5, ok, f"uav_at_13={at_13} ({base_xs}) uav3_rightmost={third_rightmost} uav_at_10={at_10} ({raised_xs})"
    )


def test_criterion_06_fleet_size_trend(verdict):
    start = time.perf_counter()
    rows = fig7_rows(8, 16)
    wall = time.perf_counter() - start
    plain = [r[1] for r in rows]
    zoned = [r[2] for r in rows]
    grows = all(b >= a - 1e-9 for a, b in zip(plain, plain[1:]))
    below = all(z <= p for p, z in zip(plain, zoned))
    ok = grows and below and wall < 5.0
    assert verdict(6, ok, f"monotone={grows} nfz_below={below} sweep={wall:.2f}s")


def test_criterion_07_line_vs_oracle(verdict):
    rng = random.Random(7)
    grid = GridSpec(1e-3, 1e-3)
    slack = grid.slack(M)
    worst = float("inf")
    checked = 0
    while checked < 50:
        n = rng.randint(1, 3)
        length = round(rng.uniform(0.5, 1.6 * n), 3)
        uavs = [UavSpec(i + 1, round(rng.uniform(0, length), 3), 780.0) for i in range(n)]
        scenario = Scenario(length, uavs)
        try:
            ref = brute_force(scenario, grid).bhat
        except InfeasibleError:
            continue
        got = solve_line(scenario, 1e-3).bhat
        worst = min(worst, got - ((1 - 1e-3) * ref - slack))
        checked += 1
    ok = worst >= 0
    assert verdict(7, ok, f"{checked} instances, min margin over bound={worst:.4f} Wh")


def test_criterion_08_feasibility_monotone(verdict):
    rng = random.Random(8)
    violations = 0
    for _ in range(20):
        n = rng.randint(2, 7)
        scenario = mixed_fleet(rng, n, length=rng.uniform(0.3, 0.8) * 2 * n * M.r_max, nfz_prob=0.5)
        top = min(u.battery for u in scenario.uavs)
        for _ in range(20):
            a, b = sorted(rng.uniform(0, top) for _ in range(2))
            if check_feasible(scenario, b).feasible and not check_feasible(scenario, a).feasible:
                violations += 1
    assert verdict(8, violations == 0, f"violations={violations}/400")


def test_criterion_09_runtime_trend(verdict):
    ns = (8, 16, 32, 64)
    epsilons = (1e-1, 1e-2, 1e-3)
    fig8_rows((8,), repeats=1)
    rows = fig8_rows(ns, epsilons, repeats=9)
    wall = {(r[0], r[1]): r[4] for r in rows}
    inversions = [(n, b) for n in ns for a, b in zip(epsilons, epsilons[1:]) if wall[n, a] > wall[n, b]]
    linear = all(wall[n, e] / wall[8, e] <= 1.3 * n / 8 for n in ns for e in epsilons)
    ratios = " ".join(f"{n}:{wall[n, 1e-3] / wall[8, 1e-3]:.2f}" for n in ns)
    ok = not inversions and linear
    assert verdict(9, ok, f"eps_inversions={inversions or 'none'} linear={linear} t(n)/t(8)@1e-3 {ratios}")


def test_criterion_10_kappa_trend(verdict):
    rng = random.Random(0)
    nondecreasing = True
    oracle_ok = True
    improved = 0
    for _ in range(20):
        scenario = mixed_fleet(rng, 6)
        values = [solve_kappa(scenario, k, 1e-3).bhat for k in range(4)]
        nondecreasing &= all(b >= a for a, b in zip(values, values[1:]))
        improved += values[-1] > values[0]
        full = solve_kappa(scenario, 6, 1e-3)
        # exhaustive over every order: none may clear the next grid point
        step = 1e-3 * full.extra["b_low"]
        above = full.extra["grid_bhat"] + step
        for order in itertools.permutations(base_order(scenario.uavs)):
            if check_feasible(scenario, above, list(order)).feasible:
                oracle_ok = False
                break
        oracle_ok &= full.bhat >= values[-1]
    ok = nondecreasing and oracle_ok
    assert verdict(10, ok, f"nondecreasing={nondecreasing} full_kappa_matches_exhaustive={oracle_ok} improved={improved}/20")


def test_criterion_11_station_split(verdict):
    eps = 1e-3
    rows = fig10_rows(10, 20.0, epsilon=eps)
    values = dict(rows)
    best = max(values, key=values.get)
    b_low = max(
        solve_3d(split_scenario(20.0, (0.0, 0.0), (20.0, 0.0), [780.0] * 10, k), eps).extra["b_low"]
        for k in range(1, 10)
    )
    sym = max(abs(values[k] - values[10 - k]) for k in range(1, 10))
    ok = best == 5 and sym <= 2 * eps * b_low
    assert verdict(11, ok, f"argmax={best} bhat={values[best]:.4f} max_asymmetry={sym:.2e}")


def test_criterion_12_non_crossing(verdict):
    rng = random.Random(12)
    solved = violations = 0
    for _ in range(40):
        n = rng.randint(2, 10)
        length = rng.uniform(0.4, 0.7) * 2 * n * M.r_max
        nfzs = ()
        if rng.random() < 0.4:
            left = rng.uniform(0.3, 0.6) * length
            nfzs = (Nfz(left, left + rng.uniform(0.2, 1.0)),)
        k = rng.randint(0, n)
        scenario = Scenario3d(
            length,
            (rng.uniform(-1, 0.5), rng.uniform(-1.5, 1.5)),
            (length + rng.uniform(-0.5, 1), rng.uniform(-1.5, 1.5)),
            [UavSpec(i + 1, 0.0, round(rng.uniform(700, 850), 1)) for i in range(k)],
            [UavSpec(i + 1, 0.0, round(rng.uniform(700, 850), 1)) for i in range(k, n)],
            nfzs,
        )
        try:
            r = solve_3d(scenario, 1e-2)
        except InfeasibleError:
            continue
        solved += 1
        by_id = {p.uav_id: p for p in r.placements}
        xs = [by_id[i].x_final for i in r.extra["sequence"]]
        bad = any(b < a - 1e-12 for a, b in zip(xs, xs[1:]))
        bad |= bool(validate_placements(length, nfzs, M, r.placements, 1e-7))
        violations += bad
    assert verdict(12, violations == 0 and solved >= 20, f"{solved} solves, violations={violations}")


def test_criterion_13_partition(verdict):
    target = 700.0
    grid = GridSpec(0.005, 0.0025)
    yes = partition_scenario([1, 1, 2], target)
    no = partition_scenario([1], target)
    got_yes = brute_force(yes, grid).bhat
    got_no = brute_force(no, grid).bhat
    slack = grid.slack(M)
    ok = got_yes >= target - slack and got_no < target - slack
    assert verdict(13, ok, f"[1,1,2] -> {got_yes:.4f} Wh, [1] -> {got_no:.4f} Wh (target {target}, slack {slack:.4f})")


def _payload(text):
    """Drop wall-clock fields so only computed content is compared."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        lines = text.splitlines()
        header = lines[0].split(",")
        if "wall_ms" not in header:
            return text
        k = header.index("wall_ms")
        return [row.split(",")[:k] + row.split(",")[k + 1:] for row in lines]
    doc.get("diagnostics", {}).pop("wall_time_s", None)
    return doc


def test_criterion_14_determinism(verdict, tmp_path, capsys):
    docs = {
        "colocated": {"mode": "colocated", "length": 6, "n": 4, "nfzs": [[2.5, 3.0]]},
        "line": {"mode": "line", "length": 7, "uavs": [{"x": 1}, {"x": 3.5}, {"x": 6}]},
        "kappa": {"mode": "kappa", "length": 7, "uavs": [{"x": 1, "battery": 760}, {"x": 3.5}, {"x": 6, "battery": 800}],
                  "options": {"kappa": 3}},
        "3d": {"mode": "3d", "length": 20, "stations": {"left": [0, 1], "right": [20, -1]}, "n_left": 4, "n_right": 6},
        "oracle": {"mode": "oracle", "length": 2, "n": 2, "options": {"grid": {"dx": 0.01, "dh": 0.01}}},
    }
    commands = []
    for name, doc in docs.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        commands.append(["solve", str(path), "--seed", "5"])
    commands += [
        ["oracle", str(tmp_path / "line.json"), "--grid-dx", "0.01", "--grid-dh", "0.01"],
        ["check", str(tmp_path / "line.json"), "--leftover", "770"],
        ["bench", "--figure", "7", "--n-max", "10", "--seed", "5"],
        ["bench", "--figure", "8", "--n-max", "16", "--repeats", "1", "--seed", "5"],
        ["bench", "--figure", "9", "--instances", "3", "--seed", "5"],
        ["sweep", "--n", "6", "--length", "12", "--seed", "5"],
    ]
    differing = []
    for argv in commands:
        outputs = []
        for _ in range(2):
            main(argv)
            outputs.append(_payload(capsys.readouterr().out))
        if outputs[0] != outputs[1]:
            differing.append(" ".join(argv[:2]))
    ok = not differing
    assert verdict(14, ok, f"{len(commands)} commands, differing={differing or 'none'}")
