"""Scenario generators and parameter sweeps behind the ``bench`` and ``sweep`` commands."""

from __future__ import annotations

import gc
import random
import time
from typing import Optional

from .colocated import solve_equal_leftover
from .deploy3d import solve_3d, split_scenario
from .linedeploy import check_feasible, solve_line
from .model import CoverageModel, InfeasibleError, Nfz, Scenario, UavSpec
from .permheur import enumerate_orders, solve_kappa

FIG7_COLUMNS = ("n", "bhat_no_nfz", "bhat_nfz")
FIG8_COLUMNS = ("n", "epsilon", "bhat", "probes", "wall_ms")
FIG9_COLUMNS = ("instance", "kappa", "bhat", "orders")
FIG10_COLUMNS = ("left_count", "bhat")

DEFAULT_NFZ = (10.0, 13.0)
# a 3 km zone cannot be bridged when r(h_star) = sqrt(2); this turning point never binds at L = 20
FIG7_MODEL = CoverageModel(h_star=20.0)


def colocated_fleet(n: int, length: float = 20.0, battery: float = 780.0, nfzs=(), model=None) -> Scenario:
    return Scenario(length, [UavSpec(i + 1, 0.0, battery) for i in range(n)], nfzs, model or CoverageModel())


def spread_fleet(
    n: int, length: float = 20.0, battery: float = 780.0, rng: Optional[random.Random] = None, jitter: float = 0.25
) -> Scenario:
    """Equal-battery UAVs near evenly spaced points of ``[0, length]``."""
    gap = length / n
    xs = []
    for i in range(n):
        shift = rng.uniform(-jitter, jitter) * gap if rng is not None else 0.0
        xs.append(min(max((i + 0.5) * gap + shift, 0.0), length))
    return Scenario(length, [UavSpec(i + 1, x, battery) for i, x in enumerate(xs)])


def mixed_fleet(
    rng: random.Random,
    n: int = 6,
    length: float = 14.0,
    battery_range: tuple[float, float] = (700.0, 800.0),
    nfz_prob: float = 0.0,
) -> Scenario:
    """Random positions and batteries; redrawn until the base order is feasible at a tiny leftover."""
    while True:
        uavs = [
            UavSpec(i + 1, round(rng.uniform(0, length), 3), round(rng.uniform(*battery_range), 1))
            for i in range(n)
        ]
        nfzs = ()
        if rng.random() < nfz_prob:
            left = round(rng.uniform(0.2, 0.7) * length, 3)
            nfzs = (Nfz(left, round(left + rng.uniform(0.3, 1.5), 3)),)
        scenario = Scenario(length, uavs, nfzs)
        if check_feasible(scenario, 1e-3).feasible:
            return scenario


def fig7_rows(
    n_min: int = 8,
    n_max: int = 16,
    nfz: tuple[float, float] = DEFAULT_NFZ,
    length: float = 20.0,
    model: CoverageModel = FIG7_MODEL,
):
    rows = []
    for n in range(n_min, n_max + 1):
        plain = solve_equal_leftover(colocated_fleet(n, length, model=model)).bhat
        try:
            fleet = colocated_fleet(n, length, nfzs=(Nfz(*nfz),), model=model)
            with_nfz = solve_equal_leftover(fleet).bhat
        except InfeasibleError:
            with_nfz = float("nan")
        rows.append((n, plain, with_nfz))
    return rows


def fig8_rows(
    ns=(8, 16, 32, 64), epsilons=(1e-1, 1e-2, 1e-3), seed: int = 0, repeats: int = 5, length: float = 20.0
):
    """Time solve_line per (n, epsilon), keeping the fastest of ``repeats`` runs.

    Each repeat cycles through every cell so slow drift of the machine's clock
    speed affects all cells alike. Garbage collection is paused while timing.
    """
    scenarios = {n: spread_fleet(n, length, rng=random.Random(seed * 1000 + n)) for n in ns}
    cells = [(n, eps) for n in ns for eps in epsilons]
    best = dict.fromkeys(cells, float("inf"))
    reports = {}
    collecting = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repeats):
            for n, eps in cells:
                start = time.perf_counter()
                reports[n, eps] = solve_line(scenarios[n], eps)
                best[n, eps] = min(best[n, eps], time.perf_counter() - start)
    finally:
        if collecting:
            gc.enable()
    return [(n, eps, reports[n, eps].bhat, reports[n, eps].iterations, best[n, eps] * 1e3) for n, eps in cells]


def fig9_rows(
    instances: int = 20, n: int = 6, kappas=(0, 1, 2, 3), seed: int = 0, epsilon: float = 1e-3, nfz_prob: float = 0.0
):
    rng = random.Random(seed)
    rows = []
    for k in range(instances):
        scenario = mixed_fleet(rng, n, nfz_prob=nfz_prob)
        for kappa in kappas:
            report = solve_kappa(scenario, kappa, epsilon)
            rows.append((k, kappa, report.bhat, len(enumerate_orders(n, kappa))))
    return rows


def fig10_rows(
    n: int = 10,
    length: float = 20.0,
    station_left=(0.0, 0.0),
    station_right=(20.0, 0.0),
    battery: float = 780.0,
    epsilon: float = 1e-3,
):
    rows = []
    for k in range(1, n):
        scenario = split_scenario(length, station_left, station_right, [battery] * n, k)
        rows.append((k, solve_3d(scenario, epsilon).bhat))
    return rows
