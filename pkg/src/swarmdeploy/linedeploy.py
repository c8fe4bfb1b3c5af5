"""Deployment from distinct ground locations: greedy feasibility sweep plus grid search on B_hat."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .model import (
    COVER_TOL,
    CoverageModel,
    DomainError,
    InfeasibleError,
    Nfz,
    Placement,
    Scenario,
    SolveReport,
    UavSpec,
    grounded,
    inverse_radius,
    make_placement,
    min_leftover,
    radius,
)
from .reach import Reach, best_reach, fixed_reach

B_LOW_FLOOR = 1e-3


class EmptyWindowError(DomainError):
    """The UAV's energy budget does not even cover the ascent to the requested altitude."""


@dataclass
class FeasibilityOutcome:
    feasible: bool
    placements: list[Placement]
    frontier: float


@dataclass(frozen=True)
class SearchGrid:
    """Candidate leftovers ``k * epsilon * b_low`` for ``k = 1..size``."""

    b_low: float
    b_high: float
    epsilon: float

    def __post_init__(self):
        if not 0 < self.b_low <= self.b_high:
            raise DomainError(f"need 0 < b_low <= b_high, got {self.b_low}, {self.b_high}")
        if not 0 < self.epsilon < 1:
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")

    @property
    def step(self) -> float:
        return self.epsilon * self.b_low

    @property
    def size(self) -> int:
        return max(1, math.ceil(self.b_high / self.step - 1e-12))

    def value(self, k: int) -> float:
        return k * self.step

    @property
    def steps(self):
        return (self.value(k) for k in range(1, self.size + 1))


def reach_window(uav: UavSpec, bhat: float, h: float, model: CoverageModel) -> tuple[float, float]:
    """Leftmost and rightmost target points the UAV can cover at altitude ``h`` keeping ``bhat``."""
    budget = (uav.battery - bhat) / model.c
    if budget <= 0 or budget < h:
        raise EmptyWindowError(
            f"UAV {uav.id}: budget {budget:.6g} cannot cover ascent to h = {h}"
        )
    r = radius(model, h)
    spread = (budget - h) / model.w
    return uav.x - spread - r, uav.x + spread + r


def max_reach(
    uav: UavSpec, bhat: float, frontier: float, nfzs: Sequence[Nfz], model: CoverageModel
) -> Optional[Reach]:
    """Placement extending the covered prefix ``[0, frontier]`` furthest, or None to skip the UAV."""
    return best_reach(model, uav.x, uav.y, (uav.battery - bhat) / model.c, frontier, nfzs)


def advance(
    model: CoverageModel,
    uavs: Sequence[UavSpec],
    bhat: float,
    target: float,
    nfzs: Sequence[Nfz] = (),
    frontier: float = 0.0,
    pins: Optional[Mapping[int, float]] = None,
) -> tuple[list[Placement], float, bool]:
    """Greedy left-to-right sweep over ``uavs`` in the given order.

    UAVs named in ``pins`` must hover at the pinned ground coordinate; a pinned
    UAV that cannot touch the frontier from there breaks the sweep (third item
    False). Once the frontier reaches ``target`` the remaining UAVs stay
    grounded. Returns ``(placements, frontier, ok)``.
    """
    placements = []
    ok = True
    for uav in uavs:
        if frontier >= target - COVER_TOL or not ok:
            placements.append(grounded(uav))
            continue
        budget = (uav.battery - bhat) / model.c
        if pins and uav.id in pins:
            spot = fixed_reach(model, uav.x, uav.y, budget, frontier, pins[uav.id], require_extend=False)
            ok = spot is not None
        else:
            spot = best_reach(model, uav.x, uav.y, budget, frontier, nfzs)
        if spot is None:
            placements.append(grounded(uav))
            continue
        placements.append(make_placement(model, uav, spot.x, spot.y, spot.h))
        frontier = max(frontier, spot.right)
    return placements, frontier, ok


def sweep(
    model: CoverageModel,
    uavs: Sequence[UavSpec],
    bhat: float,
    target: float,
    nfzs: Sequence[Nfz] = (),
    frontier: float = 0.0,
    pins: Optional[Mapping[int, float]] = None,
) -> FeasibilityOutcome:
    """Feasibility of covering ``[frontier, target]`` with the greedy sweep (see ``advance``)."""
    placements, frontier, ok = advance(model, uavs, bhat, target, nfzs, frontier, pins)
    feasible = ok and frontier >= target - COVER_TOL
    return FeasibilityOutcome(feasible, placements if feasible else [], frontier)


def base_order(uavs: Sequence[UavSpec]) -> list[UavSpec]:
    """Ascending initial x, ties broken by ascending battery then id."""
    return sorted(uavs, key=lambda u: (u.x, u.battery, u.id))


def check_feasible(
    scenario: Scenario, bhat: float, order: Optional[Sequence[UavSpec]] = None
) -> FeasibilityOutcome:
    if bhat > min(u.battery for u in scenario.uavs):
        # a grounded UAV keeps its battery, so no UAV may start below the target
        return FeasibilityOutcome(False, [], 0.0)
    uavs = base_order(scenario.uavs) if order is None else list(order)
    return sweep(scenario.model, uavs, bhat, scenario.length, scenario.nfzs)


def search_bounds(
    scenario: Scenario, epsilon: float = 1e-3, b_low_floor: float = B_LOW_FLOOR
) -> SearchGrid:
    model = scenario.model
    L, n = scenario.length, scenario.n
    batteries = [u.battery for u in scenario.uavs]
    B = max(batteries)
    if L == 0:
        b_high = B
    else:
        try:
            b_high = B - model.c * inverse_radius(model, L / (2 * n))
        except DomainError:
            b_high = B - model.c * model.h_star
    b_high = min(max(b_high, b_low_floor), B)

    candidates = []
    for i, u in enumerate(scenario.uavs):
        span = max(abs(u.x), abs(L - u.x))
        try:
            h = inverse_radius(model, span)
        except DomainError:
            continue
        others = [b for j, b in enumerate(batteries) if j != i]
        value = u.battery - model.c * (model.w * span + h)
        candidates.append(min([value] + others))
    b_low = max(candidates, default=b_low_floor)
    if b_low <= 0:
        b_low = b_low_floor
    b_low = max(min(b_low, b_high), b_low_floor) if b_low_floor <= b_high else b_high
    return SearchGrid(b_low, b_high, epsilon)


def grid_search(grid: SearchGrid, feasible: Callable[[float], bool], lo: int = 1) -> tuple[int, int]:
    """Largest grid index ``k >= lo`` with ``feasible(grid.value(k))``; ``lo`` must be feasible.

    Returns ``(k, probes)``.
    """
    hi = grid.size + 1
    probes = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        probes += 1
        if feasible(grid.value(mid)):
            lo = mid
        else:
            hi = mid
    return lo, probes


def solve_order(
    scenario: Scenario,
    order: Sequence[UavSpec],
    epsilon: float,
    grid: Optional[SearchGrid] = None,
    b_low_floor: float = B_LOW_FLOOR,
) -> SolveReport:
    """Grid search on B_hat with the greedy sweep run in a fixed deployment order."""
    start = time.perf_counter()
    if grid is None:
        grid = search_bounds(scenario, epsilon, b_low_floor)

    def feasible(b):
        return check_feasible(scenario, b, order).feasible

    if scenario.length == 0:
        return _grounded_report(scenario, "line-grid", epsilon, start)
    if not feasible(grid.value(1)):
        raise InfeasibleError(
            f"even B_hat = {grid.value(1):.6g} Wh is infeasible: the swarm cannot cover [0, {scenario.length}]"
        )
    k, probes = grid_search(grid, feasible)
    outcome = check_feasible(scenario, grid.value(k), order)
    placements = sorted(outcome.placements, key=lambda p: p.uav_id)
    return SolveReport(
        placements=placements,
        bhat=min_leftover(placements),
        algorithm="line-grid",
        epsilon=epsilon,
        iterations=probes + 1,
        runtime=time.perf_counter() - start,
        extra={
            "grid_bhat": grid.value(k),
            "grid_index": k,
            "b_low": grid.b_low,
            "b_high": grid.b_high,
            "order": [u.id for u in order],
        },
    )


def solve_line(
    scenario: Scenario, epsilon: float = 1e-3, b_low_floor: float = B_LOW_FLOOR
) -> SolveReport:
    """(1 - epsilon)-approximate deployment for equal batteries from distinct locations."""
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    batteries = {u.battery for u in scenario.uavs}
    if len(batteries) > 1:
        raise DomainError("solve_line needs equal batteries; use permheur.solve_kappa otherwise")
    return solve_order(scenario, base_order(scenario.uavs), epsilon, b_low_floor=b_low_floor)


def _grounded_report(scenario, algorithm, epsilon, start):
    placements = [grounded(u) for u in sorted(scenario.uavs, key=lambda u: u.id)]
    return SolveReport(
        placements=placements,
        bhat=min_leftover(placements),
        algorithm=algorithm,
        epsilon=epsilon,
        runtime=time.perf_counter() - start,
    )
