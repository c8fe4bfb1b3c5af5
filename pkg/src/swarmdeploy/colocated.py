"""Max-min leftover deployment when every UAV starts from the same ground point.

Without NFZs the optimum has every deployed UAV keep the same leftover, with
coverage intervals tiling [0, L] and batteries increasing away from the start
point. We find it by bisection on the common leftover with the greedy frontier
sweep as the inner solve: for a fixed ground order the sweep pushes the covered
prefix as far as possible, so the largest leftover at which it still reaches L
is optimal for that order.

NFZs are handled by re-running the search with the sweep's edge clamping and by
pinning candidate anchor UAVs to NFZ edges (left edge, right edge, or a pair
straddling the zone), keeping the best verified candidate.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .linedeploy import sweep
from .model import (
    COVER_TOL,
    DomainError,
    InfeasibleError,
    Nfz,
    Placement,
    Scenario,
    SolveReport,
    UavSpec,
    grounded,
    min_leftover,
)
from .numerics import bisect_max_true

BHAT_TOL = 1e-9
EXACT_SPLIT_LIMIT = 8


@dataclass
class ColocatedSolution:
    placements: list[Placement]
    bhat: float
    nfz_case: str = "none"
    probes: int = 0
    order: list[int] = field(default_factory=list)

    def report(self, runtime: float = 0.0) -> SolveReport:
        return SolveReport(
            placements=sorted(self.placements, key=lambda p: p.uav_id),
            bhat=self.bhat,
            algorithm="colocated",
            iterations=self.probes,
            runtime=runtime,
            extra={"nfz_case": self.nfz_case, "order": list(self.order)},
        )


def _origin(scenario: Scenario) -> tuple[float, float]:
    first = scenario.uavs[0]
    for u in scenario.uavs:
        if u.x != first.x or u.y != first.y:
            raise DomainError("colocated solver needs every UAV to start at the same ground point")
    return first.x, first.y


def _by_battery(uavs):
    return sorted(uavs, key=lambda u: (u.battery, u.id))


def _split_order(left: Sequence[UavSpec], right: Sequence[UavSpec]) -> list[UavSpec]:
    """Ground order for a split: batteries grow away from the start point on both sides."""
    return _by_battery(left)[::-1] + _by_battery(right)


def _splits(uavs: Sequence[UavSpec], x0: float, length: float):
    """Candidate assignments of UAVs to the left and right of an interior start point."""
    if x0 <= 0:
        yield (), tuple(uavs)
        return
    if x0 >= length:
        yield tuple(uavs), ()
        return
    ranked = _by_battery(uavs)
    n = len(ranked)
    if n <= EXACT_SPLIT_LIMIT:
        seen = set()
        for mask in range(1 << n):
            left = tuple(u for k, u in enumerate(ranked) if mask >> k & 1)
            right = tuple(u for k, u in enumerate(ranked) if not mask >> k & 1)
            key = (tuple(u.battery for u in left), tuple(u.battery for u in right))
            if key not in seen:
                seen.add(key)
                yield left, right
        return
    # too many subsets: spread each side's share evenly over the battery ranking
    for k in range(n + 1):
        picks = {round(j * n / k + n / (2 * k) - 0.5) for j in range(k)} if k else set()
        left = tuple(u for j, u in enumerate(ranked) if j in picks)
        right = tuple(u for j, u in enumerate(ranked) if j not in picks)
        yield left, right


def _best_for_order(scenario, order, nfzs, pins=None, floor=0.0, ceiling=None):
    """Largest leftover the greedy sweep supports in this order, or None if below ``floor``."""
    model, length = scenario.model, scenario.length
    top = min(u.battery for u in order) if ceiling is None else ceiling

    def ok(b):
        return sweep(model, order, b, length, nfzs, pins=pins).feasible

    if not ok(floor):
        return None
    return bisect_max_true(ok, floor, top, tol=BHAT_TOL)


def _finish(scenario, order, bhat, nfzs, pins=None) -> list[Placement]:
    outcome = sweep(scenario.model, order, bhat, scenario.length, nfzs, pins=pins)
    assert outcome.feasible
    return outcome.placements


def _search_splits(scenario, x0, nfzs, ceiling=None):
    best = None
    probes = 0
    for left, right in _splits(scenario.uavs, x0, scenario.length):
        order = _split_order(left, right)
        floor = 0.0 if best is None else best[0]
        if best is not None and not sweep(
            scenario.model, order, best[0] + BHAT_TOL, scenario.length, nfzs
        ).feasible:
            probes += 1
            continue
        found = _best_for_order(scenario, order, nfzs, floor=floor, ceiling=ceiling)
        if found is None:
            probes += 1
            continue
        bhat, used = found
        probes += used
        if best is None or bhat > best[0]:
            best = (bhat, order)
    return best, probes


def _solution(scenario, order, bhat, nfzs, probes, pins=None, label=None):
    placements = _finish(scenario, order, bhat, nfzs, pins)
    placements = sorted(placements, key=lambda p: (not p.deployed, p.x_final, p.uav_id))
    deployed = [p for p in placements if p.deployed]
    if label is None:
        label = _describe_case(deployed, scenario.nfzs, scenario.length)
    return ColocatedSolution(
        placements=placements,
        bhat=min_leftover(placements),
        nfz_case=label,
        probes=probes,
        order=[u.id for u in order],
    )


def solve_equal_leftover(scenario: Scenario, ignore_nfz: bool = False) -> ColocatedSolution:
    """Optimal colocated deployment; NFZs are taken into account unless ``ignore_nfz``."""
    x0, _ = _origin(scenario)
    if scenario.length == 0:
        placements = [grounded(u) for u in _by_battery(scenario.uavs)]
        return ColocatedSolution(placements, min_leftover(placements))
    best, probes = _search_splits(scenario, x0, ())
    if best is None:
        raise InfeasibleError(
            f"{scenario.n} UAVs cannot cover [0, {scenario.length}] even when spending every battery"
        )
    bhat, order = best
    solution = _solution(scenario, order, bhat, (), probes, label="none")
    if ignore_nfz or not scenario.nfzs:
        return solution
    return refine_with_nfz(solution, scenario)


def _active_nfzs(scenario):
    return [z for z in scenario.nfzs if z.right > 0 and z.left < scenario.length]


def _pin_options(order, zone):
    yield None
    n = len(order)
    for i in range(n):
        yield (f"case1({i + 1})", {order[i].id: zone.left})
        yield (f"case2({i + 1})", {order[i].id: zone.right})
        if i > 0:
            yield (f"case3({i},{i + 1})", {order[i - 1].id: zone.left, order[i].id: zone.right})


def refine_with_nfz(solution: ColocatedSolution, scenario: Scenario) -> ColocatedSolution:
    """Adjust an NFZ-free colocated solution so no UAV hovers inside an NFZ."""
    nfzs = _active_nfzs(scenario)
    if not any(z.contains(p.x_final) for p in solution.placements if p.deployed for z in nfzs):
        return solution
    x0, _ = _origin(scenario)
    ceiling = solution.bhat
    best, probes = _search_splits(scenario, x0, scenario.nfzs, ceiling=ceiling)
    if best is None:
        raise InfeasibleError("no deployment avoids the NFZs while covering the interval")
    bhat, order = best
    winner = (bhat, None, None)

    # anchor pins: confirm no edge assignment beats the clamped sweep
    for combo in itertools.product(*[list(_pin_options(order, z)) for z in nfzs]):
        chosen = [c for c in combo if c is not None]
        if not chosen:
            continue
        pins = {}
        clash = False
        for _, mapping in chosen:
            for uid, edge in mapping.items():
                if uid in pins:
                    clash = True
                pins[uid] = edge
        if clash:
            continue
        probes += 1
        target = winner[0] + BHAT_TOL
        if target > ceiling or not sweep(
            scenario.model, order, target, scenario.length, scenario.nfzs, pins=pins
        ).feasible:
            continue
        found = _best_for_order(scenario, order, scenario.nfzs, pins=pins, floor=target, ceiling=ceiling)
        if found is None:
            continue
        value, used = found
        probes += used
        if value > winner[0]:
            winner = (value, pins, ";".join(label for label, _ in chosen))
    bhat, pins, label = winner
    return _solution(scenario, order, bhat, scenario.nfzs, probes, pins=pins, label=label)


def _describe_case(deployed: Sequence[Placement], nfzs: Sequence[Nfz], length: float) -> str:
    """Name the NFZ configuration of a deployment by which UAVs sit on zone edges."""
    labels = []
    for z in nfzs:
        if z.right <= 0 or z.left >= length:
            continue
        at_left = [k + 1 for k, p in enumerate(deployed) if abs(p.x_final - z.left) <= COVER_TOL]
        at_right = [k + 1 for k, p in enumerate(deployed) if abs(p.x_final - z.right) <= COVER_TOL]
        if at_left and at_right:
            labels.append(f"case3({at_left[-1]},{at_right[0]})")
        elif at_left:
            labels.append(f"case1({at_left[-1]})")
        elif at_right:
            labels.append(f"case2({at_right[0]})")
    return ";".join(labels) if labels else "none"


def solve_colocated(scenario: Scenario) -> SolveReport:
    start = time.perf_counter()
    solution = solve_equal_leftover(scenario)
    return solution.report(time.perf_counter() - start)
