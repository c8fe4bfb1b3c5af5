"""Two-station deployment: UAVs launch from stations off the target line.

A hover point offset ``y'`` from the line covers the chord
``[x' - sqrt(r(h)^2 - y'^2), x' + sqrt(r(h)^2 - y'^2)]``. The left fleet
sweeps rightwards from 0 and the right fleet sweeps leftwards from L, each in
ascending battery order starting next to its own end of the line; a leftover
target is feasible when the two covered stretches meet.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from .linedeploy import B_LOW_FLOOR, SearchGrid, advance, grid_search
from .model import (
    CoverageModel,
    DomainError,
    InfeasibleError,
    Nfz,
    Placement,
    SolveReport,
    UavSpec,
    grounded,
    make_placement,
    min_leftover,
    radius,
)

MEET_TOL = 1e-9


@dataclass(frozen=True)
class Scenario3d:
    length: float
    station_left: tuple[float, float]
    station_right: tuple[float, float]
    left_uavs: tuple[UavSpec, ...]
    right_uavs: tuple[UavSpec, ...]
    nfzs: tuple[Nfz, ...] = ()
    model: CoverageModel = field(default_factory=CoverageModel)

    def __post_init__(self):
        for name in ("left_uavs", "right_uavs", "nfzs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "station_left", tuple(map(float, self.station_left)))
        object.__setattr__(self, "station_right", tuple(map(float, self.station_right)))
        if self.length < 0:
            raise DomainError(f"length must be nonnegative, got {self.length}")
        if not self.station_left[0] < self.station_right[0]:
            raise DomainError("left station must lie strictly left of the right station")
        if not self.uavs:
            raise DomainError("scenario needs at least one UAV")
        ids = [u.id for u in self.uavs]
        if len(set(ids)) != len(ids):
            raise DomainError(f"duplicate UAV ids: {ids}")
        for a, b in zip(self.nfzs, self.nfzs[1:]):
            if b.left < a.right:
                raise DomainError("NFZs must be disjoint and sorted")

    @property
    def uavs(self) -> tuple[UavSpec, ...]:
        return self.left_uavs + self.right_uavs

    @property
    def n(self) -> int:
        return len(self.uavs)


@dataclass(frozen=True)
class ChordCover:
    center_x: float
    offset_y: float
    altitude: float
    half_chord: float

    @property
    def interval(self) -> tuple[float, float]:
        return self.center_x - self.half_chord, self.center_x + self.half_chord


def chord(model: CoverageModel, h: float, y_offset: float) -> float:
    """Half-length of the target-line segment covered from altitude ``h`` at offset ``y_offset``."""
    r = radius(model, h)
    if abs(y_offset) > r:
        raise DomainError(f"offset {y_offset} exceeds coverage radius {r}: disk misses the line")
    return math.sqrt(r * r - y_offset * y_offset)


def reach_window_3d(
    uav: UavSpec,
    station: tuple[float, float],
    bhat: float,
    h: float,
    y_offset: float,
    model: CoverageModel,
) -> tuple[float, float]:
    """Extreme target-line points coverable at altitude ``h`` and hover offset ``y_offset``."""
    xs, ys = station
    ground = (uav.battery - bhat) / (model.c * model.w) - h / model.w
    lateral = abs(y_offset - ys)
    if ground < 0 or ground < lateral:
        raise DomainError(
            f"UAV {uav.id}: ground budget {ground:.6g} km cannot reach offset {y_offset} from the station"
        )
    half = chord(model, h, y_offset)
    spread = math.sqrt(ground * ground - lateral * lateral)
    return xs - spread - half, xs + spread + half


def _launch(uavs, station):
    return sorted((replace(u, x=station[0], y=station[1]) for u in uavs), key=lambda u: (u.battery, u.id))


class TwoSidedSweep:
    """Opposing greedy sweeps; the right fleet runs in mirrored coordinates ``x -> L - x``."""

    def __init__(self, scenario: Scenario3d):
        self.scenario = scenario
        L = scenario.length
        xr, yr = scenario.station_right
        self.left = _launch(scenario.left_uavs, scenario.station_left)
        self.right = _launch(scenario.right_uavs, (L - xr, yr))
        self.right_origin = {u.id: u for u in _launch(scenario.right_uavs, scenario.station_right)}
        self.mirrored_nfzs = tuple(Nfz(L - z.right, L - z.left) for z in reversed(scenario.nfzs))
        self.min_battery = min(u.battery for u in scenario.uavs)

    def _left(self, bhat, target):
        s = self.scenario
        return advance(s.model, self.left, bhat, target, s.nfzs)

    def _right(self, bhat, target):
        return advance(self.scenario.model, self.right, bhat, target, self.mirrored_nfzs)

    def frontiers(self, bhat: float) -> tuple[float, float]:
        """Covered prefix end from the left and covered suffix start from the right."""
        L = self.scenario.length
        _, fl, _ = self._left(bhat, L)
        _, fr, _ = self._right(bhat, L)
        return fl, L - fr

    def feasible(self, bhat: float) -> bool:
        if bhat > self.min_battery:
            return False
        fl, fr = self.frontiers(bhat)
        return fl >= fr - MEET_TOL

    def deploy(self, bhat: float) -> tuple[list[Placement], list[Placement]]:
        """Placements at a feasible ``bhat``; the right fleet only closes the remaining gap."""
        s = self.scenario
        L = s.length
        left, fl, _ = self._left(bhat, L)
        right = []
        if self.right:
            mirrored, _, _ = self._right(bhat, L - min(fl, L))
            for p in reversed(mirrored):
                uav = self.right_origin[p.uav_id]
                if p.deployed:
                    right.append(make_placement(s.model, uav, L - p.x_final, p.y_final, p.altitude))
                else:
                    right.append(grounded(uav))
        return left, _uncross(s.model, self.right_origin, left, right, bhat)


def _uncross(model, origins, left, right, bhat):
    """Slide the innermost right UAV onto the last left center if their order flipped.

    Its chord then still overlaps the left coverage and reaches at least as far right.
    """
    centers = [p.x_final for p in left if p.deployed]
    deployed = [k for k, p in enumerate(right) if p.deployed]
    if not centers or not deployed:
        return right
    k = deployed[0]
    p = right[k]
    edge = max(centers)
    if p.x_final >= edge:
        return right
    moved = make_placement(model, origins[p.uav_id], edge, p.y_final, p.altitude)
    if moved.leftover >= bhat - 1e-9:
        right = list(right)
        right[k] = moved
    return right


def deployment_sequence(left: list[Placement], right: list[Placement]) -> list[Placement]:
    """Deployed UAVs in deployment order: left fleet outward from 0, then right fleet left to right."""
    return [p for p in left + right if p.deployed]


def solve_3d(scenario: Scenario3d, epsilon: float = 1e-3, b_low_floor: float = B_LOW_FLOOR) -> SolveReport:
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    start = time.perf_counter()
    sweeps = TwoSidedSweep(scenario)
    b_high = max(u.battery for u in scenario.uavs)
    grid = SearchGrid(min(b_low_floor, b_high), b_high, epsilon)
    if scenario.length == 0:
        k, probes = 0, 0
        bhat = sweeps.min_battery
        left = [grounded(u) for u in sweeps.left]
        right = [grounded(u) for u in sweeps.right_origin.values()]
    else:
        if not sweeps.feasible(grid.value(1)):
            raise InfeasibleError(
                f"the two fleets cannot cover [0, {scenario.length}] even at B_hat = {grid.value(1):.6g} Wh"
            )
        k, probes = grid_search(grid, sweeps.feasible)
        bhat = grid.value(k)
        left, right = sweeps.deploy(bhat)
    sequence = deployment_sequence(left, right)
    placements = sorted(left + right, key=lambda p: p.uav_id)
    return SolveReport(
        placements=placements,
        bhat=min_leftover(placements),
        algorithm="3d",
        epsilon=epsilon,
        iterations=probes + 1,
        runtime=time.perf_counter() - start,
        extra={
            "grid_bhat": bhat,
            "grid_index": k,
            "b_low": grid.b_low,
            "b_high": grid.b_high,
            "sequence": [p.uav_id for p in sequence],
        },
    )


def split_scenario(
    length: float,
    station_left: tuple[float, float],
    station_right: tuple[float, float],
    batteries: list[float],
    left_count: int,
    model: Optional[CoverageModel] = None,
) -> Scenario3d:
    """Assign the first ``left_count`` UAVs to the left station and the rest to the right."""
    if not 0 <= left_count <= len(batteries):
        raise DomainError(f"left_count must lie in [0, {len(batteries)}], got {left_count}")
    uavs = [UavSpec(i + 1, 0.0, b) for i, b in enumerate(batteries)]
    return Scenario3d(
        length,
        station_left,
        station_right,
        uavs[:left_count],
        uavs[left_count:],
        model=model or CoverageModel(),
    )
