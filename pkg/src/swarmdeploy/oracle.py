"""Brute-force reference solver on a discretized placement space, plus hard-instance generation.

The oracle shares no code with the solvers beyond the energy model. It
discretizes hover positions and altitudes, and for every ground order of the
UAVs runs an exhaustive frontier extension over the discretized candidates.
Checking every order makes this exact for the discretized problem: any
covering assignment, listed by left endpoint, is dominated by the frontier
extension in that order.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .model import (
    CoverageModel,
    DomainError,
    InfeasibleError,
    Nfz,
    Scenario,
    SolveReport,
    UavSpec,
    grounded,
    inverse_radius,
    make_placement,
    min_leftover,
)

MAX_UAVS = 4
MAX_STATES = 50_000_000
THRESHOLD_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    dx: float = 1e-3
    dh: float = 1e-3

    def __post_init__(self):
        if not (self.dx > 0 and self.dh > 0):
            raise DomainError(f"grid steps must be positive, got dx={self.dx}, dh={self.dh}")

    def slack(self, model: CoverageModel) -> float:
        """Energy lost to discretization: one ground step plus one altitude step."""
        return model.c * (model.w * self.dx + self.dh)


class _Candidates:
    """Allowed hover positions and altitudes for one scenario."""

    def __init__(self, scenario: Scenario, grid: GridSpec):
        m = scenario.model
        lo = min([0.0] + [u.x for u in scenario.uavs])
        hi = max([scenario.length] + [u.x for u in scenario.uavs])
        steps = int(math.floor((hi - lo) / grid.dx + 1e-9))
        xs = lo + grid.dx * np.arange(steps + 1)
        extra = [lo, hi, 0.0, scenario.length] + [u.x for u in scenario.uavs]
        for z in scenario.nfzs:
            extra += [z.left, z.right]
        xs = np.unique(np.concatenate([xs, np.array(extra)]))
        inside = np.zeros(xs.shape, dtype=bool)
        for z in scenario.nfzs:
            inside |= (xs > z.left) & (xs < z.right)
        self.x = xs[~inside]
        hs = grid.dh * np.arange(1, int(math.floor(m.h_star / grid.dh + 1e-9)) + 1)
        hs = hs[hs < m.h_star]
        self.h = np.append(hs, m.h_star)
        self.r = m.alpha * self.h ** m.beta
        if len(self.x) * len(self.h) > MAX_STATES:
            raise DomainError(
                f"oracle grid has {len(self.x) * len(self.h)} states per UAV (limit {MAX_STATES}); coarsen dx/dh"
            )


def _extend(model, cand: _Candidates, uav: UavSpec, budget: float, frontier: float):
    """Best discretized placement touching ``frontier``: returns ``(right_end, x, h)`` or None."""
    spread = (budget - cand.h) / model.w
    ok = spread >= 0
    if not ok.any():
        return None
    cap = np.minimum(frontier + cand.r, uav.x + spread)
    idx = np.searchsorted(cand.x, cap + 1e-12, side="right") - 1
    valid = ok & (idx >= 0)
    safe = np.clip(idx, 0, len(cand.x) - 1)
    xs = cand.x[safe]
    valid &= xs >= np.maximum(uav.x - spread, frontier - cand.r) - 1e-12
    valid &= model.w * np.abs(xs - uav.x) + cand.h <= budget + 1e-12
    if not valid.any():
        return None
    reach = np.where(valid, xs + cand.r, -np.inf)
    k = int(np.argmax(reach))
    return float(reach[k]), float(xs[k]), float(cand.h[k])


def _run(scenario, cand, order, threshold):
    """Frontier extension in ``order`` keeping ``threshold``; returns placements or None."""
    model = scenario.model
    frontier = 0.0
    placements = []
    for u in order:
        if frontier >= scenario.length - 1e-12:
            placements.append(grounded(u))
            continue
        step = _extend(model, cand, u, (u.battery - threshold) / model.c, frontier)
        if step is None or step[0] <= frontier:
            placements.append(grounded(u))
            continue
        frontier, x, h = step
        placements.append(make_placement(model, u, x, 0.0, h))
    return placements if frontier >= scenario.length - 1e-12 else None


def brute_force(scenario: Scenario, grid: GridSpec = GridSpec()) -> SolveReport:
    """Max-min leftover over all discretized deployments of a small on-line instance."""
    start = time.perf_counter()
    if scenario.n > MAX_UAVS:
        raise DomainError(f"oracle handles at most {MAX_UAVS} UAVs, got {scenario.n}")
    if any(u.y != 0 for u in scenario.uavs):
        raise DomainError("oracle only handles UAVs starting on the target line")
    top = min(u.battery for u in scenario.uavs)
    if scenario.length == 0:
        placements = [grounded(u) for u in scenario.uavs]
        return SolveReport(placements, top, "oracle", runtime=time.perf_counter() - start)
    cand = _Candidates(scenario, grid)

    best = None
    probes = 0
    for order in itertools.permutations(sorted(scenario.uavs, key=lambda u: u.id)):
        lo = 0.0 if best is None else best[0]
        probes += 1
        if _run(scenario, cand, order, lo) is None:
            continue
        hi = top
        probes += 1
        if _run(scenario, cand, order, hi) is not None:
            lo = hi
        while hi - lo > THRESHOLD_TOL:
            mid = 0.5 * (lo + hi)
            probes += 1
            if _run(scenario, cand, order, mid) is not None:
                lo = mid
            else:
                hi = mid
        placements = _run(scenario, cand, order, lo)
        value = min_leftover(placements)
        if best is None or value > best[1]:
            best = (lo, value, placements)
    if best is None:
        raise InfeasibleError("no discretized deployment covers the interval")
    _, value, placements = best
    return SolveReport(
        placements=sorted(placements, key=lambda p: p.uav_id),
        bhat=value,
        algorithm="oracle",
        iterations=probes,
        runtime=time.perf_counter() - start,
        extra={"dx": grid.dx, "dh": grid.dh, "slack": grid.slack(scenario.model)},
    )


def partition_scenario(ints: list[int], bhat: float, model: CoverageModel | None = None) -> Scenario:
    """Colocated instance that reaches leftover ``bhat`` only if ``ints`` splits into equal halves.

    All UAVs start at the midpoint. A middle UAV can just afford to cover a
    short stretch around the midpoint from directly above it, and two NFZs
    flanking the midpoint stop anyone else hovering nearby. Each remaining UAV
    has exactly enough energy to cover a stretch as long as its integer at the
    far end of either half, so both halves must be filled by integers summing
    to half the total.
    """
    if not ints or any(int(a) != a or a <= 0 for a in ints):
        raise DomainError("partition instance needs a nonempty list of positive integers")
    total = sum(ints)
    gap = min(ints) / 4
    length = total + 2 * gap
    mid = length / 2
    base = model or CoverageModel()
    need = max(ints) / 2
    if need > base.r_max:
        h_star = (need / base.alpha) ** (1 / base.beta)
        base = CoverageModel(base.alpha, base.beta, h_star, base.w, base.c)
    uavs = []
    for j, a in enumerate(ints):
        r = a / 2
        cost = base.w * (mid - r) + inverse_radius(base, r)
        uavs.append(UavSpec(j + 1, mid, bhat + base.c * cost))
    uavs.append(UavSpec(len(ints) + 1, mid, bhat + base.c * inverse_radius(base, gap)))
    nfzs = (Nfz(mid - 2 * gap, mid), Nfz(mid, mid + 2 * gap))
    return Scenario(length, uavs, nfzs, base)
