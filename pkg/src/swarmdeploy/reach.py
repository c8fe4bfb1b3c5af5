"""Maximal frontier extension for a single UAV.

Given a covered prefix ending at ``frontier`` and a UAV starting at ground point
``(x_s, y_s)`` with a normalized-distance budget, find the final position
``(x', y', h)`` whose ground-line coverage still touches the frontier and reaches
furthest right. The target line is the x-axis; a hover point offset ``y'`` from
it covers the chord ``x' +- sqrt(r(h)^2 - y'^2)``.

For a fixed offset the reach is ``min(T(h), G(h))`` with
``T(h) = frontier + 2 chord(h)`` (touching) and
``G(h) = x_s + sqrt(((budget - h)/w)^2 - lat^2) + chord(h)`` (budget boundary).
``T`` increases and ``G`` is concave, so the maximizer is either the peak of
``G`` or the crossing ``T = G`` to its right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from scipy.optimize import brentq

from .model import CoverageModel, Nfz
from .numerics import golden_max

REACH_TOL = 1e-9
H_TOL = 1e-12
Y_TOL = 1e-9
_PENALTY = 1e12


@dataclass(frozen=True)
class Reach:
    x: float
    y: float
    h: float
    half: float

    @property
    def left(self) -> float:
        return self.x - self.half

    @property
    def right(self) -> float:
        return self.x + self.half


def _r(model: CoverageModel, h: float) -> float:
    return model.alpha * h ** model.beta if h > 0 else 0.0


@lru_cache(maxsize=64)
def _planar_peak(model: CoverageModel) -> float:
    """Altitude maximizing ``r(h) - h/w``: the budget-boundary optimum for on-line hovering."""
    h, _ = golden_max(lambda h: _r(model, h) - h / model.w, 0.0, model.h_star, tol=H_TOL)
    return h


def _reach_at_offset(model, x_s, y_s, budget, frontier, yp):
    """Best reach with the hover offset fixed to ``yp``.

    Returns ``(reach, violation)``; ``reach`` is None when infeasible and
    ``violation`` then measures how far from feasible the offset is.
    """
    w = model.w
    lat = abs(yp - y_s)
    ay = abs(yp)
    if ay > model.r_max:
        return None, ay - model.r_max
    h_lo = (ay / model.alpha) ** (1.0 / model.beta) if ay > 0 else 0.0
    h_hi = min(model.h_star, budget - w * lat)
    if h_hi <= h_lo:
        return None, h_lo - h_hi + REACH_TOL

    planar = lat == 0.0 and yp == 0.0
    if planar:
        def horiz(h):
            return (budget - h) / w

        def chord(h):
            return _r(model, h)
    else:
        def horiz(h):
            rho = (budget - h) / w
            return math.sqrt(max(rho * rho - lat * lat, 0.0))

        def chord(h):
            r = _r(model, h)
            return math.sqrt(max(r * r - yp * yp, 0.0))

    def G(h):
        return x_s + horiz(h) + chord(h)

    def T(h):
        return frontier + 2.0 * chord(h)

    if planar:
        h_g = min(max(_planar_peak(model), h_lo), h_hi)
        g_max = G(h_g)
    else:
        h_g, g_max = golden_max(G, h_lo, h_hi, tol=H_TOL)

    need = max(frontier, 2.0 * x_s - frontier)
    violation = max(need - g_max, frontier + REACH_TOL - g_max)
    if violation > 0:
        return None, violation

    if T(h_g) >= G(h_g):
        h = h_g
    else:
        if G(h_hi) >= need:
            h2 = h_hi
        else:
            h2 = brentq(lambda h: G(h) - need, h_g, h_hi, xtol=H_TOL)
        if T(h2) <= G(h2):
            h = h2
        else:
            h = brentq(lambda h: T(h) - G(h), h_g, h2, xtol=H_TOL)
    half = chord(h)
    x = min(frontier + half, x_s + horiz(h))
    return Reach(x, yp, h, half), 0.0


def _free_reach(model, x_s, y_s, budget, frontier) -> Optional[Reach]:
    if y_s == 0.0:
        reach, _ = _reach_at_offset(model, x_s, y_s, budget, frontier, 0.0)
        return reach

    def score(yp):
        reach, violation = _reach_at_offset(model, x_s, y_s, budget, frontier, yp)
        return reach.right if reach is not None else -_PENALTY - violation

    lo, hi = sorted((0.0, y_s))
    yp, _ = golden_max(score, lo, hi, tol=Y_TOL)
    reach, _ = _reach_at_offset(model, x_s, y_s, budget, frontier, yp)
    return reach


def fixed_reach(
    model: CoverageModel,
    x_s: float,
    y_s: float,
    budget: float,
    frontier: float,
    x_fixed: float,
    require_extend: bool = True,
) -> Optional[Reach]:
    """Best hover point constrained to ground coordinate ``x_fixed`` (e.g. an NFZ edge)."""
    dx = abs(x_fixed - x_s)
    h_max = min(model.h_star, budget - model.w * dx)
    if h_max <= 0:
        return None
    if y_s == 0.0:
        h, yp, half = h_max, 0.0, _r(model, h_max)
    else:
        def offset(h):
            rho = (budget - h) / model.w
            q = math.sqrt(max(rho * rho - dx * dx, 0.0))
            return 0.0 if abs(y_s) <= q else y_s - math.copysign(q, y_s)

        def score(h):
            yy = offset(h)
            r = _r(model, h)
            return math.sqrt(r * r - yy * yy) if r >= abs(yy) else r - abs(yy)

        h, half = golden_max(score, 0.0, h_max, tol=H_TOL)
        if half < 0:
            return None
        yp = offset(h)
    if x_fixed - half > frontier + REACH_TOL:
        return None
    if require_extend and x_fixed + half <= frontier + REACH_TOL:
        return None
    return Reach(x_fixed, yp, h, half)


def best_reach(
    model: CoverageModel,
    x_s: float,
    y_s: float,
    budget: float,
    frontier: float,
    nfzs: Sequence[Nfz] = (),
) -> Optional[Reach]:
    """Hover point maximizing the covered right end while touching ``frontier``.

    ``budget`` is the normalized distance the UAV may spend, i.e. ``(B - B_hat)/c``.
    Returns None when the UAV cannot extend the frontier. A maximizer that lands
    strictly inside an NFZ is replaced by the better of the two NFZ edges.
    """
    if budget <= 0:
        return None
    cand = _free_reach(model, x_s, y_s, budget, frontier)
    if cand is None:
        return None
    for z in nfzs:
        if z.contains(cand.x):
            options = [fixed_reach(model, x_s, y_s, budget, frontier, e) for e in (z.left, z.right)]
            options = [o for o in options if o is not None]
            return max(options, key=lambda o: o.right, default=None)
    return cand
