"""Physical model of a UAV swarm deployed over a ground line interval.

Units are fixed: distances and altitudes in km, energy in Wh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

# Geometric slack when comparing covered prefixes / NFZ membership (km).
COVER_TOL = 1e-9


class DeployError(Exception):
    """Base class for solver errors."""


class DomainError(DeployError, ValueError):
    """An argument lies outside the domain of a model function."""


class UncoverableError(DomainError):
    """No altitude within the turning point achieves the requested radius."""


class InfeasibleError(DeployError):
    """The swarm cannot cover the target interval under the given constraints."""


@dataclass(frozen=True)
class CoverageModel:
    """Radius law ``r(h) = alpha * h**beta`` on ``[0, h_star]`` plus the energy model.

    ``w`` weights horizontal flight against vertical ascent (vertical weight is 1)
    and ``c`` converts normalized distance to Wh.
    """

    alpha: float = 1.0
    beta: float = 0.5
    h_star: float = 2.0
    w: float = 0.2
    c: float = 21.6

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.beta < 1:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.h_star > 0:
            raise DomainError(f"h_star must be positive, got {self.h_star}")
        if not 0 < self.w < 1:
            raise DomainError(f"w must lie in (0, 1), got {self.w}")
        if not self.c > 0:
            raise DomainError(f"c must be positive, got {self.c}")

    @property
    def r_max(self) -> float:
        return self.alpha * self.h_star ** self.beta


@dataclass(frozen=True)
class UavSpec:
    id: int
    x: float
    battery: float
    y: float = 0.0

    def __post_init__(self):
        if not self.battery > 0:
            raise DomainError(f"UAV {self.id}: battery must be positive, got {self.battery}")


@dataclass(frozen=True)
class Nfz:
    left: float
    right: float

    def __post_init__(self):
        if not self.left < self.right:
            raise DomainError(f"NFZ needs left < right, got [{self.left}, {self.right}]")

    def contains(self, x: float, tol: float = COVER_TOL) -> bool:
        """True when ``x`` is strictly inside the open interval."""
        return self.left + tol < x < self.right - tol


@dataclass(frozen=True)
class Scenario:
    length: float
    uavs: tuple[UavSpec, ...]
    nfzs: tuple[Nfz, ...] = ()
    model: CoverageModel = field(default_factory=CoverageModel)

    def __post_init__(self):
        object.__setattr__(self, "uavs", tuple(self.uavs))
        object.__setattr__(self, "nfzs", tuple(self.nfzs))
        if self.length < 0:
            raise DomainError(f"length must be nonnegative, got {self.length}")
        if not self.uavs:
            raise DomainError("scenario needs at least one UAV")
        ids = [u.id for u in self.uavs]
        if len(set(ids)) != len(ids):
            raise DomainError(f"duplicate UAV ids: {ids}")
        for a, b in zip(self.nfzs, self.nfzs[1:]):
            if b.left < a.right:
                raise DomainError(
                    f"NFZs must be disjoint and sorted: [{a.left}, {a.right}] vs [{b.left}, {b.right}]"
                )

    @property
    def n(self) -> int:
        return len(self.uavs)


@dataclass(frozen=True)
class Placement:
    uav_id: int
    x_final: float
    y_final: float
    altitude: float
    radius: float
    distance: float
    leftover: float
    deployed: bool

    @property
    def half_chord(self) -> float:
        """Half-length of the ground-line segment covered by this UAV."""
        if not self.deployed or abs(self.y_final) > self.radius:
            return 0.0
        return chord_length(self.radius, self.y_final)

    @property
    def interval(self) -> tuple[float, float]:
        half = self.half_chord
        return self.x_final - half, self.x_final + half


@dataclass
class SolveReport:
    placements: list[Placement]
    bhat: float
    algorithm: str
    epsilon: Optional[float] = None
    iterations: int = 0
    runtime: float = 0.0
    extra: dict = field(default_factory=dict)


def radius(model: CoverageModel, h: float) -> float:
    if h < 0 or h > model.h_star:
        raise DomainError(f"altitude {h} outside [0, {model.h_star}]")
    return model.alpha * h ** model.beta


def inverse_radius(model: CoverageModel, r: float, rtol: float = 1e-7) -> float:
    """Altitude achieving radius ``r``.

    Radii that exceed ``r(h_star)`` by less than ``rtol`` (relative) are snapped to
    ``h_star`` so that rounded inputs such as 1.4142136 stay usable.
    """
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    r_max = model.r_max
    if r > r_max:
        if r <= r_max * (1 + rtol):
            return model.h_star
        raise UncoverableError(f"radius {r} exceeds r(h_star) = {r_max}")
    return min((r / model.alpha) ** (1.0 / model.beta), model.h_star)


def travel_distance(
    model: CoverageModel, from_x: float, from_y: float, to_x: float, to_y: float, h: float
) -> float:
    """Normalized distance: weighted ground displacement plus ascent."""
    if h < 0:
        raise DomainError(f"altitude must be nonnegative, got {h}")
    return model.w * math.hypot(to_x - from_x, to_y - from_y) + h


def leftover(model: CoverageModel, battery: float, distance: float) -> float:
    if distance < 0:
        raise DomainError(f"distance must be nonnegative, got {distance}")
    return battery - model.c * distance


def chord_length(r: float, y_offset: float) -> float:
    if abs(y_offset) > r:
        raise DomainError(f"offset {y_offset} exceeds radius {r}: no ground-line coverage")
    return math.sqrt(r * r - y_offset * y_offset)


def make_placement(
    model: CoverageModel, uav: UavSpec, x: float, y: float, h: float, origin=None
) -> Placement:
    """Build a deployed placement, computing radius, distance and leftover from the model."""
    ox, oy = (uav.x, uav.y) if origin is None else origin
    d = travel_distance(model, ox, oy, x, y, h)
    return Placement(
        uav_id=uav.id,
        x_final=x,
        y_final=y,
        altitude=h,
        radius=radius(model, h),
        distance=d,
        leftover=leftover(model, uav.battery, d),
        deployed=True,
    )


def grounded(uav: UavSpec) -> Placement:
    return Placement(uav.id, uav.x, uav.y, 0.0, 0.0, 0.0, uav.battery, False)


def min_leftover(placements: Sequence[Placement]) -> float:
    return min(p.leftover for p in placements)


def covered_prefix(placements: Sequence[Placement], start: float = 0.0) -> float:
    """Right end of the contiguous covered stretch beginning at ``start``."""
    spans = sorted(p.interval for p in placements if p.deployed)
    reach = start
    for lo, hi in spans:
        if lo > reach + COVER_TOL:
            break
        reach = max(reach, hi)
    return reach


def validate_placements(
    length: float,
    nfzs: Sequence[Nfz],
    model: CoverageModel,
    placements: Sequence[Placement],
    tol: float = 1e-7,
) -> list[str]:
    """Independent re-check of a deployment; returns a list of violations (empty when valid)."""
    problems = []
    for p in placements:
        if not p.deployed:
            continue
        if not 0 < p.altitude <= model.h_star + tol:
            problems.append(f"UAV {p.uav_id}: altitude {p.altitude} outside (0, h_star]")
            continue
        r = radius(model, min(p.altitude, model.h_star))
        if abs(r - p.radius) > tol:
            problems.append(f"UAV {p.uav_id}: radius {p.radius} != r(h) = {r}")
        if abs(p.y_final) > p.radius + tol:
            problems.append(f"UAV {p.uav_id}: offset {p.y_final} leaves the target line uncovered")
        if p.leftover < -tol:
            problems.append(f"UAV {p.uav_id}: negative leftover {p.leftover}")
        for z in nfzs:
            if z.contains(p.x_final, tol):
                problems.append(f"UAV {p.uav_id}: x' = {p.x_final} inside NFZ [{z.left}, {z.right}]")
    if length > 0 and covered_prefix(placements) < length - tol:
        problems.append(f"coverage stops at {covered_prefix(placements)} < L = {length}")
    return problems
