"""JSON scenario and result files."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Union

from .deploy3d import Scenario3d
from .model import CoverageModel, DomainError, Nfz, Placement, Scenario, SolveReport, UavSpec

FORMAT_VERSION = "1"
MODES = ("colocated", "line", "kappa", "3d", "oracle")
DEFAULT_BATTERY = 780.0
MODEL_FIELDS = ("alpha", "beta", "h_star", "w", "c")


class SchemaError(DomainError):
    """Scenario file does not match the expected layout; the message names the field path."""


@dataclass
class ScenarioFile:
    version: str
    mode: str
    scenario: Union[Scenario, Scenario3d]
    options: dict = field(default_factory=dict)


def _number(value, path, positive=False, nonneg=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SchemaError(f"{path}: expected a finite number, got {value!r}")
    if positive and value <= 0:
        raise SchemaError(f"{path}: must be positive, got {value}")
    if nonneg and value < 0:
        raise SchemaError(f"{path}: must be nonnegative, got {value}")
    return float(value)


def _object(value, path):
    if not isinstance(value, dict):
        raise SchemaError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _list(value, path):
    if not isinstance(value, list):
        raise SchemaError(f"{path}: expected a list, got {type(value).__name__}")
    return value


def _model(raw) -> CoverageModel:
    raw = _object(raw, "model")
    unknown = set(raw) - set(MODEL_FIELDS)
    if unknown:
        raise SchemaError(f"model: unknown fields {sorted(unknown)}")
    values = {k: _number(raw[k], f"model.{k}") for k in MODEL_FIELDS if k in raw}
    try:
        return CoverageModel(**values)
    except DomainError as exc:
        raise SchemaError(f"model: {exc}") from None


def _uavs(doc, key, default_x, default_y=0.0, first_id=1):
    path = key
    if key in doc:
        out = []
        for k, raw in enumerate(_list(doc[key], path)):
            raw = _object(raw, f"{path}[{k}]")
            uid = raw.get("id", first_id + k)
            if isinstance(uid, bool) or not isinstance(uid, int):
                raise SchemaError(f"{path}[{k}].id: expected an integer, got {uid!r}")
            out.append(
                UavSpec(
                    uid,
                    _number(raw.get("x", default_x), f"{path}[{k}].x"),
                    _number(raw.get("battery", DEFAULT_BATTERY), f"{path}[{k}].battery", positive=True),
                    _number(raw.get("y", default_y), f"{path}[{k}].y"),
                )
            )
        return out
    count_key = {"uavs": "n", "left_uavs": "n_left", "right_uavs": "n_right"}[key]
    if count_key in doc:
        n = doc[count_key]
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise SchemaError(f"{count_key}: expected a nonnegative integer, got {n!r}")
        battery = _number(doc.get("battery", DEFAULT_BATTERY), "battery", positive=True)
        return [UavSpec(first_id + k, default_x, battery, default_y) for k in range(n)]
    return []


def _nfzs(doc):
    out = []
    for k, raw in enumerate(_list(doc.get("nfzs", []), "nfzs")):
        raw = _list(raw, f"nfzs[{k}]")
        if len(raw) != 2:
            raise SchemaError(f"nfzs[{k}]: expected [left, right]")
        left, right = (_number(v, f"nfzs[{k}]") for v in raw)
        if not left < right:
            raise SchemaError(f"nfzs[{k}]: needs left < right, got [{left}, {right}]")
        out.append(Nfz(left, right))
    out.sort(key=lambda z: z.left)
    for a, b in zip(out, out[1:]):
        if b.left < a.right:
            raise SchemaError(f"nfzs: [{a.left}, {a.right}] overlaps [{b.left}, {b.right}]")
    return out


def _station(raw, path):
    raw = _list(raw, path)
    if len(raw) != 2:
        raise SchemaError(f"{path}: expected [x, y]")
    return tuple(_number(v, path) for v in raw)


def _options(raw) -> dict:
    raw = _object(raw, "options")
    out = {}
    if "epsilon" in raw:
        eps = _number(raw["epsilon"], "options.epsilon")
        if not 0 < eps < 1:
            raise SchemaError(f"options.epsilon: must lie in (0, 1), got {eps}")
        out["epsilon"] = eps
    if "kappa" in raw:
        kappa = raw["kappa"]
        if isinstance(kappa, bool) or not isinstance(kappa, int) or kappa < 0:
            raise SchemaError(f"options.kappa: expected a nonnegative integer, got {kappa!r}")
        out["kappa"] = kappa
    if "grid" in raw:
        grid = _object(raw["grid"], "options.grid")
        out["grid"] = {k: _number(grid[k], f"options.grid.{k}", positive=True) for k in ("dx", "dh") if k in grid}
    unknown = set(raw) - {"epsilon", "kappa", "grid"}
    if unknown:
        raise SchemaError(f"options: unknown fields {sorted(unknown)}")
    return out


def parse_document(doc: Any) -> ScenarioFile:
    doc = _object(doc, "<root>")
    version = str(doc.get("version", FORMAT_VERSION))
    if version != FORMAT_VERSION:
        raise SchemaError(f"version: unsupported format version {version!r} (expected {FORMAT_VERSION!r})")
    mode = doc.get("mode")
    if mode not in MODES:
        raise SchemaError(f"mode: expected one of {', '.join(MODES)}, got {mode!r}")
    if "length" not in doc:
        raise SchemaError("length: required field missing")
    length = _number(doc["length"], "length", nonneg=True)
    nfzs = _nfzs(doc)
    if length <= 0 and nfzs:
        raise SchemaError("length: must be positive when NFZs are given")
    model = _model(doc.get("model", {}))
    options = _options(doc.get("options", {}))
    try:
        if mode == "3d":
            stations = _object(doc.get("stations"), "stations")
            left_station = _station(stations.get("left"), "stations.left")
            right_station = _station(stations.get("right"), "stations.right")
            left = _uavs(doc, "left_uavs", *left_station)
            right = _uavs(doc, "right_uavs", *right_station, first_id=len(left) + 1)
            scenario = Scenario3d(length, left_station, right_station, left, right, nfzs, model)
        else:
            uavs = _uavs(doc, "uavs", 0.0)
            scenario = Scenario(length, uavs, nfzs, model)
    except SchemaError:
        raise
    except DomainError as exc:
        raise SchemaError(str(exc)) from None
    return ScenarioFile(version, mode, scenario, options)


def parse_scenario(text: str) -> ScenarioFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"<root>: invalid JSON ({exc})") from None
    return parse_document(doc)


def _uav_doc(u: UavSpec) -> dict:
    return {"id": u.id, "x": u.x, "y": u.y, "battery": u.battery}


def serialize_scenario(sf: ScenarioFile) -> dict:
    """Fully explicit document; parsing it gives back an equal ScenarioFile."""
    s = sf.scenario
    doc = {
        "version": sf.version,
        "mode": sf.mode,
        "length": s.length,
        "nfzs": [[z.left, z.right] for z in s.nfzs],
        "model": asdict(s.model),
        "options": sf.options,
    }
    if isinstance(s, Scenario3d):
        doc["stations"] = {"left": list(s.station_left), "right": list(s.station_right)}
        doc["left_uavs"] = [_uav_doc(u) for u in s.left_uavs]
        doc["right_uavs"] = [_uav_doc(u) for u in s.right_uavs]
    else:
        doc["uavs"] = [_uav_doc(u) for u in s.uavs]
    return doc


def placement_doc(p: Placement) -> dict:
    return {
        "id": p.uav_id,
        "x": p.x_final,
        "y": p.y_final,
        "h": p.altitude,
        "radius": p.radius,
        "distance": p.distance,
        "leftover": p.leftover,
        "deployed": p.deployed,
    }


def result_document(report: SolveReport, sf: ScenarioFile) -> dict:
    diagnostics = {"iterations": report.iterations, "wall_time_s": report.runtime}
    diagnostics.update(report.extra)
    return {
        "version": FORMAT_VERSION,
        "algorithm": report.algorithm,
        "epsilon": report.epsilon,
        "bhat": report.bhat,
        "placements": [placement_doc(p) for p in report.placements],
        "diagnostics": diagnostics,
        "input": serialize_scenario(sf),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
