"""Spatial validity heuristics: perimeter-difference scores, failure-case
detectors and the fit-pipeline pre-filter."""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

from shapely.geometry import LineString

from .errors import DegenerateGeometry, RoomSetMismatch
from .floorplan import (
    HABITABLE,
    ApartmentBoundary,
    FloorPlan,
    RoomProgram,
    facade_ratio_of,
)
from .geometry import (
    EPS_AREA,
    EPS_POINT,
    Polygon,
    caliper_extents,
    inward_offset,
    segment_length,
    segment_overlap,
)
from .hypergraph import Hypergraph


@dataclass(frozen=True)
class Thresholds:
    delta_max: float = 0.1  # plan score cull
    facade_ratio_tol: float = 0.15
    footprint_tol: float = 0.20
    facade_min_overlap: float = 0.9
    habitable_min_width: float = 1.8
    habitable_max_aspect: float = 4.0
    passage_half_width: float = 0.45


DEFAULT_THRESHOLDS = Thresholds()


class FlagKind(str, enum.Enum):
    FACADE_BLOCKED = "FacadeBlocked"
    BAD_ROOM_GEOMETRY = "BadRoomGeometry"
    PASSAGE_TOO_THIN = "PassageTooThin"
    ACCESS_UNREALIZABLE = "AccessUnrealizable"


@dataclass(frozen=True, order=True)
class Flag:
    kind: FlagKind
    room_id: str = ""

    def __str__(self) -> str:
        return f"{self.kind.value}({self.room_id})" if self.room_id else self.kind.value


@dataclass(frozen=True)
class ValidityReport:
    room_scores: Mapping[str, float] = field(default_factory=dict)
    delta_r: float = math.inf
    flags: frozenset[Flag] = frozenset()
    delta_max: float = DEFAULT_THRESHOLDS.delta_max

    @property
    def passed(self) -> bool:
        return not self.flags and self.delta_r <= self.delta_max


def _squareness(perimeter: float, area: float) -> float:
    if area < EPS_AREA:
        raise DegenerateGeometry("polygon has no area")
    return perimeter / (4.0 * math.sqrt(area))


def perimeter_diff(a: Polygon, b: Polygon) -> float:
    """|1 - (L_SA * L_B) / (L_A * L_SB)| with L_S the equal-area square perimeter.

    Not symmetric: ``a`` is the reference polygon, ``b`` the target.
    """
    return abs(1.0 - _squareness(b.perimeter, b.area) / _squareness(a.perimeter, a.area))


def plan_perimeter_diff(generated: FloorPlan, source: FloorPlan) -> float:
    scores = room_perimeter_diffs(generated, {r.room_id: (r.polygon.perimeter, r.polygon.area)
                                              for r in source.rooms})
    return sum(scores.values()) / len(scores)


def room_perimeter_diffs(generated: FloorPlan, reference: Mapping[str, tuple[float, float]]) -> dict[str, float]:
    """Per-room score against reference (perimeter, area) pairs keyed by room id."""
    if set(generated.room_ids) != set(reference):
        raise RoomSetMismatch(f"room sets differ: {sorted(set(generated.room_ids) ^ set(reference))}")
    out = {}
    for r in generated.rooms:
        lp, area = reference[r.room_id]
        out[r.room_id] = abs(1.0 - _squareness(r.polygon.perimeter, r.polygon.area) / _squareness(lp, area))
    return out


def leaf_reference(hg: Hypergraph) -> dict[str, tuple[float, float]]:
    return {n.room_id: (n.perimeter, n.area_abs) for n in hg.root.leaves()}


def _facade_overlap(poly: Polygon, facade) -> float:
    best = 0.0
    for e in poly.edges():
        for f in facade:
            ov = segment_overlap(e, f)
            if ov is not None:
                best = max(best, segment_length(ov))
    return best


def check_plan(plan: FloorPlan, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> frozenset[Flag]:
    """Failure-case detectors (façade-blocked, bad geometry, thin passage)."""
    flags = set()
    for room in plan.rooms:
        if room.program in HABITABLE:
            if _facade_overlap(room.polygon, plan.facade_edges) < thresholds.facade_min_overlap - EPS_POINT:
                flags.add(Flag(FlagKind.FACADE_BLOCKED, room.room_id))
            width, aspect = caliper_extents(room.polygon)
            if width < thresholds.habitable_min_width - EPS_POINT or aspect > thresholds.habitable_max_aspect + 1e-9:
                flags.add(Flag(FlagKind.BAD_ROOM_GEOMETRY, room.room_id))
        elif room.program is RoomProgram.FOYER:
            if _passage_too_thin(plan, room.room_id, thresholds.passage_half_width):
                flags.add(Flag(FlagKind.PASSAGE_TOO_THIN, room.room_id))
    return frozenset(flags)


def _passage_too_thin(plan: FloorPlan, room_id: str, half_width: float) -> bool:
    core = inward_offset(plan.room(room_id).polygon, half_width)
    if not core:
        return True
    shapes = [c.shape for c in core]
    for door in plan.doors_of(room_id):
        line = LineString(door.segment)
        if min(line.distance(s) for s in shapes) > half_width + EPS_POINT:
            return True
    return False


def fit_filter(hg: Hypergraph, target: ApartmentBoundary, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> bool:
    """Footprint within ±20 % of the source and a similar façade ratio."""
    if abs(target.boundary.area / hg.leaf_area - 1.0) > thresholds.footprint_tol + 1e-12:
        return False
    ratio = facade_ratio_of(target.boundary, target.facade_edges)
    return abs(ratio - hg.facade_ratio) <= thresholds.facade_ratio_tol + 1e-12


def validate_plan(plan: FloorPlan, reference: Mapping[str, tuple[float, float]],
                  thresholds: Thresholds = DEFAULT_THRESHOLDS) -> ValidityReport:
    scores = room_perimeter_diffs(plan, reference)
    return ValidityReport(
        room_scores=dict(sorted(scores.items())),
        delta_r=sum(scores.values()) / len(scores),
        flags=check_plan(plan, thresholds),
        delta_max=thresholds.delta_max,
    )
