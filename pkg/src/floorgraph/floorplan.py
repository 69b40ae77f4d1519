"""Concrete plan representation: rooms, façade/circulation annotation, doors."""

from __future__ import annotations

import enum
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    DanglingDoor,
    DegenerateGeometry,
    NoSharedWall,
    PlanError,
    SchemaError,
    TilingGap,
    TilingOverlap,
    UnknownProgram,
)
from .geometry import (
    EPS_POINT,
    Point2,
    Polygon,
    Segment,
    segment_length,
    segment_on_boundary,
    segment_overlap,
)

DOOR_WIDTH_MIN = 0.9  # m clear width
TILING_REL_TOL = 1e-6
ENTRANCE = "ENTRANCE"


class RoomProgram(str, enum.Enum):
    LIVING = "living"
    BEDROOM = "bedroom"
    KITCHEN = "kitchen"
    BATH = "bath"
    EXTRA = "extra"
    FOYER = "foyer"

    @classmethod
    def parse(cls, value: str) -> RoomProgram:
        try:
            return cls(value)
        except ValueError:
            raise UnknownProgram(f"unknown room program {value!r}") from None


HABITABLE = frozenset({RoomProgram.LIVING, RoomProgram.BEDROOM, RoomProgram.KITCHEN})


@dataclass(frozen=True)
class Room:
    room_id: str
    program: RoomProgram
    polygon: Polygon


@dataclass(frozen=True)
class Door:
    """A door on a shared wall; ``rooms[1]`` is ENTRANCE for the unit entrance."""

    rooms: tuple[str, str]
    segment: Segment
    width: float = DOOR_WIDTH_MIN

    @property
    def is_entrance(self) -> bool:
        return self.rooms[1] == ENTRANCE

    @property
    def midpoint(self) -> Point2:
        (ax, ay), (bx, by) = self.segment
        return (0.5 * (ax + bx), 0.5 * (ay + by))


def door_key(a: str, b: str) -> tuple[str, str]:
    if b == ENTRANCE:
        return (a, b)
    if a == ENTRANCE:
        return (b, a)
    return (a, b) if a <= b else (b, a)


def canonical_edges(edges: Iterable[Iterable[str]]) -> tuple[tuple[str, str], ...]:
    out = set()
    for e in edges:
        a, b = tuple(e)
        if a == b:
            raise PlanError(f"self-loop access edge on {a!r}")
        out.add((a, b) if a < b else (b, a))
    return tuple(sorted(out))


@dataclass(frozen=True)
class ApartmentBoundary:
    """Target boundary for fitting: outline plus façade and circulation edges."""

    boundary_id: str
    boundary: Polygon
    facade_edges: tuple[Segment, ...] = ()
    circulation_edges: tuple[Segment, ...] = ()


@dataclass(frozen=True)
class PlanSkeleton:
    """Rooms with programs and access edges, before doors are placed."""

    boundary: Polygon
    rooms: tuple[Room, ...]
    access_edges: tuple[tuple[str, str], ...]
    entrance_room: str
    facade_edges: tuple[Segment, ...] = ()
    circulation_edges: tuple[Segment, ...] = ()
    plan_id: str = ""


@dataclass(frozen=True)
class FloorPlan:
    plan_id: str
    boundary: Polygon
    rooms: tuple[Room, ...]
    facade_edges: tuple[Segment, ...] = ()
    circulation_edges: tuple[Segment, ...] = ()
    doors: tuple[Door, ...] = ()
    source: str = ""
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def room(self, room_id: str) -> Room:
        if not self._index:
            self._index.update({r.room_id: r for r in self.rooms})
        return self._index[room_id]

    @property
    def room_ids(self) -> tuple[str, ...]:
        return tuple(r.room_id for r in self.rooms)

    @property
    def occupancy(self) -> int:
        return sum(1 for r in self.rooms if r.program is RoomProgram.BEDROOM)

    @property
    def area(self) -> float:
        return self.boundary.area

    @property
    def access_edges(self) -> tuple[tuple[str, str], ...]:
        return canonical_edges(d.rooms for d in self.doors if not d.is_entrance)

    @property
    def entrance_room(self) -> str | None:
        rooms = sorted(d.rooms[0] for d in self.doors if d.is_entrance)
        return rooms[0] if rooms else None

    def doors_of(self, room_id: str) -> list[Door]:
        return [d for d in self.doors if room_id in d.rooms]


# -- wall relations ------------------------------------------------------------

def shared_segments(a: Polygon, b: Polygon) -> list[Segment]:
    out = []
    for e in a.edges():
        for f in b.edges():
            ov = segment_overlap(e, f)
            if ov is not None:
                out.append(ov)
    return out


def longest_overlap(edges: Iterable[Segment], others: Iterable[Segment]) -> Segment | None:
    best, best_len = None, 0.0
    others = list(others)
    for e in edges:
        for f in others:
            ov = segment_overlap(e, f)
            if ov is not None and segment_length(ov) > best_len + 1e-12:
                best, best_len = ov, segment_length(ov)
    return best


def centered_door(segment: Segment, width: float) -> Segment:
    (ax, ay), (bx, by) = segment
    length = math.dist(segment[0], segment[1])
    ux, uy = (bx - ax) / length, (by - ay) / length
    mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
    h = 0.5 * width
    return ((mx - h * ux, my - h * uy), (mx + h * ux, my + h * uy))


def facade_rooms(rooms: Iterable[Room], facade_edges: Iterable[Segment]) -> tuple[str, ...]:
    facade_edges = list(facade_edges)
    return tuple(sorted(r.room_id for r in rooms
                        if longest_overlap(r.polygon.edges(), facade_edges) is not None))


def realize_doors(skeleton: PlanSkeleton, width: float = DOOR_WIDTH_MIN) -> FloorPlan:
    """Place one door per access edge, centred on the longest shared wall."""
    rooms = {r.room_id: r for r in skeleton.rooms}
    doors = []
    for a, b in skeleton.access_edges:
        wall = longest_overlap(rooms[a].polygon.edges(), rooms[b].polygon.edges())
        length = segment_length(wall) if wall else 0.0
        if length < width - EPS_POINT:
            raise NoSharedWall((a, b), length)
        doors.append(Door(door_key(a, b), centered_door(wall, width), width))
    entrance = skeleton.entrance_room
    wall = longest_overlap(rooms[entrance].polygon.edges(), skeleton.circulation_edges)
    length = segment_length(wall) if wall else 0.0
    if length < width - EPS_POINT:
        raise NoSharedWall((entrance, ENTRANCE), length)
    doors.append(Door((entrance, ENTRANCE), centered_door(wall, width), width))
    return FloorPlan(
        plan_id=skeleton.plan_id,
        boundary=skeleton.boundary,
        rooms=skeleton.rooms,
        facade_edges=skeleton.facade_edges,
        circulation_edges=skeleton.circulation_edges,
        doors=tuple(doors),
    )


def facade_ratio_of(boundary: Polygon, facade_edges: Iterable[Segment]) -> float:
    return min(1.0, sum(segment_length(s) for s in facade_edges) / boundary.perimeter)


def facade_ratio(plan: FloorPlan) -> float:
    """Façade length over boundary perimeter."""
    return facade_ratio_of(plan.boundary, plan.facade_edges)


# -- validation / ingestion --------------------------------------------------------

def check_tiling(boundary: Polygon, rooms: Iterable[Room]) -> None:
    rooms = list(rooms)
    total = boundary.area
    tol = TILING_REL_TOL * total
    shapes = [r.polygon.shape for r in rooms]
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            ov = shapes[i].intersection(shapes[j]).area
            if ov > tol:
                raise TilingOverlap(f"rooms {rooms[i].room_id} and {rooms[j].room_id} overlap by {ov:.6g} m2")
    # with overlaps and spill ruled out the gap is the area shortfall; a GEOS
    # union of many rotated rooms can silently drop one of them
    spill = sum(s.difference(boundary.shape).area for s in shapes)
    if spill > tol:
        raise TilingOverlap(f"rooms extend {spill:.6g} m2 beyond the boundary")
    gap = total - sum(r.polygon.area for r in rooms)
    if gap > tol:
        raise TilingGap(f"rooms leave {gap:.6g} m2 of the boundary uncovered")


def check_edges(boundary: Polygon, facade: Iterable[Segment], circulation: Iterable[Segment]) -> None:
    facade, circulation = list(facade), list(circulation)
    for kind, segs in (("facade", facade), ("circulation", circulation)):
        for s in segs:
            if not segment_on_boundary(s, boundary):
                raise PlanError(f"{kind} segment {s} does not lie on the boundary")
    for f in facade:
        for c in circulation:
            if segment_overlap(f, c) is not None:
                raise PlanError(f"facade segment {f} overlaps circulation segment {c}")


def check_doors(plan: FloorPlan) -> None:
    ids = set(plan.room_ids)
    for d in plan.doors:
        a, b = d.rooms
        if a not in ids or (b not in ids and b != ENTRANCE):
            raise DanglingDoor(f"door {d.rooms} references an unknown room")
        if d.width < DOOR_WIDTH_MIN - EPS_POINT:
            raise DanglingDoor(f"door {d.rooms} narrower than {DOOR_WIDTH_MIN} m")
        if not segment_on_boundary(d.segment, plan.room(a).polygon):
            raise DanglingDoor(f"door {d.rooms} is not on a wall of {a}")
        if b == ENTRANCE:
            if not any(segment_overlap(c, d.segment) is not None
                       and abs(segment_length(segment_overlap(c, d.segment)) - segment_length(d.segment)) < 2 * EPS_POINT
                       for c in plan.circulation_edges):
                raise DanglingDoor(f"entrance door of {a} is not on a circulation edge")
        elif not segment_on_boundary(d.segment, plan.room(b).polygon):
            raise DanglingDoor(f"door {d.rooms} is not on a wall of {b}")


def _point(v: Any, where: str) -> Point2:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise SchemaError("expected [x, y]", where)
    try:
        return (float(v[0]), float(v[1]))
    except (TypeError, ValueError):
        raise SchemaError("coordinates must be numbers", where) from None


def parse_polygon(v: Any, where: str) -> Polygon:
    if not isinstance(v, list) or len(v) < 3:
        raise SchemaError("expected a list of at least 3 points", where)
    pts = [_point(p, f"{where}[{i}]") for i, p in enumerate(v)]
    try:
        poly = Polygon(tuple(pts))
    except DegenerateGeometry as exc:
        raise SchemaError(str(exc), where) from None
    if not poly.is_simple():
        raise SchemaError("polygon is self-intersecting", where)
    return poly


def parse_segment(v: Any, where: str) -> Segment:
    if not isinstance(v, list) or len(v) != 2:
        raise SchemaError("expected [[x, y], [x, y]]", where)
    return (_point(v[0], f"{where}[0]"), _point(v[1], f"{where}[1]"))


def _require(record: Mapping, key: str, where: str) -> Any:
    if key not in record:
        raise SchemaError(f"missing field {key!r}", where)
    return record[key]


def ingest_traced(record: Mapping[str, Any]) -> FloorPlan:
    """Validated FloorPlan from a traced plan record (already JSON-decoded)."""
    pid = str(_require(record, "id", "plan"))
    where = f"plan {pid}"
    boundary = parse_polygon(_require(record, "boundary", where), f"{where}.boundary")
    rooms = []
    seen = set()
    for i, r in enumerate(_require(record, "rooms", where)):
        rw = f"{where}.rooms[{i}]"
        rid = str(_require(r, "id", rw))
        if rid in seen or rid == ENTRANCE:
            raise SchemaError(f"duplicate or reserved room id {rid!r}", rw)
        seen.add(rid)
        program = RoomProgram.parse(_require(r, "program", rw))
        rooms.append(Room(rid, program, parse_polygon(_require(r, "polygon", rw), f"{rw}.polygon")))
    if not rooms:
        raise SchemaError("plan has no rooms", where)
    facade = tuple(parse_segment(s, f"{where}.facade[{i}]") for i, s in enumerate(record.get("facade", [])))
    circ = tuple(parse_segment(s, f"{where}.circulation[{i}]") for i, s in enumerate(record.get("circulation", [])))
    doors = []
    for i, d in enumerate(record.get("doors", [])):
        dw = f"{where}.doors[{i}]"
        pair = _require(d, "rooms", dw)
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("door rooms must be a pair", dw)
        doors.append(Door(door_key(str(pair[0]), str(pair[1])),
                          parse_segment(_require(d, "segment", dw), f"{dw}.segment"),
                          float(d.get("width", DOOR_WIDTH_MIN))))
    check_tiling(boundary, rooms)
    check_edges(boundary, facade, circ)
    plan = FloorPlan(pid, boundary, tuple(rooms), facade, circ, tuple(doors), str(record.get("source", "")))
    check_doors(plan)
    return plan
