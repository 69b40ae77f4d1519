"""Procedural furniture test-fit.

Blocks are placed flush against the walls of a placement region (room minus
door swing zones), walking its edges in order at a fixed anchor step.  Each
block owns a *blocked* zone (its footprint) and a *circulation* zone (the
footprint grown per side).  Circulation zones may overlap one another; a
blocked zone may not touch any other zone.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np
import shapely
from shapely.geometry import Polygon as _ShapelyPolygon
from shapely.geometry.polygon import orient

from .errors import Infeasible, SchemaError, UnknownOccupancy, VersionMismatch
from .floorplan import Door, FloorPlan, Room, RoomProgram
from .geometry import EPS_POINT, Point2, Polygon, segment_length, segment_overlap

CATALOG_FORMAT = "floorgraph.catalog"
CATALOG_VERSION = 1
ANCHOR_STEP = 0.1  # m
ZONE_TOL = 1e-6  # m, rectangles are shrunk by this before predicates
SIDES = ("front", "back", "left", "right")


@dataclass(frozen=True)
class FurnitureBlock:
    """``width`` runs along the wall, ``depth`` into the room.

    Circulation margins: ``front`` faces the room, ``back`` the wall, ``left``
    and ``right`` are the start and end of the wall run.
    """

    name: str
    program: RoomProgram
    width: float
    depth: float
    front: float = 0.0
    back: float = 0.0
    left: float = 0.0
    right: float = 0.0

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.depth > 0):
            raise ValueError(f"block {self.name!r} needs a positive footprint")
        if min(self.front, self.back, self.left, self.right) < 0:
            raise ValueError(f"block {self.name!r} has a negative circulation margin")

    @property
    def area(self) -> float:
        return self.width * self.depth


@dataclass(frozen=True)
class RoomRequirement:
    program: RoomProgram
    rank: int
    blocks: tuple[str, ...]


@dataclass(frozen=True)
class OccupancySpec:
    label: str
    min_furniture_area: float
    rooms: tuple[RoomRequirement, ...]


@dataclass(frozen=True)
class FurnitureCatalog:
    blocks: Mapping[str, FurnitureBlock]
    occupancies: Mapping[int, OccupancySpec]
    fallbacks: Mapping[RoomProgram, tuple[RoomProgram, ...]] = field(default_factory=dict)

    @property
    def max_occupancy(self) -> int:
        return max(self.occupancies)

    def spec(self, occupancy: int) -> OccupancySpec:
        try:
            return self.occupancies[occupancy]
        except KeyError:
            raise UnknownOccupancy(f"catalog has no entry for {occupancy} bedrooms "
                                   f"(max {self.max_occupancy})") from None

    def min_furniture_area(self, occupancy: int) -> float:
        return self.spec(occupancy).min_furniture_area

    def required_area(self, occupancy: int) -> float:
        return sum(self.blocks[b].area for r in self.spec(occupancy).rooms for b in r.blocks)

    # -- serialization -------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> FurnitureCatalog:
        if data.get("format") != CATALOG_FORMAT:
            raise SchemaError(f"expected format {CATALOG_FORMAT!r}", "format")
        if data.get("version") != CATALOG_VERSION:
            raise VersionMismatch(f"catalog version {data.get('version')!r}, reader supports {CATALOG_VERSION}",
                                  "version")
        blocks = {}
        for name, b in sorted(data.get("blocks", {}).items()):
            where = f"blocks.{name}"
            try:
                circ = b.get("circulation", {})
                unknown = set(circ) - set(SIDES)
                if unknown:
                    raise SchemaError(f"unknown circulation sides {sorted(unknown)}", where)
                blocks[name] = FurnitureBlock(name, RoomProgram.parse(b["program"]), float(b["width"]),
                                              float(b["depth"]), **{k: float(v) for k, v in circ.items()})
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(str(exc), where) from exc
        occupancies = {}
        for key, o in data.get("occupancies", {}).items():
            where = f"occupancies.{key}"
            try:
                rooms = tuple(RoomRequirement(RoomProgram.parse(r["program"]), int(r.get("rank", 0)),
                                              tuple(r["blocks"])) for r in o["rooms"])
                occupancies[int(key)] = OccupancySpec(str(o.get("label", key)), float(o["min_furniture_area"]),
                                                      rooms)
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(str(exc), where) from exc
            for r in rooms:
                for b in r.blocks:
                    if b not in blocks:
                        raise SchemaError(f"unknown block {b!r}", where)
        if not occupancies:
            raise SchemaError("no occupancies defined", "occupancies")
        fallbacks = {RoomProgram.parse(k): tuple(RoomProgram.parse(x) for x in v)
                     for k, v in data.get("fallbacks", {}).items()}
        return cls(blocks, dict(sorted(occupancies.items())), fallbacks)

    def to_dict(self) -> dict[str, Any]:
        def block(b: FurnitureBlock) -> dict[str, Any]:
            circ = {s: getattr(b, s) for s in SIDES if getattr(b, s)}
            out: dict[str, Any] = {"program": b.program.value, "width": b.width, "depth": b.depth}
            if circ:
                out["circulation"] = circ
            return out

        return {
            "format": CATALOG_FORMAT,
            "version": CATALOG_VERSION,
            "units": {"length": "m", "area": "m2"},
            "fallbacks": {k.value: [x.value for x in v] for k, v in sorted(self.fallbacks.items())},
            "blocks": {n: block(b) for n, b in sorted(self.blocks.items())},
            "occupancies": {
                str(k): {"label": o.label, "min_furniture_area": o.min_furniture_area,
                         "rooms": [{"program": r.program.value, "rank": r.rank, "blocks": list(r.blocks)}
                                   for r in o.rooms]}
                for k, o in sorted(self.occupancies.items())
            },
        }

    @classmethod
    def load(cls, path: str | Path) -> FurnitureCatalog:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(exc.msg, f"{path}:{exc.lineno}") from exc
        return cls.from_dict(data)

    @classmethod
    def default(cls) -> FurnitureCatalog:
        text = resources.files("floorgraph").joinpath("data/catalog.json").read_text(encoding="utf-8")
        return cls.from_dict(json.loads(text))


# -- placements -----------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    """Block placed with its footprint centre at ``position``; ``rotation`` is the wall direction."""

    block: FurnitureBlock
    position: Point2
    rotation: float

    def _rect(self, x0: float, x1: float, y0: float, y1: float) -> tuple[Point2, ...]:
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        px, py = self.position
        return tuple((px + x * c - y * s, py + x * s + y * c) for x, y in ((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    @property
    def footprint(self) -> tuple[Point2, ...]:
        b = self.block
        return self._rect(-b.width / 2, b.width / 2, -b.depth / 2, b.depth / 2)

    @property
    def circulation(self) -> tuple[Point2, ...]:
        b = self.block
        return self._rect(-b.width / 2 - b.left, b.width / 2 + b.right,
                          -b.depth / 2 - b.back, b.depth / 2 + b.front)


def door_zone(room: Polygon, door: Door) -> _ShapelyPolygon | None:
    """Square swing clearance of side ``door.width`` on the room side of the door."""
    for edge in room.edges():
        ov = segment_overlap(edge, door.segment)
        if ov is None or segment_length(ov) < segment_length(door.segment) - 2 * EPS_POINT:
            continue
        (ax, ay), (bx, by) = door.segment
        length = math.dist((ax, ay), (bx, by))
        # room edges run counter-clockwise, so the interior lies to their left
        (ex, ey), (fx, fy) = edge
        el = math.dist((ex, ey), (fx, fy))
        nx, ny = -(fy - ey) / el, (fx - ex) / el
        w = max(door.width, length)
        return _ShapelyPolygon([(ax, ay), (bx, by), (bx + w * nx, by + w * ny), (ax + w * nx, ay + w * ny)])
    return None


def _placement_edges(region) -> list[tuple[Point2, Point2]]:
    pieces = sorted((g for g in getattr(region, "geoms", [region]) if g.area > 0),
                    key=lambda g: (-round(g.area, 9), g.bounds))
    out = []
    for g in pieces:
        g = orient(g, 1.0)
        coords = list(g.exterior.coords)[:-1]
        k = min(range(len(coords)), key=lambda i: coords[i])
        coords = coords[k:] + coords[:k]
        for i in range(len(coords)):
            a, b = coords[i], coords[(i + 1) % len(coords)]
            if math.dist(a, b) > EPS_POINT:
                out.append((a, b))
    return out


@dataclass
class _Candidates:
    edge: np.ndarray
    anchor: np.ndarray
    position: np.ndarray
    rotation: np.ndarray
    blocked: np.ndarray
    circulation: np.ndarray


def _candidates(block: FurnitureBlock, edges: Sequence[tuple[Point2, Point2]], step: float) -> _Candidates:
    e_idx, s_all, origin, u_all = [], [], [], []
    for i, (a, b) in enumerate(edges):
        length = math.dist(a, b)
        span = length - block.width
        if span < -ZONE_TOL:
            continue
        span = max(span, 0.0)
        s = np.arange(0.0, span + 1e-12, step)
        if span - s[-1] > 1e-9:
            s = np.append(s, span)
        u = ((b[0] - a[0]) / length, (b[1] - a[1]) / length)
        e_idx.append(np.full(len(s), i))
        s_all.append(s)
        origin.append(np.tile(a, (len(s), 1)))
        u_all.append(np.tile(u, (len(s), 1)))
    if not e_idx:
        empty = np.empty(0)
        return _Candidates(empty.astype(int), empty, np.empty((0, 2)), empty, empty, empty)
    e = np.concatenate(e_idx)
    s = np.concatenate(s_all)
    o = np.concatenate(origin)
    u = np.concatenate(u_all)
    n = np.stack([-u[:, 1], u[:, 0]], axis=1)

    def rects(x0, x1, y0, y1):
        xs = np.stack([x0, x1, x1, x0], axis=1)[:, :, None]
        ys = np.stack([y0, y0, y1, y1], axis=1)[:, :, None]
        return shapely.polygons(o[:, None, :] + xs * u[:, None, :] + ys * n[:, None, :])

    t = ZONE_TOL
    w, d = block.width, block.depth
    ones = np.ones_like(s)
    blocked = rects(s + t, s + w - t, t * ones, (d - t) * ones)
    circ = rects(s - block.left + t, s + w + block.right - t, (t - block.back) * ones, (d + block.front - t) * ones)
    centre = o + (s + w / 2)[:, None] * u + (d / 2) * n
    rotation = np.arctan2(u[:, 1], u[:, 0])
    return _Candidates(e, s, centre, rotation, blocked, circ)


@dataclass
class _State:
    region: Any
    blocked: Any


def _valid_placements(block: FurnitureBlock, room_shape, state: _State, step: float) -> list[Placement]:
    """Every valid flush position for ``block`` along the current region's edges, in walk order."""
    cand = _candidates(block, _placement_edges(state.region), step)
    if len(cand.anchor) == 0:
        return []
    ok = shapely.covers(state.region, cand.blocked)
    ok &= shapely.covers(room_shape, cand.circulation)
    if state.blocked is not None:
        ok &= ~shapely.intersects(state.blocked, cand.circulation)
    return [Placement(block, (float(cand.position[k, 0]), float(cand.position[k, 1])), float(cand.rotation[k]))
            for k in np.flatnonzero(ok)]


def _advance(state: _State, placement: Placement) -> _State:
    fp = _ShapelyPolygon(placement.footprint)
    region = state.region.difference(_ShapelyPolygon(placement.circulation))
    shapely.prepare(region)
    blocked = fp if state.blocked is None else state.blocked.union(fp)
    shapely.prepare(blocked)
    return _State(region, blocked)


def furnish_room(room: Room, doors: Sequence[Door], required: Sequence[FurnitureBlock],
                 step: float = ANCHOR_STEP) -> tuple[Placement, ...]:
    """Place every required block or raise :class:`Infeasible`.

    Blocks go largest first, each flush against an edge of the region left
    over by the doors and earlier blocks.  When a block finds no position,
    the previous block steps through its remaining valid positions (single-item
    backtracking); if none of them helps the room is infeasible.
    """
    if not required:
        return ()
    room_shape = room.polygon.shape
    region = room_shape
    for door in doors:
        zone = door_zone(room.polygon, door)
        if zone is not None:
            region = region.difference(zone)
    shapely.prepare(room_shape)
    shapely.prepare(region)
    blocks = sorted(required, key=lambda b: (-b.area, b.name))

    states = [_State(region, None)]
    options: list[list[Placement]] = []  # valid positions of block i given states[i]
    placed: list[Placement] = []
    skips = [0] * len(blocks)
    moving = -1  # block being shifted to make room for its successor
    i = 0
    while i < len(blocks):
        if len(options) == i:
            options.append(_valid_placements(blocks[i], room_shape, states[i], step))
        if skips[i] < len(options[i]):
            p = options[i][skips[i]]
            placed.append(p)
            states.append(_advance(states[i], p))
            if i == moving + 1:
                moving = -1
            i += 1
            if i < len(blocks):
                skips[i] = 0
            continue
        if i == moving:
            raise Infeasible(blocks[i + 1].name, room.room_id)
        if i == 0:
            raise Infeasible(blocks[0].name, room.room_id)
        options.pop()
        moving = i - 1
        placed.pop()
        states.pop()
        i -= 1
        skips[i] += 1
    return tuple(placed)


# -- whole plans ----------------------------------------------------------------

@dataclass(frozen=True)
class FurnishResult:
    placements: Mapping[str, tuple[Placement, ...]]
    f_tot: float
    feasible: bool
    raw_area: float
    min_area: float
    failures: tuple[str, ...] = ()


def total_furniture_area(placed: float, extra: float, min_area: float, all_placed: bool = True) -> tuple[float, bool]:
    """Clamped total furniture area and the feasibility verdict."""
    raw = placed + extra
    feasible = all_placed and raw >= min_area - 1e-9
    return max(raw, min_area), feasible


def assign_blocks(plan: FloorPlan, catalog: FurnitureCatalog) -> tuple[dict[str, list[FurnitureBlock]], list[str]]:
    """Map occupancy requirements onto rooms; returns (blocks per room, unmet requirements)."""
    spec = catalog.spec(plan.occupancy)
    by_program: dict[RoomProgram, list[Room]] = {}
    for r in sorted(plan.rooms, key=lambda r: (-round(r.polygon.area, 9), r.room_id)):
        by_program.setdefault(r.program, []).append(r)
    out: dict[str, list[FurnitureBlock]] = {}
    unmet = []
    for req in spec.rooms:
        rooms = by_program.get(req.program)
        target = None
        if rooms:
            target = rooms[req.rank] if req.rank < len(rooms) else rooms[0]
        else:
            for alt in catalog.fallbacks.get(req.program, ()):
                if by_program.get(alt):
                    target = by_program[alt][0]
                    break
        if target is None:
            unmet.append(f"{req.program.value}[{req.rank}]")
            continue
        out.setdefault(target.room_id, []).extend(catalog.blocks[b] for b in req.blocks)
    return out, unmet


def furnish_plan(plan: FloorPlan, catalog: FurnitureCatalog | None = None,
                 step: float = ANCHOR_STEP) -> FurnishResult:
    catalog = catalog or FurnitureCatalog.default()
    min_area = catalog.min_furniture_area(plan.occupancy)
    assignment, failures = assign_blocks(plan, catalog)
    placements: dict[str, tuple[Placement, ...]] = {}
    for room_id in sorted(assignment):
        room = plan.room(room_id)
        try:
            placements[room_id] = furnish_room(room, plan.doors_of(room_id), assignment[room_id], step)
        except Infeasible as exc:
            failures.append(f"{room_id}:{exc.block}")
    placed = sum(p.block.area for ps in placements.values() for p in ps)
    extra = sum(r.polygon.area for r in plan.rooms if r.program is RoomProgram.EXTRA)
    f_tot, feasible = total_furniture_area(placed, extra, min_area, not failures)
    return FurnishResult(placements, f_tot, feasible, placed + extra, min_area, tuple(failures))
