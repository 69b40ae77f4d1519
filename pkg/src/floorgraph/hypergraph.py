"""Hypergraph codec: subdivision tree + access graph <-> floor plan.

Cut angles are stored relative to the source plan's circulation heading (the
direction of its longest circulation edge, traversed with the interior on the
left). A stored angle ``a`` in [0, pi) means: the cut line has direction
``a + heading`` and the *first* child lies on the side with the smaller
projection onto the normal ``(-sin a', cos a')`` of the resulting absolute
angle ``a'``. When ``a + heading`` wraps past pi the normal flips, so the
first child moves to the other side; this keeps apply a rigid rotation of the
source layout rather than a rotation-plus-reflection.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, replace

from .errors import (
    ApplyFailed,
    InsufficientArea,
    InvalidHypergraph,
    NoCirculationEdge,
    NotBspRepresentable,
    PlanError,
    RatioSplitInfeasible,
    SplitDisconnected,
    SplitEmpty,
)
from .floorplan import (
    FloorPlan,
    PlanSkeleton,
    Room,
    RoomProgram,
    canonical_edges,
    facade_ratio,
    facade_rooms,
)
from .geometry import (
    ANGLE_EPS,
    EPS_POINT,
    CutLine,
    Polygon,
    Segment,
    normalize_angle,
    segment_length,
    segment_overlap,
    split_at_ratio,
    split_by_line,
)

TWO_PI = 2.0 * math.pi
CLASSIFY_TOL = EPS_POINT


class RetentionMode(str, enum.Enum):
    RATIO = "ratio_retain"
    AREA = "area_retain"

    @classmethod
    def parse(cls, value: str | RetentionMode) -> RetentionMode:
        if isinstance(value, RetentionMode):
            return value
        aliases = {"ratio": cls.RATIO, "area": cls.AREA}
        return aliases.get(value) or cls(value)


@dataclass(frozen=True)
class SubdivNode:
    node_id: str
    area_abs: float
    area_ratio: float
    angle: float | None = None
    children: tuple[SubdivNode, ...] = ()
    program: RoomProgram | None = None
    room_id: str | None = None
    perimeter: float | None = None  # source room perimeter, leaves only

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self, depth: int = 0) -> Iterator[tuple[SubdivNode, int]]:
        yield self, depth
        for c in self.children:
            yield from c.walk(depth + 1)

    def leaves(self) -> list[SubdivNode]:
        return [n for n, _ in self.walk() if n.is_leaf]


@dataclass(frozen=True)
class SourceRef:
    plan_id: str
    mirrored: bool = False
    citation: str = ""


@dataclass(frozen=True)
class Hypergraph:
    hypergraph_id: str
    root: SubdivNode
    access_edges: tuple[tuple[str, str], ...]
    entrance_room: str
    facade_rooms: tuple[str, ...]
    source: SourceRef
    frame_angle: float
    facade_ratio: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "access_edges", canonical_edges(self.access_edges))
        object.__setattr__(self, "facade_rooms", tuple(sorted(self.facade_rooms)))
        validate(self)

    @property
    def room_ids(self) -> tuple[str, ...]:
        return tuple(n.room_id for n in self.root.leaves())

    @property
    def leaf_area(self) -> float:
        return sum(n.area_abs for n in self.root.leaves())

    @property
    def label(self) -> str:
        return self.hypergraph_id + ("~m" if self.source.mirrored else "")


def validate(hg: Hypergraph) -> None:
    leaves = set()
    for node, _ in hg.root.walk():
        if node.is_leaf:
            if node.program is None or not node.room_id:
                raise InvalidHypergraph(f"leaf {node.node_id} lacks program or room id")
            if node.room_id in leaves:
                raise InvalidHypergraph(f"duplicate room id {node.room_id}")
            leaves.add(node.room_id)
            continue
        if len(node.children) != 2 or node.angle is None:
            raise InvalidHypergraph(f"internal node {node.node_id} needs 2 children and an angle")
        a, b = node.children
        if abs(a.area_ratio + b.area_ratio - 1.0) > 1e-9:
            raise InvalidHypergraph(f"child ratios of {node.node_id} do not sum to 1")
        if abs(a.area_abs + b.area_abs - node.area_abs) > 1e-6 * node.area_abs:
            raise InvalidHypergraph(f"child areas of {node.node_id} do not sum to the parent")
    for a, b in hg.access_edges:
        if a not in leaves or b not in leaves:
            raise InvalidHypergraph(f"access edge {a}-{b} references an unknown room")
    if hg.entrance_room not in leaves:
        raise InvalidHypergraph(f"entrance room {hg.entrance_room!r} is not a leaf")
    if not access_connected(leaves, hg.access_edges):
        raise InvalidHypergraph("access graph is not connected")
    if not hg.source.plan_id and not hg.source.citation:
        raise InvalidHypergraph("hypergraph needs a source reference")


def access_connected(rooms: set[str] | Sequence[str], edges: Sequence[tuple[str, str]]) -> bool:
    rooms = set(rooms)
    if not rooms:
        return False
    adj: dict[str, set[str]] = {r: set() for r in rooms}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    start = min(rooms)
    seen, todo = {start}, deque([start])
    while todo:
        for nxt in adj[todo.popleft()]:
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen == rooms


# -- circulation frame -----------------------------------------------------------

def _longest(circulation_edges: Sequence[Segment]) -> Segment:
    if not circulation_edges:
        raise NoCirculationEdge("boundary has no circulation edge")
    best = circulation_edges[0]
    for s in circulation_edges[1:]:
        if segment_length(s) > segment_length(best) + 1e-12:
            best = s
    return best


def circulation_heading(boundary: Polygon, circulation_edges: Sequence[Segment]) -> float:
    """Direction in [0, 2pi) of the longest circulation edge, interior on its left."""
    seg = _longest(list(circulation_edges))
    for a, b in boundary.edges():
        if segment_overlap((a, b), seg) is not None:
            h = math.atan2(b[1] - a[1], b[0] - a[0]) % TWO_PI
            return 0.0 if h >= TWO_PI - ANGLE_EPS else h + 0.0
    raise NoCirculationEdge(f"circulation segment {seg} is not on the boundary")


def circulation_frame(boundary: Polygon, circulation_edges: Sequence[Segment]) -> float:
    """Undirected direction in [0, pi) of the longest circulation edge."""
    return normalize_angle(circulation_heading(boundary, circulation_edges))


def oriented(theta: float) -> tuple[float, bool]:
    """Fold a directed cut angle into [0, pi); True if the normal was flipped."""
    t = theta % TWO_PI
    if t >= TWO_PI - ANGLE_EPS:
        return 0.0, False
    if t >= math.pi - ANGLE_EPS:
        return max(t - math.pi, 0.0) + 0.0, True
    return t + 0.0, False


# -- encode ------------------------------------------------------------------------

@dataclass
class _Counter:
    n: int = 0

    def next(self) -> str:
        nid = f"n{self.n}"
        self.n += 1
        return nid


def _candidate_cuts(rooms: Sequence[Room]) -> list[CutLine]:
    seen = {}
    for r in rooms:
        for a, b in r.polygon.edges():
            cut = CutLine.through(a, b)
            key = (round(cut.angle, 9), round(cut.offset, 6))
            seen.setdefault(key, cut)
    return [seen[k] for k in sorted(seen)]


def _classify(rooms: Sequence[Room], cut: CutLine) -> tuple[list[Room], list[Room]] | None:
    nx, ny = cut.normal
    lower, upper = [], []
    for r in rooms:
        s = [x * nx + y * ny - cut.offset for x, y in r.polygon.vertices]
        if max(s) <= CLASSIFY_TOL:
            lower.append(r)
        elif min(s) >= -CLASSIFY_TOL:
            upper.append(r)
        else:
            return None
    if not lower or not upper:
        return None
    return lower, upper


def free_cuts(region: Polygon, rooms: Sequence[Room]) -> list[tuple[CutLine, Polygon, Polygon, list[Room], list[Room]]]:
    """Straight cuts of ``region`` that run along room walls only and leave two connected parts."""
    out = []
    for cut in _candidate_cuts(rooms):
        groups = _classify(rooms, cut)
        if groups is None:
            continue
        try:
            lower, upper = split_by_line(region, cut)
        except (SplitDisconnected, SplitEmpty):
            continue
        lo_rooms, up_rooms = groups
        if abs(lower.area - sum(r.polygon.area for r in lo_rooms)) > 1e-6 * region.area:
            continue
        out.append((cut, lower, upper, lo_rooms, up_rooms))
    return out


def _encode(region: Polygon, rooms: list[Room], level: int, heading: float,
            ratio: float, counter: _Counter) -> SubdivNode:
    nid = counter.next()
    if len(rooms) == 1:
        r = rooms[0]
        return SubdivNode(nid, region.area, ratio, program=r.program, room_id=r.room_id,
                          perimeter=r.polygon.perimeter)
    cuts = free_cuts(region, rooms)
    if not cuts:
        raise NotBspRepresentable(
            f"no free cut separates rooms {', '.join(sorted(r.room_id for r in rooms))}",
            level, tuple(sorted(r.room_id for r in rooms)))
    total = region.area

    def key(c):
        cut, lower, upper = c[0], c[1], c[2]
        return (round(abs(lower.area - upper.area) / total, 9), round(cut.angle, 9), round(cut.offset, 9))

    cut, lower, upper, lo_rooms, up_rooms = min(cuts, key=key)
    angle, flipped = oriented(cut.angle - heading)
    parts = [(lower, lo_rooms), (upper, up_rooms)]
    if flipped:
        parts.reverse()
    children = tuple(_encode(poly, rs, level + 1, heading, poly.area / total, counter) for poly, rs in parts)
    b = children[1]
    children = (children[0], replace(b, area_ratio=1.0 - children[0].area_ratio))
    return SubdivNode(nid, total, ratio, angle=angle, children=children)


def encode_plan(plan: FloorPlan, hypergraph_id: str | None = None) -> Hypergraph:
    """Inverse subdivision: find the BSP tree and access graph of ``plan``."""
    heading = circulation_heading(plan.boundary, plan.circulation_edges)
    entrance = plan.entrance_room
    if entrance is None:
        raise PlanError(f"plan {plan.plan_id} has no entrance door")
    root = _encode(plan.boundary, list(plan.rooms), 0, heading, 1.0, _Counter())
    return Hypergraph(
        hypergraph_id=hypergraph_id or plan.plan_id,
        root=root,
        access_edges=plan.access_edges,
        entrance_room=entrance,
        facade_rooms=facade_rooms(plan.rooms, plan.facade_edges),
        source=SourceRef(plan.plan_id),
        frame_angle=heading,
        facade_ratio=facade_ratio(plan),
    )


# -- apply -------------------------------------------------------------------------

def _apply(node: SubdivNode, region: Polygon, heading: float, mode: RetentionMode,
           out: list[Room]) -> None:
    if node.is_leaf:
        out.append(Room(node.room_id, node.program, region))
        return
    first, second = node.children
    abs_angle, flipped = oriented(node.angle + heading)
    if mode is RetentionMode.RATIO:
        r = first.area_ratio
    else:
        r = first.area_abs / region.area
        if r >= 1.0 - 1e-12:
            raise InsufficientArea(f"node {node.node_id}: region {region.area:.3f} m2 "
                                   f"cannot hold {first.area_abs:.3f} m2 plus a second child")
    try:
        lower, upper, _ = split_at_ratio(region, abs_angle, 1.0 - r if flipped else r)
    except RatioSplitInfeasible as exc:
        raise ApplyFailed(node.node_id, str(exc)) from exc
    a, b = (upper, lower) if flipped else (lower, upper)
    _apply(first, a, heading, mode, out)
    _apply(second, b, heading, mode, out)


def apply(hg: Hypergraph, boundary: Polygon, mode: RetentionMode | str = RetentionMode.RATIO,
          target_frame_angle: float = 0.0) -> PlanSkeleton:
    """Subdivide ``boundary`` with ``hg``; ``target_frame_angle`` is the target's circulation heading."""
    mode = RetentionMode.parse(mode)
    if mode is RetentionMode.AREA and boundary.area < hg.leaf_area * (1.0 - 1e-9):
        raise InsufficientArea(f"boundary area {boundary.area:.3f} m2 < source area {hg.leaf_area:.3f} m2")
    rooms: list[Room] = []
    _apply(hg.root, boundary, target_frame_angle, mode, rooms)
    return PlanSkeleton(boundary=boundary, rooms=tuple(rooms), access_edges=hg.access_edges,
                        entrance_room=hg.entrance_room, plan_id=hg.label)


# -- mirror ------------------------------------------------------------------------

def _mirror(node: SubdivNode) -> SubdivNode:
    if node.is_leaf:
        return node
    a, b = (_mirror(c) for c in node.children)
    if node.angle == 0.0:
        return replace(node, children=(a, b))
    return replace(node, angle=normalize_angle(math.pi - node.angle), children=(b, a))


def mirror(hg: Hypergraph) -> Hypergraph:
    """Left-right reflection as seen from the circulation side."""
    return replace(hg, root=_mirror(hg.root), source=replace(hg.source, mirrored=not hg.source.mirrored))
