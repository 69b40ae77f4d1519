"""2D polygon arithmetic shared by every other module.

Polygons are immutable, counter-clockwise, free of consecutive coincident and
collinear vertices, and start at their lexicographically smallest vertex, so
two polygons describing the same ring compare equal. Boolean operations
(half-plane clipping, erosion, difference) are delegated to shapely; the
ratio-targeted split is a bisection over an exact clipped-area function.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from shapely.geometry import Polygon as _ShapelyPolygon
from shapely.geometry.base import BaseGeometry

from .errors import (
    DegenerateGeometry,
    HoleProduced,
    RatioSplitInfeasible,
    SplitDisconnected,
    SplitEmpty,
)

EPS_POINT = 1e-6  # m, coincidence
EPS_AREA = 1e-9  # m^2, degenerate ring
REL_AREA_TOL = 1e-6  # ratio split acceptance
COLLINEAR_EPS = 1e-9  # m, vertex-to-chord distance below which a vertex is dropped
ANGLE_EPS = 1e-12
MAX_BISECTION_ITERATIONS = 200

Point2 = tuple[float, float]
Segment = tuple[Point2, Point2]


def _signed_area(pts: Sequence[Point2]) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _dist_point_line(p: Point2, a: Point2, b: Point2) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    length = math.hypot(dx, dy)
    if length == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    return abs(dx * (p[1] - a[1]) - dy * (p[0] - a[0])) / length


def _clean_ring(coords: Iterable[Sequence[float]]) -> list[Point2]:
    pts: list[Point2] = []
    for c in coords:
        x, y = float(c[0]), float(c[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DegenerateGeometry(f"non-finite coordinate {c!r}")
        if pts and math.hypot(x - pts[-1][0], y - pts[-1][1]) < EPS_POINT:
            continue
        pts.append((x, y))
    while len(pts) > 1 and math.hypot(pts[0][0] - pts[-1][0], pts[0][1] - pts[-1][1]) < EPS_POINT:
        pts.pop()
    # drop collinear vertices and zero-width spikes until stable
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if _dist_point_line(b, a, c) < COLLINEAR_EPS or math.hypot(a[0] - c[0], a[1] - c[1]) < EPS_POINT:
                del pts[i]
                changed = True
                break
    return pts


@dataclass(frozen=True)
class Polygon:
    """Simple polygon without holes, stored in canonical vertex order."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        pts = _clean_ring(self.vertices)
        if len(pts) < 3:
            raise DegenerateGeometry("polygon needs at least 3 distinct, non-collinear vertices")
        area = _signed_area(pts)
        if abs(area) < EPS_AREA:
            raise DegenerateGeometry(f"ring area {abs(area):.3g} m2 is below tolerance")
        if area < 0:
            pts.reverse()
        k = min(range(len(pts)), key=lambda i: pts[i])
        object.__setattr__(self, "vertices", tuple(pts[k:] + pts[:k]))

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[float]]) -> Polygon:
        return cls(tuple((float(c[0]), float(c[1])) for c in coords))

    @classmethod
    def rectangle(cls, x0: float, y0: float, x1: float, y1: float) -> Polygon:
        return cls(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    @cached_property
    def shape(self) -> _ShapelyPolygon:
        return _ShapelyPolygon(self.vertices)

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def perimeter(self) -> float:
        return sum(math.dist(a, b) for a, b in self.edges())

    @property
    def centroid(self) -> Point2:
        c = self.shape.centroid
        return (c.x, c.y)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def edges(self) -> list[Segment]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def is_simple(self) -> bool:
        return bool(self.shape.is_valid)

    def transformed(self, fn) -> Polygon:
        return Polygon(tuple(fn(p) for p in self.vertices))

    def almost_equals(self, other: Polygon, tol: float = EPS_POINT) -> bool:
        """Vertex-set match within ``tol`` (order-insensitive)."""
        if len(self.vertices) != len(other.vertices):
            return False
        return all(min(math.dist(p, q) for q in other.vertices) < tol for p in self.vertices)


# -- measurements ------------------------------------------------------------

def polygon_area(p: Polygon) -> float:
    return p.area


def polygon_perimeter(p: Polygon) -> float:
    return p.perimeter


def convex_hull(p: Polygon) -> Polygon:
    return Polygon.from_coords(p.shape.convex_hull.exterior.coords[:-1])


def convexity(p: Polygon) -> float:
    """area / convex-hull area; 1.0 for convex polygons. Diagnostic only."""
    return p.area / convex_hull(p).area


def caliper_extents(p: Polygon) -> tuple[float, float]:
    """(minimum width, aspect ratio) over the convex-hull edge directions.

    The aspect ratio belongs to the bounding rectangle aligned with the
    minimum-width direction.
    """
    hull = convex_hull(p)
    best_w, best_aspect = math.inf, 1.0
    for a, b in hull.edges():
        ux, uy = b[0] - a[0], b[1] - a[1]
        norm = math.hypot(ux, uy)
        ux, uy = ux / norm, uy / norm
        along = [x * ux + y * uy for x, y in hull.vertices]
        across = [-x * uy + y * ux for x, y in hull.vertices]
        length = max(along) - min(along)
        width = max(across) - min(across)
        if width < best_w:
            best_w = width
            best_aspect = max(length, width) / min(length, width)
    return best_w, best_aspect


# -- cut lines ---------------------------------------------------------------

def normalize_angle(angle: float) -> float:
    """Map an undirected line angle into [0, pi)."""
    a = math.fmod(angle, math.pi)
    if a < 0:
        a += math.pi
    if a >= math.pi - ANGLE_EPS:
        a = 0.0
    return a + 0.0  # clears -0.0


def cut_normal(angle: float) -> Point2:
    return (-math.sin(angle), math.cos(angle))


@dataclass(frozen=True)
class CutLine:
    angle: float
    offset: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "angle", normalize_angle(self.angle))

    @property
    def normal(self) -> Point2:
        return cut_normal(self.angle)

    @classmethod
    def through(cls, a: Point2, b: Point2) -> CutLine:
        angle = normalize_angle(math.atan2(b[1] - a[1], b[0] - a[0]))
        nx, ny = cut_normal(angle)
        return cls(angle, 0.5 * ((a[0] + b[0]) * nx + (a[1] + b[1]) * ny))


def projections(p: Polygon, normal: Point2) -> list[float]:
    nx, ny = normal
    return [x * nx + y * ny for x, y in p.vertices]


def _halfplane(normal: Point2, offset: float, radius: float, lower: bool) -> _ShapelyPolygon:
    nx, ny = normal
    dx, dy = ny, -nx  # along the line
    if not lower:
        nx, ny, dx, dy = -nx, -ny, -dx, -dy
        offset = -offset
    ox, oy = offset * nx, offset * ny
    far = 2.0 * radius
    return _ShapelyPolygon([
        (ox + radius * dx, oy + radius * dy),
        (ox + radius * dx - far * nx, oy + radius * dy - far * ny),
        (ox - radius * dx - far * nx, oy - radius * dy - far * ny),
        (ox - radius * dx, oy - radius * dy),
    ])


def polygons_of(geom: BaseGeometry, *, allow_holes: bool = True) -> list[Polygon]:
    """Canonical polygons (area > EPS_AREA) contained in a shapely result."""
    parts: list[_ShapelyPolygon] = []
    if geom.is_empty:
        return []
    if geom.geom_type == "Polygon":
        parts = [geom]
    elif hasattr(geom, "geoms"):
        parts = [g for g in geom.geoms if g.geom_type == "Polygon"]
    out = []
    for g in parts:
        if g.area <= EPS_AREA:
            continue
        if not allow_holes and any(_ShapelyPolygon(r).area > EPS_AREA for r in g.interiors):
            raise HoleProduced("result polygon has a hole")
        out.append(Polygon.from_coords(g.exterior.coords[:-1]))
    out.sort(key=lambda q: q.vertices)
    return out


def split_by_line(p: Polygon, cut: CutLine) -> tuple[Polygon, Polygon]:
    """Split ``p`` into the parts below and above ``cut`` (w.r.t. its normal)."""
    n = cut.normal
    proj = projections(p, n)
    lo, hi = min(proj), max(proj)
    if not (lo + EPS_POINT < cut.offset < hi - EPS_POINT):
        raise SplitEmpty(f"offset {cut.offset:.6g} outside projection range [{lo:.6g}, {hi:.6g}]")
    radius = 2.0 * max(math.hypot(x, y) for x, y in p.vertices) + abs(cut.offset) + 1.0
    pieces = []
    for lower in (True, False):
        parts = polygons_of(p.shape.intersection(_halfplane(n, cut.offset, radius, lower)))
        if not parts:
            raise SplitEmpty("one side of the cut is empty")
        if len(parts) > 1:
            raise SplitDisconnected(f"{'lower' if lower else 'upper'} side has {len(parts)} components")
        pieces.append(parts[0])
    return pieces[0], pieces[1]


def clipped_area(vertices: Sequence[Point2], normal: Point2, offset: float) -> float:
    """Area of {x in ring : x . normal <= offset} (Sutherland-Hodgman, one plane).

    Exact for non-convex rings too: bridges along the cut line have zero area.
    """
    nx, ny = normal
    out: list[Point2] = []
    n = len(vertices)
    prev = vertices[-1]
    sp = prev[0] * nx + prev[1] * ny - offset
    for i in range(n):
        cur = vertices[i]
        sc = cur[0] * nx + cur[1] * ny - offset
        if sc <= 0.0:
            if sp > 0.0:
                t = sp / (sp - sc)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif sp <= 0.0:
            t = sp / (sp - sc)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
        prev, sp = cur, sc
    if len(out) < 3:
        return 0.0
    return _signed_area(out)


def offset_for_area(p: Polygon, angle: float, target: float) -> float:
    """Bisection for the cut offset whose lower side has area ``target``."""
    n = cut_normal(normalize_angle(angle))
    proj = projections(p, n)
    lo, hi = min(proj), max(proj)
    verts = p.vertices
    for _ in range(MAX_BISECTION_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if clipped_area(verts, n, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def split_at_ratio(p: Polygon, angle: float, ratio: float) -> tuple[Polygon, Polygon, float]:
    """Cut ``p`` at ``angle`` so the lower part holds ``ratio`` of its area.

    Returns (first, second, offset); ``first`` is the lower side.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie in (0, 1), got {ratio}")
    total = p.area
    offset = offset_for_area(p, angle, ratio * total)
    cut = CutLine(angle, offset)
    try:
        first, second = split_by_line(p, cut)
    except (SplitDisconnected, SplitEmpty) as exc:
        raise RatioSplitInfeasible(str(exc)) from exc
    if abs(first.area / total - ratio) > REL_AREA_TOL:
        raise RatioSplitInfeasible(f"achieved ratio {first.area / total:.9f}, wanted {ratio:.9f}")
    return first, second, offset


# -- offsets and booleans ----------------------------------------------------

def inward_offset(p: Polygon, d: float) -> tuple[Polygon, ...]:
    """Erosion of ``p`` by distance ``d``; empty tuple when nothing survives."""
    if d < 0:
        raise ValueError("offset distance must be non-negative")
    if d < EPS_AREA:  # GEOS returns empty for vanishing distances
        return (p,)
    return tuple(polygons_of(p.shape.buffer(-d, quad_segs=8)))


def subtract(p: Polygon, q: Polygon) -> tuple[Polygon, ...]:
    """``p`` minus ``q`` as simple polygons; raises HoleProduced for holes."""
    return tuple(polygons_of(p.shape.difference(q.shape), allow_holes=False))


# -- segments ----------------------------------------------------------------

def segment_length(s: Segment) -> float:
    return math.dist(s[0], s[1])


def segment_overlap(s: Segment, t: Segment, tol: float = EPS_POINT) -> Segment | None:
    """Collinear overlap of two segments, expressed along ``s``; None if none."""
    a, b = s
    length = math.dist(a, b)
    if length < tol:
        return None
    if _dist_point_line(t[0], a, b) > tol or _dist_point_line(t[1], a, b) > tol:
        return None
    ux, uy = (b[0] - a[0]) / length, (b[1] - a[1]) / length
    u0 = (t[0][0] - a[0]) * ux + (t[0][1] - a[1]) * uy
    u1 = (t[1][0] - a[0]) * ux + (t[1][1] - a[1]) * uy
    lo, hi = max(0.0, min(u0, u1)), min(length, max(u0, u1))
    if hi - lo <= tol:
        return None
    return ((a[0] + lo * ux, a[1] + lo * uy), (a[0] + hi * ux, a[1] + hi * uy))


def segment_on_boundary(s: Segment, p: Polygon, tol: float = EPS_POINT) -> bool:
    """True if segment ``s`` lies on a single edge of ``p``."""
    for e in p.edges():
        ov = segment_overlap(e, s, tol)
        if ov is not None and abs(segment_length(ov) - segment_length(s)) <= 2 * tol:
            return True
    return False


def point_segment_distance(p: Point2, s: Segment) -> float:
    (ax, ay), (bx, by) = s
    dx, dy = bx - ax, by - ay
    l2 = dx * dx + dy * dy
    if l2 == 0:
        return math.dist(p, s[0])
    t = max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / l2))
    return math.hypot(p[0] - ax - t * dx, p[1] - ay - t * dy)
