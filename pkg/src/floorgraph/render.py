"""Deterministic SVG drawings of plans and hypergraph trees."""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

from .floorplan import FloorPlan, RoomProgram
from .furnishing import Placement
from .geometry import Point2
from .hypergraph import Hypergraph, SubdivNode

SCALE = 50.0  # px per metre
MARGIN = 0.6  # m

PROGRAM_COLORS = {
    RoomProgram.LIVING: "#f4d58d",
    RoomProgram.BEDROOM: "#a7c7e7",
    RoomProgram.KITCHEN: "#f7a072",
    RoomProgram.BATH: "#9ad1b8",
    RoomProgram.EXTRA: "#d3c4e3",
    RoomProgram.FOYER: "#e6e6e6",
}


def _n(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _header(width: float, height: float) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(width)}" height="{_n(height)}" '
        f'viewBox="0 0 {_n(width)} {_n(height)}">',
        f'<rect x="0" y="0" width="{_n(width)}" height="{_n(height)}" fill="#ffffff"/>',
    ]


def render_plan(plan: FloorPlan, placements: Mapping[str, Sequence[Placement]] | None = None) -> str:
    x0, y0, x1, y1 = plan.boundary.bounds
    w = (x1 - x0 + 2 * MARGIN) * SCALE
    h = (y1 - y0 + 2 * MARGIN) * SCALE

    def xy(p: Point2) -> tuple[str, str]:
        return _n((p[0] - x0 + MARGIN) * SCALE), _n((y1 - p[1] + MARGIN) * SCALE)

    def pt(p: Point2) -> str:
        return ",".join(xy(p))

    def pts(ring: Iterable[Point2]) -> str:
        return " ".join(pt(p) for p in ring)

    out = _header(w, h)
    out.append(f'<g id="plan" data-plan="{escape(plan.plan_id)}">')
    for r in plan.rooms:
        out.append(f'<polygon class="room {r.program.value}" data-room="{escape(r.room_id)}" '
                   f'points="{pts(r.polygon.vertices)}" fill="{PROGRAM_COLORS[r.program]}" '
                   f'stroke="#333333" stroke-width="3"/>')
    out.append(f'<polygon class="boundary" points="{pts(plan.boundary.vertices)}" fill="none" '
               f'stroke="#000000" stroke-width="5"/>')
    for a, b in plan.facade_edges:
        out.append(f'<polyline class="facade" points="{pts((a, b))}" stroke="#2b6cb0" stroke-width="7" fill="none"/>')
    for a, b in plan.circulation_edges:
        out.append(f'<polyline class="circulation" points="{pts((a, b))}" stroke="#dd6b20" stroke-width="7" '
                   f'stroke-dasharray="10,6" fill="none"/>')
    for d in sorted(plan.doors, key=lambda d: d.rooms):
        a, b = d.segment
        out.append(f'<polyline class="door" data-rooms="{escape("-".join(d.rooms))}" points="{pts((a, b))}" '
                   f'stroke="#ffffff" stroke-width="9" fill="none"/>')
    for room_id in sorted(placements or {}):
        for p in placements[room_id]:
            out.append(f'<polygon class="circulation-zone" points="{pts(p.circulation)}" fill="none" '
                       f'stroke="#999999" stroke-width="1" stroke-dasharray="3,3"/>')
            out.append(f'<polygon class="furniture" data-block="{escape(p.block.name)}" '
                       f'points="{pts(p.footprint)}" fill="#ffffff" fill-opacity="0.6" stroke="#444444" '
                       f'stroke-width="1.5"/>')
    for r in plan.rooms:
        c = r.polygon.shape.representative_point()
        tx, ty = xy((c.x, c.y))
        out.append(f'<text x="{tx}" y="{ty}" '
                   f'font-family="sans-serif" font-size="12" text-anchor="middle">'
                   f'{escape(r.room_id)} ({r.program.value}, {r.polygon.area:.1f} m2)</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _layout(root: SubdivNode) -> dict[str, tuple[float, int]]:
    pos: dict[str, tuple[float, int]] = {}
    slot = [0]

    def visit(node: SubdivNode, depth: int) -> float:
        if node.is_leaf:
            x = float(slot[0])
            slot[0] += 1
        else:
            x = sum(visit(c, depth + 1) for c in node.children) / len(node.children)
        pos[node.node_id] = (x, depth)
        return x

    visit(root, 0)
    return pos


def render_hypergraph(hg: Hypergraph) -> str:
    """Subdivision tree as a layered drawing; access edges as arcs below the leaves."""
    pos = _layout(hg.root)
    n_leaves = len(hg.room_ids)
    max_depth = max(d for _, d in pos.values())
    col, row, pad = 110.0, 80.0, 60.0
    arc_base = pad + (max_depth + 1) * row
    w = 2 * pad + max(n_leaves - 1, 0) * col
    h = arc_base + row * (1 + 0.5 * max(n_leaves - 1, 0)) + pad

    def xy(node_id: str) -> tuple[float, float]:
        x, d = pos[node_id]
        return pad + x * col, pad + d * row

    out = _header(w, h)
    out.append(f'<g id="hypergraph" data-hypergraph="{escape(hg.label)}">')
    for node, _ in hg.root.walk():
        px, py = xy(node.node_id)
        for c in node.children:
            cx, cy = xy(c.node_id)
            out.append(f'<line class="subdivision" x1="{_n(px)}" y1="{_n(py)}" x2="{_n(cx)}" y2="{_n(cy)}" '
                       f'stroke="#333333" stroke-width="2"/>')
    leaf_of = {n.room_id: n.node_id for n in hg.root.leaves()}
    for a, b in hg.access_edges:
        ax, ay = xy(leaf_of[a])
        bx, by = xy(leaf_of[b])
        span = abs(pos[leaf_of[a]][0] - pos[leaf_of[b]][0])
        cy = arc_base + row * 0.5 * span
        out.append(f'<path class="access" d="M {_n(ax)} {_n(ay)} Q {_n((ax + bx) / 2)} {_n(cy)} '
                   f'{_n(bx)} {_n(by)}" fill="none" stroke="#c53030" stroke-width="2"/>')
    ex, ey = xy(leaf_of[hg.entrance_room])
    out.append(f'<line class="entrance" x1="{_n(ex)}" y1="{_n(ey)}" x2="{_n(ex)}" y2="{_n(ey + 28)}" '
               f'stroke="#dd6b20" stroke-width="3"/>')
    for node, _ in hg.root.walk():
        x, y = xy(node.node_id)
        if node.is_leaf:
            fill = PROGRAM_COLORS[node.program]
            label = f"{node.room_id}"
            sub = f"{node.program.value} {node.area_abs:.1f} m2"
        else:
            fill = "#ffffff"
            label = f"{math.degrees(node.angle):.1f} deg"
            sub = f"{node.children[0].area_ratio:.3f}"
        out.append(f'<circle class="node" data-node="{escape(node.node_id)}" cx="{_n(x)}" cy="{_n(y)}" r="16" '
                   f'fill="{fill}" stroke="#333333" stroke-width="2"/>')
        out.append(f'<text x="{_n(x)}" y="{_n(y - 22)}" font-family="sans-serif" font-size="11" '
                   f'text-anchor="middle">{escape(label)}</text>')
        out.append(f'<text x="{_n(x)}" y="{_n(y + 30)}" font-family="sans-serif" font-size="9" '
                   f'text-anchor="middle">{escape(sub)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
