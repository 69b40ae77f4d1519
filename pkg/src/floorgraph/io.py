"""Corpus file formats.

All records are UTF-8 JSON documents tagged with ``format`` and ``version``.
Lengths are metres, areas square metres, angles radians, polygons vertex
arrays.  Writers emit a canonical byte layout so files diff cleanly.
"""

from __future__ import annotations

import csv
import io as _io
import json
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .carbon import CityProfile, PerformanceRecord, load_profiles
from .errors import InvalidRecord, SchemaError, VersionMismatch
from .floorplan import (
    ApartmentBoundary,
    FloorPlan,
    RoomProgram,
    check_edges,
    ingest_traced,
    parse_polygon,
    parse_segment,
)
from .furnishing import FurnitureCatalog
from .hypergraph import Hypergraph, SourceRef, SubdivNode

VERSION = 1
PLAN = "floorgraph.plan"
HYPERGRAPH = "floorgraph.hypergraph"
BOUNDARY = "floorgraph.boundary"
MANIFEST = "floorgraph.manifest"
UNITS = {"length": "m", "area": "m2", "angle": "rad"}

PERF_HEADER = ("apartment_id", "eui_s [kWh/m2/yr]", "eui_hp [kWh/m2/yr]", "sda [fraction]", "provenance")


_NUM = r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?"
_POINT = re.compile(rf"\[\s+({_NUM}),\s+({_NUM})\s+\]")


def dumps(doc: Any) -> str:
    """Indented JSON with each [x, y] pair kept on one line."""
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    return _POINT.sub(r"[\1, \2]", text) + "\n"


def write_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


def _check_tag(doc: Any, fmt: str, where: str) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("expected a JSON object", where)
    if doc.get("format") != fmt:
        raise SchemaError(f"expected format {fmt!r}, got {doc.get('format')!r}", where)
    if doc.get("version") != VERSION:
        raise VersionMismatch(f"version {doc.get('version')!r} not supported (reader is {VERSION})", where)


def _pts(poly) -> list[list[float]]:
    return [[x, y] for x, y in poly.vertices]


def _seg(s) -> list[list[float]]:
    return [[s[0][0], s[0][1]], [s[1][0], s[1][1]]]


# -- plans ---------------------------------------------------------------------

def plan_to_record(plan: FloorPlan) -> dict[str, Any]:
    return {
        "format": PLAN,
        "version": VERSION,
        "id": plan.plan_id,
        "source": plan.source,
        "boundary": _pts(plan.boundary),
        "facade": [_seg(s) for s in plan.facade_edges],
        "circulation": [_seg(s) for s in plan.circulation_edges],
        "rooms": [{"id": r.room_id, "program": r.program.value, "polygon": _pts(r.polygon)} for r in plan.rooms],
        "doors": [{"rooms": list(d.rooms), "segment": _seg(d.segment), "width": d.width} for d in plan.doors],
    }


def plan_from_record(doc: Mapping[str, Any], where: str = "plan") -> FloorPlan:
    _check_tag(doc, PLAN, where)
    return ingest_traced(doc)


def read_plan(path: str | Path) -> FloorPlan:
    return plan_from_record(read_json(path), str(path))


# -- boundaries ------------------------------------------------------------------

def boundary_to_record(b: ApartmentBoundary) -> dict[str, Any]:
    return {
        "format": BOUNDARY,
        "version": VERSION,
        "id": b.boundary_id,
        "boundary": _pts(b.boundary),
        "facade": [_seg(s) for s in b.facade_edges],
        "circulation": [_seg(s) for s in b.circulation_edges],
    }


def boundary_from_record(doc: Mapping[str, Any], where: str = "boundary") -> ApartmentBoundary:
    """Accepts a boundary record or a full plan record (its outline is used)."""
    if isinstance(doc, dict) and doc.get("format") == PLAN:
        plan = plan_from_record(doc, where)
        return boundary_of(plan)
    _check_tag(doc, BOUNDARY, where)
    if "id" not in doc or "boundary" not in doc:
        raise SchemaError("boundary record needs 'id' and 'boundary'", where)
    poly = parse_polygon(doc["boundary"], f"{where}.boundary")
    facade = tuple(parse_segment(s, f"{where}.facade[{i}]") for i, s in enumerate(doc.get("facade", [])))
    circ = tuple(parse_segment(s, f"{where}.circulation[{i}]") for i, s in enumerate(doc.get("circulation", [])))
    try:
        check_edges(poly, facade, circ)
    except Exception as exc:
        raise SchemaError(str(exc), where) from None
    if not circ:
        raise SchemaError("boundary has no circulation edge", where)
    return ApartmentBoundary(str(doc["id"]), poly, facade, circ)


def boundary_of(plan: FloorPlan) -> ApartmentBoundary:
    return ApartmentBoundary(plan.plan_id, plan.boundary, plan.facade_edges, plan.circulation_edges)


def read_boundary(path: str | Path) -> ApartmentBoundary:
    return boundary_from_record(read_json(path), str(path))


# -- hypergraphs ------------------------------------------------------------------

def _node_to_dict(n: SubdivNode) -> dict[str, Any]:
    out: dict[str, Any] = {"id": n.node_id, "area_abs": n.area_abs, "area_ratio": n.area_ratio}
    if n.is_leaf:
        out.update(program=n.program.value, room=n.room_id, perimeter=n.perimeter)
    else:
        out.update(angle=n.angle, children=[_node_to_dict(c) for c in n.children])
    return out


def _node_from_dict(d: Mapping[str, Any], where: str) -> SubdivNode:
    try:
        if "children" in d:
            children = tuple(_node_from_dict(c, f"{where}.children[{i}]") for i, c in enumerate(d["children"]))
            return SubdivNode(str(d["id"]), float(d["area_abs"]), float(d["area_ratio"]),
                              angle=float(d["angle"]), children=children)
        perimeter = d.get("perimeter")
        return SubdivNode(str(d["id"]), float(d["area_abs"]), float(d["area_ratio"]),
                          program=RoomProgram.parse(d["program"]), room_id=str(d["room"]),
                          perimeter=None if perimeter is None else float(perimeter))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad tree node: {exc}", where) from None


def hypergraph_to_record(hg: Hypergraph) -> dict[str, Any]:
    return {
        "format": HYPERGRAPH,
        "version": VERSION,
        "id": hg.hypergraph_id,
        "source": {"plan_id": hg.source.plan_id, "mirrored": hg.source.mirrored, "citation": hg.source.citation},
        "frame_angle": hg.frame_angle,
        "facade_ratio": hg.facade_ratio,
        "entrance_room": hg.entrance_room,
        "facade_rooms": list(hg.facade_rooms),
        "access_edges": [list(e) for e in hg.access_edges],
        "tree": _node_to_dict(hg.root),
    }


def hypergraph_from_record(doc: Mapping[str, Any], where: str = "hypergraph") -> Hypergraph:
    _check_tag(doc, HYPERGRAPH, where)
    try:
        src = doc["source"]
        return Hypergraph(
            hypergraph_id=str(doc["id"]),
            root=_node_from_dict(doc["tree"], f"{where}.tree"),
            access_edges=tuple(tuple(e) for e in doc["access_edges"]),
            entrance_room=str(doc["entrance_room"]),
            facade_rooms=tuple(doc.get("facade_rooms", [])),
            source=SourceRef(str(src.get("plan_id", "")), bool(src.get("mirrored", False)),
                             str(src.get("citation", ""))),
            frame_angle=float(doc["frame_angle"]),
            facade_ratio=float(doc["facade_ratio"]),
        )
    except KeyError as exc:
        raise SchemaError(f"missing field {exc.args[0]!r}", where) from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), where) from None


def read_hypergraph(path: str | Path) -> Hypergraph:
    return hypergraph_from_record(read_json(path), str(path))


def read_any(path: str | Path) -> FloorPlan | Hypergraph | ApartmentBoundary:
    doc = read_json(path)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == PLAN:
        return plan_from_record(doc, str(path))
    if fmt == HYPERGRAPH:
        return hypergraph_from_record(doc, str(path))
    if fmt == BOUNDARY:
        return boundary_from_record(doc, str(path))
    raise SchemaError(f"unrecognised record format {fmt!r}", str(path))


# -- performance records --------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def performance_to_csv(records: Iterable[PerformanceRecord]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PERF_HEADER)
    for r in sorted(records, key=lambda r: r.apartment_id):
        sda = ";".join(f"{k}={_fmt(v)}" for k, v in sorted(r.sda.items()))
        w.writerow([r.apartment_id, _fmt(r.eui_s), _fmt(r.eui_hp), sda, r.provenance])
    return buf.getvalue()


def performance_from_csv(text: str, where: str = "performance") -> dict[str, PerformanceRecord]:
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows:
        raise SchemaError("empty performance file", where)
    header = tuple(h.strip() for h in rows[0])
    if header != PERF_HEADER:
        raise SchemaError(f"header must be {','.join(PERF_HEADER)}", f"{where}:1")
    out: dict[str, PerformanceRecord] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        loc = f"{where}:{lineno}"
        if not row:
            continue
        if len(row) != len(PERF_HEADER):
            raise SchemaError(f"expected {len(PERF_HEADER)} columns, got {len(row)}", loc)
        aid, eui_s, eui_hp, sda_cell, prov = row
        try:
            sda = {}
            for item in filter(None, sda_cell.split(";")):
                k, v = item.split("=")
                sda[k.strip()] = float(v)
            rec = PerformanceRecord(aid, float(eui_s), float(eui_hp), sda, prov)
        except ValueError as exc:
            raise SchemaError(str(exc), loc) from None
        except InvalidRecord as exc:
            raise SchemaError(str(exc), loc) from None
        if aid in out:
            raise SchemaError(f"duplicate apartment id {aid!r}", loc)
        out[aid] = rec
    return out


def read_performance(path: str | Path) -> dict[str, PerformanceRecord]:
    return performance_from_csv(Path(path).read_text(encoding="utf-8"), str(path))


# -- bundles ---------------------------------------------------------------------------

@dataclass
class CorpusBundle:
    plans: dict[str, FloorPlan] = field(default_factory=dict)
    hypergraphs: dict[str, Hypergraph] = field(default_factory=dict)
    catalog: FurnitureCatalog | None = None
    profiles: dict[str, CityProfile] = field(default_factory=dict)
    performance: dict[str, PerformanceRecord] = field(default_factory=dict)
    provenance: str = ""

    def pairs(self) -> list[tuple[Hypergraph, FloorPlan]]:
        """Hypergraphs with their source plan, in id order."""
        return [(hg, self.plans[hg.source.plan_id]) for _, hg in sorted(self.hypergraphs.items())
                if hg.source.plan_id in self.plans]


def manifest(plans: Sequence[str], hypergraphs: Sequence[str], catalog: str | None = None,
             profiles: str | None = None, performance: str | None = None, provenance: str = "") -> dict[str, Any]:
    doc: dict[str, Any] = {"format": MANIFEST, "version": VERSION, "units": UNITS, "provenance": provenance,
                           "plans": sorted(plans), "hypergraphs": sorted(hypergraphs)}
    for key, val in (("catalog", catalog), ("profiles", profiles), ("performance", performance)):
        if val:
            doc[key] = val
    return doc


def load_bundle(root: str | Path) -> CorpusBundle:
    root = Path(root)
    man_path = root / "manifest.json"
    if not man_path.exists():
        raise SchemaError("no manifest.json", str(root))
    man = read_json(man_path)
    _check_tag(man, MANIFEST, str(man_path))
    bundle = CorpusBundle(provenance=str(man.get("provenance", "")))
    for rel in man.get("plans", []):
        p = read_plan(root / rel)
        bundle.plans[p.plan_id] = p
    for rel in man.get("hypergraphs", []):
        hg = read_hypergraph(root / rel)
        if hg.source.plan_id and hg.source.plan_id not in bundle.plans and not hg.source.citation:
            raise SchemaError(f"source plan {hg.source.plan_id!r} is not in the bundle", str(root / rel))
        bundle.hypergraphs[hg.hypergraph_id] = hg
    if man.get("catalog"):
        bundle.catalog = FurnitureCatalog.load(root / man["catalog"])
    bundle.profiles = load_profiles(root / man["profiles"] if man.get("profiles") else None)
    if man.get("performance"):
        bundle.performance = read_performance(root / man["performance"])
    return bundle


def load_library(root: str | Path) -> list[Hypergraph]:
    """Hypergraphs of a bundle, or of every hypergraph record in a directory."""
    root = Path(root)
    if (root / "manifest.json").exists():
        return [hg for _, hg in sorted(load_bundle(root).hypergraphs.items())]
    if not root.is_dir():
        raise SchemaError("library is not a directory", str(root))
    out = []
    for path in sorted(root.rglob("*.json")):
        doc = read_json(path)
        if isinstance(doc, dict) and doc.get("format") == HYPERGRAPH:
            out.append(hypergraph_from_record(doc, str(path)))
    return sorted(out, key=lambda h: h.hypergraph_id)
