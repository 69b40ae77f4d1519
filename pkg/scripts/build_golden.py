"""Write the hand-built golden corpus under corpus/golden.

Every plan is drawn by hand as rectangles (or simple polygons) inside its
outline; doors are placed by the package's door rule from the listed access
edges.  Run from the repository root:

    python3 scripts/build_golden.py [--seed N]
"""

from __future__ import annotations

import argparse
import shutil
from dataclasses import replace
from pathlib import Path

import numpy as np

from floorgraph import io as fio
from floorgraph.carbon import BUILTIN_PROFILES, profiles_document
from floorgraph.floorplan import (
    PlanSkeleton,
    Room,
    RoomProgram,
    check_doors,
    check_tiling,
    realize_doors,
)
from floorgraph.furnishing import FurnitureCatalog
from floorgraph.geometry import Polygon
from floorgraph.hypergraph import encode_plan
from floorgraph.render import render_hypergraph, render_plan
from floorgraph.synthetic import synthetic_record
from floorgraph.validity import check_plan

ROOT = Path(__file__).resolve().parents[1] / "corpus" / "golden"
SOURCE = "golden corpus, hand-drawn"

P = RoomProgram
LIV, BED, KIT, BATH, EXTRA, FOYER = P.LIVING, P.BEDROOM, P.KITCHEN, P.BATH, P.EXTRA, P.FOYER


def rect(x0, y0, x1, y1):
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def seg(a, b):
    return (tuple(map(float, a)), tuple(map(float, b)))


def build(pid, outline, rooms, facade, circulation, access, entrance):
    boundary = Polygon.from_coords(outline)
    rs = tuple(Room(rid, prog, Polygon.from_coords(poly)) for rid, prog, poly in rooms)
    check_tiling(boundary, rs)
    skel = PlanSkeleton(boundary, rs, tuple(access), entrance,
                        tuple(seg(*s) for s in facade), tuple(seg(*s) for s in circulation), pid)
    plan = realize_doors(skel)
    plan = replace(plan, source=SOURCE)
    check_doors(plan)
    return plan


def golden_plans():
    plans = []

    # two-room studio
    plans.append(build(
        "g01_studio_two_room", rect(0, 0, 7.5, 5),
        [("bath", BATH, rect(0, 0, 2.2, 5)), ("living", LIV, rect(2.2, 0, 7.5, 5))],
        facade=[((7.5, 5), (0, 5))], circulation=[((2.2, 0), (7.5, 0))],
        access=[("bath", "living")], entrance="living"))

    plans.append(build(
        "g02_studio", rect(0, 0, 6, 7.4),
        [("bath", BATH, rect(0, 0, 3, 2.6)), ("foyer", FOYER, rect(3, 0, 6, 2.6)),
         ("living", LIV, rect(0, 2.6, 6, 7.4))],
        facade=[((6, 7.4), (0, 7.4))], circulation=[((3, 0), (6, 0))],
        access=[("foyer", "bath"), ("foyer", "living")], entrance="foyer"))

    plans.append(build(
        "g03_studio_kitchen", rect(0, 0, 7.5, 6.4),
        [("bath", BATH, rect(0, 0, 3.2, 2.6)), ("foyer", FOYER, rect(3.2, 0, 4.8, 2.6)),
         ("kitchen", KIT, rect(4.8, 0, 7.5, 2.6)), ("living", LIV, rect(0, 2.6, 7.5, 6.4))],
        facade=[((7.5, 6.4), (0, 6.4)), ((7.5, 0), (7.5, 6.4))], circulation=[((3.2, 0), (4.8, 0))],
        access=[("foyer", "bath"), ("foyer", "living"), ("living", "kitchen")], entrance="foyer"))

    plans.append(build(
        "g04_1bed", rect(0, 0, 10.4, 6.6),
        [("bath", BATH, rect(0, 0, 3, 2.6)), ("foyer", FOYER, rect(3, 0, 5, 2.6)),
         ("kitchen", KIT, rect(5, 0, 10.4, 2.6)), ("bed", BED, rect(0, 2.6, 4, 6.6)),
         ("living", LIV, rect(4, 2.6, 10.4, 6.6))],
        facade=[((10.4, 6.6), (0, 6.6)), ((10.4, 0), (10.4, 6.6))], circulation=[((3, 0), (5, 0))],
        access=[("foyer", "bath"), ("foyer", "bed"), ("foyer", "living"), ("living", "kitchen")],
        entrance="foyer"))

    plans.append(build(
        "g05_1bed_deep", rect(0, 0, 8.6, 8.6),
        [("kitchen", KIT, rect(0, 0, 3.6, 2.6)), ("foyer", FOYER, rect(3.6, 0, 5.6, 2.6)),
         ("bath", BATH, rect(5.6, 0, 8.6, 2.6)), ("living", LIV, rect(0, 2.6, 4.6, 8.6)),
         ("bed", BED, rect(4.6, 2.6, 8.6, 8.6))],
        facade=[((8.6, 8.6), (0, 8.6)), ((0, 8.6), (0, 0))], circulation=[((3.6, 0), (5.6, 0))],
        access=[("foyer", "bath"), ("foyer", "living"), ("living", "kitchen"), ("living", "bed")],
        entrance="foyer"))

    # 53.6 m2 one-bed: exactly 1.6 x the one-bed minimum furniture area, too tight to furnish
    plans.append(build(
        "g06_1bed_compact", rect(0, 0, 8, 6.7),
        [("bath", BATH, rect(0, 0, 2.4, 3)), ("foyer", FOYER, rect(2.4, 0, 4.4, 3)),
         ("kitchen", KIT, rect(4.4, 0, 8, 3)), ("bed", BED, rect(0, 3, 3.4, 6.7)),
         ("living", LIV, rect(3.4, 3, 8, 6.7))],
        facade=[((8, 6.7), (0, 6.7)), ((8, 0), (8, 6.7))], circulation=[((2.4, 0), (4.4, 0))],
        access=[("foyer", "bath"), ("foyer", "bed"), ("foyer", "living"), ("living", "kitchen")],
        entrance="foyer"))

    plans.append(build(
        "g07_1bed_wide", rect(0, 0, 13, 5.6),
        [("bath", BATH, rect(0, 0, 3.8, 2.2)), ("bed", BED, rect(0, 2.2, 3.8, 5.6)),
         ("foyer", FOYER, rect(3.8, 0, 5.6, 5.6)), ("living", LIV, rect(5.6, 0, 9.8, 5.6)),
         ("kitchen", KIT, rect(9.8, 0, 13, 5.6))],
        facade=[((13, 5.6), (0, 5.6)), ((13, 0), (13, 5.6))], circulation=[((3.8, 0), (5.6, 0))],
        access=[("foyer", "bath"), ("foyer", "bed"), ("foyer", "living"), ("living", "kitchen")],
        entrance="foyer"))

    # L-shaped one-bed
    plans.append(build(
        "g08_1bed_L", [(0, 0), (9.6, 0), (9.6, 6), (4.8, 6), (4.8, 10.4), (0, 10.4)],
        [("bath", BATH, rect(0, 0, 3, 2.6)), ("foyer", FOYER, rect(3, 0, 6, 2.6)),
         ("kitchen", KIT, rect(6, 0, 9.6, 2.6)), ("living", LIV, rect(0, 2.6, 9.6, 6)),
         ("bed", BED, rect(0, 6, 4.8, 10.4))],
        facade=[((9.6, 0), (9.6, 6)), ((9.6, 6), (4.8, 6)), ((4.8, 6), (4.8, 10.4)), ((4.8, 10.4), (0, 10.4))],
        circulation=[((3, 0), (6, 0))],
        access=[("foyer", "bath"), ("foyer", "living"), ("living", "kitchen"), ("living", "bed")],
        entrance="foyer"))

    # stepped facade
    plans.append(build(
        "g09_1bed_stepped", [(0, 0), (11, 0), (11, 4.2), (8, 4.2), (8, 7), (3.6, 7), (3.6, 8.4), (0, 8.4)],
        [("bath", BATH, rect(0, 0, 3.6, 2.4)), ("bed", BED, rect(0, 2.4, 3.6, 8.4)),
         ("foyer", FOYER, rect(3.6, 0, 8, 1.8)), ("living", LIV, rect(3.6, 1.8, 8, 7)),
         ("kitchen", KIT, rect(8, 0, 11, 4.2))],
        facade=[((11, 0), (11, 4.2)), ((11, 4.2), (8, 4.2)), ((8, 4.2), (8, 7)), ((8, 7), (3.6, 7)),
                ((3.6, 7), (3.6, 8.4)), ((3.6, 8.4), (0, 8.4))],
        circulation=[((3.6, 0), (8, 0))],
        access=[("foyer", "bath"), ("foyer", "living"), ("living", "bed"), ("living", "kitchen")],
        entrance="foyer"))

    plans.append(build(
        "g10_studio_L", [(0, 0), (8.4, 0), (8.4, 4), (4.6, 4), (4.6, 7.6), (0, 7.6)],
        [("bath", BATH, rect(0, 0, 4.6, 2.3)), ("living", LIV, rect(0, 2.3, 4.6, 7.6)),
         ("foyer", FOYER, rect(4.6, 0, 8.4, 1.5)), ("kitchen", KIT, rect(4.6, 1.5, 8.4, 4))],
        facade=[((0, 7.6), (0, 0)), ((4.6, 7.6), (0, 7.6)), ((4.6, 4), (4.6, 7.6)), ((8.4, 4), (4.6, 4)),
                ((8.4, 0), (8.4, 4))],
        circulation=[((4.6, 0), (8.4, 0))],
        access=[("foyer", "bath"), ("foyer", "kitchen"), ("kitchen", "living")], entrance="foyer"))

    # two-bed with a hall, eight rooms
    plans.append(build(
        "g11_2bed_hall", rect(0, 0, 11.6, 9.2),
        [("bath", BATH, rect(0, 0, 3, 2.6)), ("entry", FOYER, rect(3, 0, 5, 2.6)),
         ("store", EXTRA, rect(5, 0, 6.8, 2.6)), ("kitchen", KIT, rect(6.8, 0, 11.6, 2.6)),
         ("hall", FOYER, rect(0, 2.6, 11.6, 3.8)),
         ("bed1", BED, rect(0, 3.8, 3.6, 9.2)), ("bed2", BED, rect(3.6, 3.8, 6.8, 9.2)),
         ("living", LIV, rect(6.8, 3.8, 11.6, 9.2))],
        facade=[((11.6, 9.2), (0, 9.2)), ((11.6, 0), (11.6, 9.2))], circulation=[((3, 0), (5, 0))],
        access=[("entry", "hall"), ("hall", "bath"), ("hall", "store"), ("hall", "kitchen"),
                ("hall", "bed1"), ("hall", "bed2"), ("hall", "living")],
        entrance="entry"))

    # U-shaped two-bed around a courtyard
    plans.append(build(
        "g12_2bed_U", [(0, 0), (13.6, 0), (13.6, 9.5), (9.6, 9.5), (9.6, 6.8), (4, 6.8), (4, 9.5), (0, 9.5)],
        [("bath", BATH, rect(0, 0, 4, 2.2)), ("store", EXTRA, rect(0, 2.2, 4, 3.6)),
         ("bed1", BED, rect(0, 3.6, 4, 9.5)), ("foyer", FOYER, rect(4, 0, 9.6, 1.4)),
         ("living", LIV, rect(4, 1.4, 9.6, 6.8)), ("kitchen", KIT, rect(9.6, 0, 13.6, 3)),
         ("bed2", BED, rect(9.6, 3, 13.6, 9.5))],
        facade=[((0, 9.5), (0, 0)), ((4, 9.5), (0, 9.5)), ((4, 6.8), (4, 9.5)), ((9.6, 6.8), (4, 6.8)), ((9.6, 9.5), (9.6, 6.8)),
                ((13.6, 9.5), (9.6, 9.5)), ((13.6, 0), (13.6, 9.5))],
        circulation=[((4, 0), (9.6, 0))],
        access=[("foyer", "bath"), ("foyer", "living"), ("foyer", "kitchen"), ("bed1", "store"),
                ("living", "bed1"), ("living", "bed2")],
        entrance="foyer"))

    # circulation on the left: a different frame heading
    plans.append(build(
        "g13_2bed_side_entry", rect(0, 0, 10, 11.4),
        [("foyer", FOYER, rect(0, 0, 1.8, 11.4)), ("bed2", BED, rect(1.8, 0, 10, 3.4)),
         ("bath", BATH, rect(1.8, 3.4, 4.8, 5.8)), ("kitchen", KIT, rect(4.8, 3.4, 10, 5.8)),
         ("living", LIV, rect(1.8, 5.8, 6.6, 11.4)), ("bed1", BED, rect(6.6, 5.8, 10, 11.4))],
        facade=[((10, 11.4), (0, 11.4)), ((10, 0), (10, 11.4))], circulation=[((0, 11.4), (0, 0))],
        access=[("foyer", "bed2"), ("foyer", "bath"), ("foyer", "living"), ("living", "kitchen"),
                ("living", "bed1")],
        entrance="foyer"))

    plans.append(build(
        "g14_2bed_L", [(0, 0), (13, 0), (13, 6.6), (6.6, 6.6), (6.6, 11), (0, 11)],
        [("bath", BATH, rect(0, 0, 3, 2.6)), ("foyer", FOYER, rect(3, 0, 6.6, 2.6)),
         ("living", LIV, rect(0, 2.6, 6.6, 6.6)), ("bed1", BED, rect(0, 6.6, 6.6, 11)),
         ("hall", FOYER, rect(6.6, 0, 9.2, 2.6)), ("kitchen", KIT, rect(6.6, 2.6, 9.2, 6.6)),
         ("bed2", BED, rect(9.2, 0, 13, 6.6))],
        facade=[((0, 11), (0, 0)), ((6.6, 11), (0, 11)), ((6.6, 6.6), (6.6, 11)), ((13, 6.6), (6.6, 6.6)),
                ((13, 0), (13, 6.6))],
        circulation=[((3, 0), (6.6, 0))],
        access=[("foyer", "bath"), ("foyer", "living"), ("foyer", "hall"), ("living", "bed1"),
                ("living", "kitchen"), ("hall", "bed2")],
        entrance="foyer"))

    # three-bed with a second bath off the hall
    plans.append(build(
        "g15_3bed", rect(0, 0, 13, 10),
        [("bed2", BED, rect(0, 0, 3.6, 4.6)), ("bed1", BED, rect(0, 4.6, 3.6, 10)),
         ("hall", FOYER, rect(3.6, 0, 5.4, 10)), ("bath", BATH, rect(5.4, 0, 8.4, 2.4)),
         ("bath2", BATH, rect(5.4, 2.4, 8.4, 4.4)), ("bed3", BED, rect(8.4, 0, 13, 4.4)),
         ("living", LIV, rect(5.4, 4.4, 9.8, 10)), ("kitchen", KIT, rect(9.8, 4.4, 13, 10))],
        facade=[((0, 10), (0, 0)), ((13, 10), (0, 10)), ((13, 0), (13, 10))],
        circulation=[((3.6, 0), (5.4, 0))],
        access=[("hall", "bed1"), ("hall", "bed2"), ("hall", "bath"), ("hall", "bath2"), ("hall", "living"),
                ("living", "kitchen"), ("living", "bed3")],
        entrance="hall"))

    # notched three-bed, ten rooms
    plans.append(build(
        "g16_3bed_notched", [(3, 0), (15, 0), (15, 10), (0, 10), (0, 2), (3, 2)],
        [("store", EXTRA, rect(0, 2, 3, 3.4)), ("bath1", BATH, rect(3, 0, 5.6, 3.4)),
         ("entry", FOYER, rect(5.6, 0, 7.6, 3.4)), ("bath2", BATH, rect(7.6, 0, 9.6, 3.4)),
         ("kitchen", KIT, rect(9.6, 0, 15, 3.4)), ("hall", FOYER, rect(0, 3.4, 15, 4.6)),
         ("bed1", BED, rect(0, 4.6, 3.6, 10)), ("bed2", BED, rect(3.6, 4.6, 6.8, 10)),
         ("bed3", BED, rect(6.8, 4.6, 10, 10)), ("living", LIV, rect(10, 4.6, 15, 10))],
        facade=[((15, 10), (0, 10)), ((15, 0), (15, 10)), ((0, 10), (0, 2))],
        circulation=[((5.6, 0), (7.6, 0))],
        access=[("entry", "hall"), ("hall", "store"), ("hall", "bath1"), ("hall", "bath2"),
                ("hall", "kitchen"), ("hall", "bed1"), ("hall", "bed2"), ("hall", "bed3"), ("hall", "living")],
        entrance="entry"))
    return plans


def counterexamples():
    """Plans that are valid but have no binary subdivision tree."""
    pinwheel = build(
        "x01_pinwheel", rect(0, 0, 9, 9),
        [("a", BED, rect(0, 0, 6, 3)), ("b", KIT, rect(6, 0, 9, 6)), ("c", LIV, rect(3, 6, 9, 9)),
         ("d", BED, rect(0, 3, 3, 9)), ("e", FOYER, rect(3, 3, 6, 6))],
        facade=[((0, 9), (0, 0)), ((9, 9), (0, 9)), ((9, 0), (9, 9))], circulation=[((0, 0), (9, 0))],
        access=[("e", "a"), ("e", "b"), ("e", "c"), ("e", "d")], entrance="a")
    return [pinwheel]


def failure_plans():
    """One plan per failure detector; each should raise exactly its flag."""
    facade_blocked = build(
        "f01_facade_blocked_bedroom", rect(0, 0, 10, 8),
        [("foyer", FOYER, rect(0, 0, 2, 4)), ("bed", BED, rect(2, 0, 6, 4)), ("bath", BATH, rect(6, 0, 10, 4)),
         ("living", LIV, rect(0, 4, 6, 8)), ("kitchen", KIT, rect(6, 4, 10, 8))],
        facade=[((10, 8), (0, 8)), ((10, 0), (10, 8))], circulation=[((0, 0), (2, 0))],
        access=[("foyer", "living"), ("foyer", "bed"), ("bed", "bath"), ("living", "kitchen")],
        entrance="foyer")
    thin_foyer = build(
        "f02_thin_foyer", rect(0, 0, 9, 8),
        [("foyer", FOYER, rect(0, 0, 9, 0.8)), ("bath", BATH, rect(0, 0.8, 4, 3.5)),
         ("bed", BED, rect(0, 3.5, 4, 8)), ("kitchen", KIT, rect(4, 0.8, 9, 3.5)),
         ("living", LIV, rect(4, 3.5, 9, 8))],
        facade=[((9, 8), (0, 8)), ((9, 0), (9, 8))], circulation=[((0, 0), (9, 0))],
        access=[("foyer", "bath"), ("foyer", "kitchen"), ("kitchen", "living"), ("living", "bed")],
        entrance="foyer")
    sliver = build(
        "f03_sliver_bedroom", rect(0, 0, 10, 12),
        [("bed", BED, rect(0, 0, 2, 12)), ("foyer", FOYER, rect(2, 0, 5, 3)), ("bath", BATH, rect(5, 0, 10, 3)),
         ("living", LIV, rect(2, 3, 10, 7.5)), ("kitchen", KIT, rect(2, 7.5, 10, 12))],
        facade=[((0, 12), (0, 0)), ((10, 12), (0, 12)), ((10, 0), (10, 12))], circulation=[((2, 0), (5, 0))],
        access=[("foyer", "bath"), ("foyer", "living"), ("living", "kitchen"), ("living", "bed")],
        entrance="foyer")
    return [facade_blocked, thin_foyer, sliver]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7, help="seed for the synthetic performance records")
    ap.add_argument("--out", type=Path, default=ROOT)
    args = ap.parse_args()
    out: Path = args.out
    if out.exists():
        shutil.rmtree(out)
    for sub in ("plans", "hypergraphs", "counterexamples", "failures", "svg"):
        (out / sub).mkdir(parents=True)

    plans = golden_plans()
    plan_files, hg_files = [], []
    rng = np.random.default_rng(args.seed)
    records = []
    for plan in plans:
        flags = check_plan(plan)
        if flags:
            raise SystemExit(f"{plan.plan_id} raises {sorted(map(str, flags))}")
        hg = encode_plan(plan, f"hg_{plan.plan_id}")
        fio.write_json(out / "plans" / f"{plan.plan_id}.json", fio.plan_to_record(plan))
        fio.write_json(out / "hypergraphs" / f"{hg.hypergraph_id}.json", fio.hypergraph_to_record(hg))
        plan_files.append(f"plans/{plan.plan_id}.json")
        hg_files.append(f"hypergraphs/{hg.hypergraph_id}.json")
        records.append(synthetic_record(plan, BUILTIN_PROFILES["zurich"], rng))
    for plan in counterexamples():
        fio.write_json(out / "counterexamples" / f"{plan.plan_id}.json", fio.plan_to_record(plan))
    for plan in failure_plans():
        fio.write_json(out / "failures" / f"{plan.plan_id}.json", fio.plan_to_record(plan))

    fio.write_json(out / "catalog.json", FurnitureCatalog.default().to_dict())
    fio.write_json(out / "profiles.json", profiles_document(BUILTIN_PROFILES.values()))
    (out / "performance.csv").write_text(fio.performance_to_csv(records), encoding="utf-8")
    fio.write_json(out / "manifest.json", fio.manifest(
        plan_files, hg_files, catalog="catalog.json", profiles="profiles.json", performance="performance.csv",
        provenance=f"{SOURCE}; performance records are synthetic (seed {args.seed})"))

    first = plans[3]
    (out / "svg" / f"{first.plan_id}.svg").write_text(render_plan(first), encoding="utf-8")
    hg = fio.read_hypergraph(out / "hypergraphs" / f"hg_{first.plan_id}.json")
    (out / "svg" / f"hg_{first.plan_id}.svg").write_text(render_hypergraph(hg), encoding="utf-8")
    print(f"wrote {len(plans)} plans to {out}")


if __name__ == "__main__":
    main()
