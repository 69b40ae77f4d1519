from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floorgraph.errors import Infeasible, SchemaError, UnknownOccupancy
from floorgraph.floorplan import Door, Room, RoomProgram
from floorgraph.furnishing import (
    FurnitureBlock,
    FurnitureCatalog,
    furnish_plan,
    furnish_room,
    total_furniture_area,
)

from .conftest import make_plan, rect
from .oracles import (
    BlockSpec,
    Box,
    brute_force_feasible,
    oriented_boxes,
    quarter_turns_of,
    rect_door_zone,
    valid_set,
)

CATALOG = FurnitureCatalog.default()
MINIMA = {0: 21.4, 1: 33.5, 2: 45.4, 3: 58.2, 4: 66.2, 5: 74.2}
TARGETS = {0: 34.0, 1: 53.6, 2: 72.6, 3: 93.1, 4: 105.9, 5: 118.7}

BED = FurnitureBlock("bed", RoomProgram.BEDROOM, 1.6, 2.0, left=0.6)
DRAWER = FurnitureBlock("drawer", RoomProgram.BEDROOM, 1.0, 0.6, front=0.6)


def spec_of(b: FurnitureBlock) -> BlockSpec:
    return BlockSpec(b.width, b.depth, b.front, b.back, b.left, b.right)


def oracle_items(placements):
    return [oriented_boxes(spec_of(p.block), p.position[0], p.position[1], quarter_turns_of(p.rotation))
            for p in placements]


def room_box(poly) -> Box:
    xs = [x for x, _ in poly.vertices]
    ys = [y for _, y in poly.vertices]
    return Box(min(xs), min(ys), max(xs), max(ys))


def door_boxes(box, doors):
    return [rect_door_zone(box, d.segment, d.width) for d in doors]


def test_bedroom_example_is_feasible_and_sound():
    room = Room("r", RoomProgram.BEDROOM, rect(0, 0, 4, 3))
    box = Box(0, 0, 4, 3)
    specs = [spec_of(BED), spec_of(DRAWER)]
    assert brute_force_feasible(box, [], specs) is True
    placed = furnish_room(room, [], [BED, DRAWER])
    assert sorted(p.block.name for p in placed) == ["bed", "drawer"]
    assert valid_set(box, [], oracle_items(placed))


def test_bedroom_example_with_door_is_sound():
    room = Room("r", RoomProgram.BEDROOM, rect(0, 0, 4, 3))
    door = Door(("r", "x"), ((1.55, 0.0), (2.45, 0.0)))
    box = Box(0, 0, 4, 3)
    placed = furnish_room(room, [door], [BED, DRAWER])
    assert valid_set(box, door_boxes(box, [door]), oracle_items(placed))


def test_tiny_room_is_infeasible():
    with pytest.raises(Infeasible) as exc:
        furnish_room(Room("r", RoomProgram.BEDROOM, rect(0, 0, 1, 1)), [], [BED])
    assert exc.value.block == "bed"


def test_empty_requirement():
    assert furnish_room(Room("r", RoomProgram.BEDROOM, rect(0, 0, 1, 1)), [], []) == ()


def test_golden_one_bed_is_feasible(golden):
    plan = golden.plans["g04_1bed"]
    res = furnish_plan(plan, golden.catalog)
    assert res.feasible
    assert res.f_tot >= 33.5
    for room_id, placed in res.placements.items():
        room = plan.room(room_id)
        box = room_box(room.polygon)
        assert room.polygon.area == pytest.approx((box.x1 - box.x0) * (box.y1 - box.y0))
        assert valid_set(box, door_boxes(box, plan.doors_of(room_id)), oracle_items(placed)), room_id


def test_golden_placements_are_sound(golden):
    for plan in golden.plans.values():
        res = furnish_plan(plan, golden.catalog)
        for room_id, placed in res.placements.items():
            room = plan.room(room_id)
            box = room_box(room.polygon)
            if room.polygon.area != pytest.approx((box.x1 - box.x0) * (box.y1 - box.y0)):
                continue  # the oracle handles rectangles only
            assert valid_set(box, door_boxes(box, plan.doors_of(room_id)), oracle_items(placed)), \
                (plan.plan_id, room_id)


def test_small_bedroom_clamps_to_minimum():
    rooms = [("bath", "bath", rect(0, 0, 3, 2.6)), ("foyer", "foyer", rect(3, 0, 5, 2.6)),
             ("kitchen", "kitchen", rect(5, 0, 10.4, 2.6)), ("bed", "bedroom", rect(0, 2.6, 2, 6.6)),
             ("living", "living", rect(2, 2.6, 10.4, 6.6))]
    plan = make_plan(rect(0, 0, 10.4, 6.6), rooms,
                     access=[("bath", "foyer"), ("bed", "living"), ("foyer", "living"), ("kitchen", "living")],
                     entrance="foyer", facade=[((10.4, 6.6), (0, 6.6))], circulation=[((3, 0), (5, 0))])
    res = furnish_plan(plan, CATALOG)
    assert not res.feasible
    assert res.f_tot == 33.5
    assert any(f.startswith("bed:") for f in res.failures)


def test_extra_room_arithmetic():
    assert total_furniture_area(30.0, 5.0, 33.5) == (35.0, True)
    assert total_furniture_area(30.0, 0.0, 33.5) == (33.5, False)
    assert total_furniture_area(40.0, 0.0, 33.5, all_placed=False) == (40.0, False)


def test_extra_rooms_count_and_foyers_do_not(golden):
    for plan in golden.plans.values():
        res = furnish_plan(plan, golden.catalog)
        placed = sum(p.block.area for ps in res.placements.values() for p in ps)
        extra = sum(r.polygon.area for r in plan.rooms if r.program is RoomProgram.EXTRA)
        assert res.raw_area == pytest.approx(placed + extra)


@settings(max_examples=200)
@given(st.floats(0, 200), st.floats(0, 50), st.floats(0, 50), st.sampled_from(sorted(MINIMA.values())),
       st.booleans())
def test_total_is_clamped_and_monotone_in_extra(placed, extra, more, min_area, ok):
    f, _ = total_furniture_area(placed, extra, min_area, ok)
    g, _ = total_furniture_area(placed, extra + more, min_area, ok)
    assert f >= min_area
    assert g >= f


def test_default_catalog_minima():
    for k, value in MINIMA.items():
        assert CATALOG.min_furniture_area(k) == value
        assert CATALOG.required_area(k) == pytest.approx(value, abs=1e-9)


def test_minima_match_target_areas():
    for k, target in TARGETS.items():
        assert abs(CATALOG.min_furniture_area(k) * 1.6 - target) <= 0.3


def test_bathroom_ranks():
    rooms = CATALOG.spec(3).rooms
    baths = sorted((r.rank, r.blocks) for r in rooms if r.program is RoomProgram.BATH)
    assert "bathtub" in baths[0][1]
    assert "bathtub" not in baths[1][1] and "toilet" in baths[1][1]


def test_unknown_occupancy():
    with pytest.raises(UnknownOccupancy):
        CATALOG.spec(CATALOG.max_occupancy + 1)


def test_catalog_round_trip_and_errors():
    assert FurnitureCatalog.from_dict(CATALOG.to_dict()) == CATALOG
    doc = CATALOG.to_dict()
    doc["occupancies"]["1"]["rooms"][0]["blocks"].append("grand_piano")
    with pytest.raises(SchemaError):
        FurnitureCatalog.from_dict(doc)
    doc = CATALOG.to_dict()
    doc["blocks"]["sofa"]["circulation"] = {"up": 1.0}
    with pytest.raises(SchemaError):
        FurnitureCatalog.from_dict(doc)


def test_block_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        FurnitureBlock("x", RoomProgram.LIVING, 0.0, 1.0)
    with pytest.raises(ValueError):
        FurnitureBlock("x", RoomProgram.LIVING, 1.0, 1.0, front=-0.1)


blocks = st.builds(
    lambda w, d, side, m: FurnitureBlock(f"b{w:.1f}x{d:.1f}", RoomProgram.LIVING, w, d, **{side: m}),
    st.integers(5, 20).map(lambda v: v / 10), st.integers(4, 15).map(lambda v: v / 10),
    st.sampled_from(["front", "left", "right", "back"]), st.integers(0, 8).map(lambda v: v / 10))


@settings(max_examples=40, deadline=None)
@given(st.integers(20, 50).map(lambda v: v / 10), st.integers(20, 50).map(lambda v: v / 10),
       st.lists(blocks, min_size=1, max_size=3, unique_by=lambda b: b.name))
def test_returned_placements_satisfy_zone_rules(w, h, required):
    room = Room("r", RoomProgram.LIVING, rect(0, 0, w, h))
    door = Door(("r", "x"), ((w / 2 - 0.45, 0.0), (w / 2 + 0.45, 0.0)))
    try:
        placed = furnish_room(room, [door], required)
    except Infeasible:
        return
    box = Box(0, 0, w, h)
    assert len(placed) == len(required)
    assert valid_set(box, door_boxes(box, [door]), oracle_items(placed))
    assert all(math.isclose(p.rotation % (math.pi / 2), 0, abs_tol=1e-9) or
               math.isclose(p.rotation % (math.pi / 2), math.pi / 2, abs_tol=1e-9) for p in placed)
