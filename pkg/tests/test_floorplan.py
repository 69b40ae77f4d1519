from __future__ import annotations

import copy
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floorgraph import io as fio
from floorgraph.errors import (
    DanglingDoor,
    NoSharedWall,
    SchemaError,
    TilingGap,
    TilingOverlap,
    UnknownProgram,
)
from floorgraph.floorplan import (
    ENTRANCE,
    FloorPlan,
    Room,
    RoomProgram,
    facade_ratio,
    ingest_traced,
)
from floorgraph.geometry import EPS_POINT, Polygon

from .conftest import GOLDEN, make_plan, rect


def two_room_record():
    return {
        "id": "two",
        "boundary": [[0, 0], [1, 0], [1, 1], [0, 1]],
        "facade": [[[1, 1], [0, 1]]],
        "circulation": [[[0, 0], [1, 0]]],
        "rooms": [
            {"id": "a", "program": "living", "polygon": [[0, 0], [1, 0], [1, 0.5], [0, 0.5]]},
            {"id": "b", "program": "bedroom", "polygon": [[0, 0.5], [1, 0.5], [1, 1], [0, 1]]},
        ],
        "doors": [{"rooms": ["a", "b"], "segment": [[0.05, 0.5], [0.95, 0.5]], "width": 0.9}],
    }


def test_ingest_two_room_record():
    plan = ingest_traced(two_room_record())
    assert len(plan.rooms) == 2
    assert len(plan.doors) == 1
    assert plan.occupancy == 1
    assert plan.area == pytest.approx(1.0)


def test_ingest_normalizes_orientation():
    rec = two_room_record()
    rec["boundary"] = rec["boundary"][::-1]
    plan = ingest_traced(rec)
    assert plan.boundary.vertices[0] == (0.0, 0.0)
    assert plan.boundary.vertices[1] == (1.0, 0.0)


def test_ingest_rejects_gap():
    rec = two_room_record()
    rec["rooms"][1]["polygon"] = [[0, 0.5], [1, 0.5], [1, 0.99], [0, 0.99]]
    with pytest.raises(TilingGap):
        ingest_traced(rec)


def test_ingest_rejects_overlap():
    rec = two_room_record()
    rec["rooms"][1]["polygon"] = [[0, 0.4], [1, 0.4], [1, 1], [0, 1]]
    with pytest.raises(TilingOverlap):
        ingest_traced(rec)


def test_ingest_rejects_unknown_program():
    rec = two_room_record()
    rec["rooms"][0]["program"] = "ballroom"
    with pytest.raises(UnknownProgram):
        ingest_traced(rec)


def test_ingest_rejects_dangling_door():
    rec = two_room_record()
    rec["doors"][0]["rooms"] = ["a", "zz"]
    with pytest.raises(DanglingDoor):
        ingest_traced(rec)
    rec = two_room_record()
    rec["doors"][0]["segment"] = [[0.05, 0.2], [0.95, 0.2]]
    with pytest.raises(DanglingDoor):
        ingest_traced(rec)


def test_ingest_schema_errors_carry_location():
    rec = two_room_record()
    del rec["rooms"][1]["polygon"]
    with pytest.raises(SchemaError) as exc:
        ingest_traced(rec)
    assert "rooms[1]" in str(exc.value)


def test_golden_plan_round_trips_bit_identically(tmp_path):
    src = GOLDEN / "plans" / "g04_1bed.json"
    plan = fio.read_plan(src)
    out = tmp_path / "again.json"
    fio.write_json(out, fio.plan_to_record(plan))
    assert out.read_bytes() == src.read_bytes()
    assert fio.read_plan(out) == plan


def test_every_golden_plan_round_trips(golden):
    for plan in golden.plans.values():
        text = fio.dumps(fio.plan_to_record(plan))
        assert fio.dumps(fio.plan_to_record(fio.plan_from_record(json.loads(text)))) == text


def test_door_centred_on_three_metre_wall():
    plan = make_plan(rect(0, 0, 3, 4), [("a", "living", rect(0, 0, 3, 2)), ("b", "bedroom", rect(0, 2, 3, 4))],
                     access=[("a", "b")], entrance="a", circulation=[((0, 0), (3, 0))])
    (door,) = [d for d in plan.doors if not d.is_entrance]
    (ax, ay), (bx, by) = door.segment
    assert door.width == 0.9
    assert math.dist((ax, ay), (bx, by)) == pytest.approx(0.9)
    assert ((ax + bx) / 2, (ay + by) / 2) == pytest.approx((1.5, 2.0))


def test_short_wall_has_no_door():
    # the two rooms touch along 0.5 m only
    rooms = [("a", "living", rect(0, 0, 2, 1)), ("b", "bedroom", rect(1.5, 1, 2, 3)),
             ("c", "kitchen", rect(0, 1, 1.5, 3))]
    with pytest.raises(NoSharedWall) as exc:
        make_plan(rect(0, 0, 2, 3), rooms, access=[("a", "b"), ("a", "c")], entrance="a",
                  circulation=[((0, 0), (2, 0))])
    assert exc.value.edge == ("a", "b")


def test_entrance_without_frontage():
    rooms = [("a", "living", rect(0, 0, 2, 1)), ("b", "bedroom", rect(0, 1, 2, 2))]
    with pytest.raises(NoSharedWall) as exc:
        make_plan(rect(0, 0, 2, 2), rooms, access=[("a", "b")], entrance="b", circulation=[((0, 0), (2, 0))])
    assert ENTRANCE in exc.value.edge


def test_facade_ratio_examples():
    sq = Polygon.rectangle(0, 0, 1, 1)
    room = (Room("r", RoomProgram.LIVING, sq),)
    assert facade_ratio(FloorPlan("p", sq, room, (((0, 0), (1, 0)),))) == 0.25
    assert facade_ratio(FloorPlan("p", sq, room, tuple(sq.edges()))) == 1.0
    box = Polygon.rectangle(0, 0, 6, 4)
    plan = FloorPlan("p", box, (Room("r", RoomProgram.LIVING, box),), (((0, 0), (6, 0)), ((6, 4), (0, 4))))
    assert facade_ratio(plan) == pytest.approx(0.6)


def test_golden_plans_satisfy_invariants(golden):
    for plan in golden.plans.values():
        assert sum(r.polygon.area for r in plan.rooms) == pytest.approx(plan.area, rel=1e-6)
        for d in plan.doors:
            a, b = d.rooms
            for rid in (a, b):
                if rid == ENTRANCE:
                    continue
                shape = plan.room(rid).polygon.shape.boundary
                from shapely.geometry import Point
                assert all(shape.distance(Point(p)) <= EPS_POINT for p in d.segment)
        assert 0.0 <= facade_ratio(plan) <= 1.0


def _rotate_record(rec, theta):
    c, s = math.cos(theta), math.sin(theta)

    def rot(p):
        return [c * p[0] - s * p[1], s * p[0] + c * p[1]]

    out = copy.deepcopy(rec)
    out["boundary"] = [rot(p) for p in rec["boundary"]]
    out["facade"] = [[rot(p) for p in seg] for seg in rec["facade"]]
    out["circulation"] = [[rot(p) for p in seg] for seg in rec["circulation"]]
    for r_out, r in zip(out["rooms"], rec["rooms"]):
        r_out["polygon"] = [rot(p) for p in r["polygon"]]
    for d_out, d in zip(out["doors"], rec["doors"]):
        d_out["segment"] = [rot(p) for p in d["segment"]]
    return out


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * math.pi))
def test_facade_ratio_rotation_invariant(theta):
    rec = fio.read_json(GOLDEN / "plans" / "g08_1bed_L.json")
    base = facade_ratio(ingest_traced(rec))
    turned = facade_ratio(ingest_traced(_rotate_record(rec, theta)))
    assert turned == pytest.approx(base, rel=1e-9)
