from __future__ import annotations

import math
from pathlib import Path

import pytest

from floorgraph import io as fio
from floorgraph.floorplan import PlanSkeleton, Room, RoomProgram, realize_doors
from floorgraph.geometry import Polygon
from floorgraph.hypergraph import Hypergraph, SourceRef, SubdivNode

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "corpus" / "golden"


def rect(x0, y0, x1, y1):
    return Polygon.rectangle(x0, y0, x1, y1)


def make_plan(outline, rooms, access, entrance, facade=(), circulation=(), plan_id="t"):
    """Plan from (id, program, Polygon) triples, with doors placed by the door rule."""
    boundary = outline if isinstance(outline, Polygon) else Polygon.from_coords(outline)
    rs = tuple(Room(rid, RoomProgram.parse(p) if isinstance(p, str) else p, poly) for rid, p, poly in rooms)
    seg = lambda s: (tuple(map(float, s[0])), tuple(map(float, s[1])))
    skel = PlanSkeleton(boundary, rs, tuple(access), entrance,
                        tuple(seg(s) for s in facade), tuple(seg(s) for s in circulation), plan_id)
    return realize_doors(skel)


def chain_hypergraph(cuts):
    """Each cut peels one room off the remainder, alternating between horizontal and vertical."""
    n = len(cuts) + 1
    rem = [1.0]
    for r in cuts:
        rem.append(rem[-1] * (1 - r))
    node = SubdivNode(f"l{n - 1}", rem[-1], 1 - cuts[-1], program=RoomProgram.BEDROOM, room_id=f"r{n - 1}")
    for i in reversed(range(len(cuts))):
        r = cuts[i]
        leaf = SubdivNode(f"l{i}", rem[i] * r, r, program=RoomProgram.LIVING, room_id=f"r{i}")
        node = SubdivNode(f"i{i}", rem[i], 1 - cuts[i - 1] if i else 1.0, angle=(math.pi / 2) * (i % 2),
                          children=(leaf, node))
    ids = [f"r{i}" for i in range(n)]
    return Hypergraph("chain", node, tuple(zip(ids, ids[1:])), "r0", (), SourceRef("s"), 0.0, 0.5)


@pytest.fixture(scope="session")
def golden():
    return fio.load_bundle(GOLDEN)


@pytest.fixture(scope="session")
def two_room_plan():
    return make_plan(rect(0, 0, 1, 1), [("a", "living", rect(0, 0, 1, 0.5)), ("b", "bedroom", rect(0, 0.5, 1, 1))],
                     access=[("a", "b")], entrance="a", facade=[((1, 1), (0, 1))], circulation=[((0, 0), (1, 0))])


# -- acceptance summary ----------------------------------------------------------

def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


_ACCEPTANCE: dict[str, tuple[int, str, str, list]] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    outcome = "PASS" if call.excinfo is None else "FAIL"
    _ACCEPTANCE[item.nodeid] = (number, title, outcome, item.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, props in sorted(_ACCEPTANCE.values()):
        notes = "; ".join(f"{k}={v}" for k, v in props)
        terminalreporter.write_line(f"[{outcome}] {number:2d}. {title}" + (f" ({notes})" if notes else ""))
