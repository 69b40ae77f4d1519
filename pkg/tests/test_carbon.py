from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floorgraph.carbon import (
    BUILTIN_PROFILES,
    CarbonReport,
    PerformanceRecord,
    carbon_report,
    cohort_summary,
    daylight_score,
    emission_delta,
    excess_area,
    excess_carbon,
    load_profiles,
    profiles_document,
)
from floorgraph.errors import EmptyCohort, InvalidRecord, MissingRoomScore, SchemaError
from floorgraph.floorplan import FloorPlan, Room, RoomProgram

from .conftest import rect
from .oracles import delta_e_brute


def plan_with(*rooms):
    rs = tuple(Room(rid, RoomProgram(prog), poly) for rid, prog, poly in rooms)
    return FloorPlan("p", rs[0].polygon, rs)


def test_daylight_examples():
    plan = plan_with(("a", "living", rect(0, 0, 2, 5)), ("b", "bedroom", rect(2, 0, 6, 5)))
    assert daylight_score(plan, PerformanceRecord("p", 1, 1, {"a": 0.6, "b": 0.9})) == pytest.approx(0.8)
    single = plan_with(("a", "kitchen", rect(0, 0, 3, 3)))
    assert daylight_score(single, PerformanceRecord("p", 1, 1, {"a": 0.42})) == pytest.approx(0.42)
    with_bath = plan_with(("a", "living", rect(0, 0, 3, 3)), ("w", "bath", rect(3, 0, 8, 10)))
    assert daylight_score(with_bath, PerformanceRecord("p", 1, 1, {"a": 0.7, "w": 0.0})) == pytest.approx(0.7)


def test_daylight_needs_every_daylit_room():
    plan = plan_with(("a", "living", rect(0, 0, 2, 5)), ("f", "foyer", rect(2, 0, 3, 5)))
    with pytest.raises(MissingRoomScore):
        daylight_score(plan, PerformanceRecord("p", 1, 1, {"a": 0.6}))


@settings(max_examples=100)
@given(st.lists(st.tuples(st.floats(0.5, 40), st.floats(0, 1)), min_size=1, max_size=6))
def test_daylight_is_bounded_mean(rooms):
    plan = plan_with(*[(f"r{i}", "living", rect(0, 0, a, 1)) for i, (a, _) in enumerate(rooms)])
    d = daylight_score(plan, PerformanceRecord("p", 1, 1, {f"r{i}": s for i, (_, s) in enumerate(rooms)}))
    lo = min(s for _, s in rooms)
    hi = max(s for _, s in rooms)
    assert lo - 1e-12 <= d <= hi + 1e-12


def test_excess_area_examples():
    assert excess_area(53.6, 33.5) == pytest.approx(0.0, abs=1e-12)
    assert excess_area(60, 33.5) == pytest.approx(6.4)
    assert excess_area(50, 33.5) == pytest.approx(-3.6)


def test_excess_carbon_examples():
    assert excess_carbon(6.4, 120, 0.128) == pytest.approx(98.304)
    assert excess_carbon(0.0, 120, 0.128) == 0.0
    assert excess_carbon(-3.6, 120, 0.128) == 0.0


def test_emission_delta_examples():
    assert emission_delta(60, 6.4, 120, 90, 0.128) == pytest.approx(-132.096)
    assert emission_delta(60, 0.0, 100, 100, 0.128) == 0.0
    # balance point: A_e * EUI_s = A * (EUI_s - EUI_hp)
    assert emission_delta(60, 15.0, 120, 90, 0.5) == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=200)
@given(st.floats(20, 200), st.floats(-50, 50), st.floats(0, 300), st.floats(0, 1), st.floats(0.01, 1))
def test_linear_in_grid_carbon(area, a_e, eui_s, frac, g):
    eui_hp = eui_s * frac
    assert excess_carbon(a_e, eui_s, 2 * g) == pytest.approx(2 * excess_carbon(a_e, eui_s, g))
    assert emission_delta(area, a_e, eui_s, eui_hp, 2 * g) == pytest.approx(
        2 * emission_delta(area, a_e, eui_s, eui_hp, g), abs=1e-9)
    positive = max(a_e, 0) * eui_s > area * (eui_s - eui_hp)
    d = emission_delta(area, a_e, eui_s, eui_hp, g)
    if abs(d) > 1e-9:
        assert (d > 0) == positive


def test_builtin_profiles():
    assert BUILTIN_PROFILES["new_york"].grid_carbon == 0.55
    assert BUILTIN_PROFILES["singapore"].grid_carbon == 0.4057
    assert BUILTIN_PROFILES["zurich"].grid_carbon == 0.128
    for p in BUILTIN_PROFILES.values():
        assert p.envelope_standard.u_value == 0.3
        assert p.envelope_high.u_value == 0.1
        assert p.envelope_standard.wwr == p.envelope_high.wwr == 0.6
        assert p.hvac.cop == 3.3


def test_profile_file_overrides(tmp_path):
    doc = profiles_document([BUILTIN_PROFILES["zurich"]])
    doc["profiles"][0]["grid_carbon"] = 0.2
    doc["profiles"].append({"name": "oslo", "grid_carbon": 0.02})
    path = tmp_path / "profiles.json"
    path.write_text(json.dumps(doc))
    got = load_profiles(path)
    assert got["zurich"].grid_carbon == 0.2
    assert got["oslo"].grid_carbon == 0.02
    assert got["new_york"] == BUILTIN_PROFILES["new_york"]
    doc["profiles"].append({"grid_carbon": 1})
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemaError):
        load_profiles(path)


def test_record_validation():
    with pytest.raises(InvalidRecord):
        PerformanceRecord("x", 80, 90)
    with pytest.raises(InvalidRecord):
        PerformanceRecord("x", 90, -1)
    with pytest.raises(InvalidRecord):
        PerformanceRecord("x", 90, 80, {"a": 1.2})


def _report(delta, valid=True):
    return CarbonReport("x", 50, 33.5, 0, 0, delta, 0.5, 1, 1, 0.1, valid=valid)


def test_cohort_examples():
    assert cohort_summary([_report(5), _report(-2), _report(1)]).share_positive == pytest.approx(2 / 3)
    assert cohort_summary([_report(0), _report(0)]).share_positive == 0.0
    with pytest.raises(EmptyCohort):
        cohort_summary([])


def test_cohort_reports_both_denominators():
    s = cohort_summary([_report(5), _report(-2, valid=False), _report(1, valid=False), _report(-1)])
    assert s.share_positive == 0.5
    assert s.share_positive_valid == 0.5
    assert s.n_valid == 2
    assert cohort_summary([_report(1, valid=False)]).share_positive_valid is None


def random_cohort(seed, n=100):
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        area = float(rng.uniform(30, 130))
        f_raw = float(rng.uniform(15, 80))
        f_min = float(rng.choice([21.4, 33.5, 45.4, 58.2]))
        eui_s = float(rng.uniform(40, 200))
        eui_hp = float(eui_s * rng.uniform(0.4, 1.0))
        rows.append((f"a{i}", area, f_raw, f_min, eui_s, eui_hp))
    return rows


@pytest.mark.parametrize("city", sorted(BUILTIN_PROFILES))
def test_cohort_share_matches_brute_force(city):
    profile = BUILTIN_PROFILES[city]
    rows = random_cohort(sum(map(ord, city)))
    reports = []
    expected = 0
    for aid, area, f_raw, f_min, eui_s, eui_hp in rows:
        f_tot = max(f_raw, f_min)
        reports.append(carbon_report(aid, area, f_tot, PerformanceRecord(aid, eui_s, eui_hp), profile, 0.5))
        if delta_e_brute(area, f_raw, f_min, 1.6, eui_s, eui_hp, profile.grid_carbon) > 0:
            expected += 1
    assert cohort_summary(reports).share_positive == expected / len(rows)
