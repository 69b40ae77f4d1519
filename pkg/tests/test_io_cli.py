from __future__ import annotations

import csv
import io
import json
import shutil

import numpy as np
import pytest

from floorgraph import io as fio
from floorgraph.analysis import FEATURE_NAMES
from floorgraph.carbon import PerformanceRecord
from floorgraph.cli import main
from floorgraph.config import Config
from floorgraph.errors import SchemaError, VersionMismatch
from floorgraph.hypergraph import RetentionMode

from .conftest import GOLDEN
from .oracles import pca_oracle

PLANS = GOLDEN / "plans"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.reader(line for line in io.StringIO(text) if not line.startswith("#")))


# -- records -------------------------------------------------------------------------

def test_hypergraph_records_round_trip(golden):
    for hg in golden.hypergraphs.values():
        doc = fio.hypergraph_to_record(hg)
        assert fio.hypergraph_from_record(json.loads(fio.dumps(doc))) == hg


def test_golden_files_are_canonical():
    for path in sorted(GOLDEN.glob("*/*.json")):
        doc = fio.read_json(path)
        obj = fio.read_any(path)
        back = {"floorgraph.plan": fio.plan_to_record, "floorgraph.hypergraph": fio.hypergraph_to_record}
        if doc["format"] in back:
            assert fio.dumps(back[doc["format"]](obj)) == path.read_text(encoding="utf-8"), path.name


def test_boundary_round_trip(golden):
    b = fio.boundary_of(golden.plans["g08_1bed_L"])
    assert fio.boundary_from_record(json.loads(fio.dumps(fio.boundary_to_record(b)))) == b


def test_boundary_needs_circulation():
    doc = fio.boundary_to_record(fio.boundary_of(fio.read_plan(PLANS / "g04_1bed.json")))
    doc["circulation"] = []
    with pytest.raises(SchemaError):
        fio.boundary_from_record(doc)


def test_version_and_format_checks():
    doc = fio.read_json(PLANS / "g04_1bed.json")
    doc["version"] = 99
    with pytest.raises(VersionMismatch):
        fio.plan_from_record(doc)
    doc["version"], doc["format"] = 1, "floorgraph.other"
    with pytest.raises(SchemaError):
        fio.plan_from_record(doc)


def test_bad_json_reports_location(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"format": "floorgraph.plan",\n "version": }')
    with pytest.raises(SchemaError) as exc:
        fio.read_json(p)
    assert ":2:" in str(exc.value)


def test_performance_csv_round_trip():
    recs = [PerformanceRecord("b", 120.5, 90.25, {"liv": 0.7, "bed": 0.55}, "test"),
            PerformanceRecord("a", 100.0, 100.0, {}, "")]
    text = fio.performance_to_csv(recs)
    got = fio.performance_from_csv(text)
    assert got == {r.apartment_id: r for r in recs}
    assert fio.performance_to_csv(got.values()) == text


@pytest.mark.parametrize("mutate", [
    lambda t: t.replace("eui_s [kWh/m2/yr]", "eui_s"),  # unit header missing
    lambda t: t + "c,1,2,,x\n",  # EUI_hp above EUI_s
    lambda t: t + "b,1,1,,x\n",  # duplicate id
    lambda t: t + "d,1\n",  # short row
])
def test_performance_csv_errors(mutate):
    text = fio.performance_to_csv([PerformanceRecord("b", 120.5, 90.25, {}, "")])
    with pytest.raises(SchemaError):
        fio.performance_from_csv(mutate(text))


def test_bundle_rejects_unresolved_source(tmp_path):
    shutil.copytree(GOLDEN, tmp_path / "c")
    man = fio.read_json(tmp_path / "c" / "manifest.json")
    man["plans"] = [p for p in man["plans"] if "g04" not in p]
    fio.write_json(tmp_path / "c" / "manifest.json", man)
    with pytest.raises(SchemaError):
        fio.load_bundle(tmp_path / "c")


def test_config_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"delta_max": 0.2, "mode": "area", "m": 1.5}))
    cfg = Config.load(p)
    assert cfg.thresholds.delta_max == 0.2 and cfg.mode is RetentionMode.AREA and cfg.m == 1.5
    p.write_text(json.dumps({"delta_maxx": 0.2}))
    with pytest.raises(SchemaError):
        Config.load(p)
    assert Config.load(None) == Config()


# -- commands ------------------------------------------------------------------------

def test_encode_two_room_plan(capsys):
    code, out, _ = run(capsys, "encode", PLANS / "g01_studio_two_room.json")
    assert code == 0
    hg = fio.hypergraph_from_record(json.loads(out))
    assert len(hg.room_ids) == 2
    assert hg.source.plan_id == "g01_studio_two_room"


def test_encode_pinwheel_is_domain_failure(capsys):
    code, _, err = run(capsys, "encode", GOLDEN / "counterexamples" / "x01_pinwheel.json")
    assert code == 2
    assert "NotBspRepresentable" in err and "level 0" in err


def test_encode_missing_program_is_input_error(capsys, tmp_path):
    doc = fio.read_json(PLANS / "g01_studio_two_room.json")
    del doc["rooms"][0]["program"]
    p = tmp_path / "bad.json"
    fio.write_json(p, doc)
    code, _, err = run(capsys, "encode", p)
    assert code == 1
    assert "program" in err and "rooms[0]" in err


def test_missing_file_is_input_error(capsys, tmp_path):
    assert run(capsys, "encode", tmp_path / "nope.json")[0] == 1


def test_apply_reproduces_source(capsys, golden):
    code, out, _ = run(capsys, "apply", GOLDEN / "hypergraphs" / "hg_g04_1bed.json", PLANS / "g04_1bed.json")
    assert code == 0
    plan = fio.plan_from_record(json.loads(out))
    src = golden.plans["g04_1bed"]
    for r in src.rooms:
        assert plan.room(r.room_id).polygon.almost_equals(r.polygon)


def test_fit_accepts_own_hypergraph(capsys):
    code, out, _ = run(capsys, "fit", PLANS / "g04_1bed.json", GOLDEN)
    assert code == 0
    rows = table(out)
    assert rows[0][:3] == ["rank", "candidate_id", "hypergraph"]
    own = [r for r in rows[1:] if r[2] == "hg_g04_1bed" and r[3] == "false"]
    assert own and float(own[0][6]) <= 1e-9
    assert rows[1][0] == "1"


def test_fit_half_area_accepts_nothing(capsys, tmp_path):
    doc = fio.read_json(PLANS / "g04_1bed.json")
    s = 0.5 ** 0.5
    b = {"format": "floorgraph.boundary", "version": 1, "id": "half",
         "boundary": [[x * s, y * s] for x, y in doc["boundary"]],
         "facade": [[[x * s, y * s] for x, y in seg] for seg in doc["facade"]],
         "circulation": [[[x * s, y * s] for x, y in seg] for seg in doc["circulation"]]}
    p = tmp_path / "half.json"
    fio.write_json(p, b)
    code, out, _ = run(capsys, "fit", p, GOLDEN, "--all")
    assert code == 2
    rows = table(out)[1:]
    assert rows and all(r[5] == "false" for r in rows)
    assert all(r[4] == "filter" for r in rows)


def test_fit_with_performance_reports_daylight(capsys, tmp_path, golden):
    # performance records keyed by candidate id
    recs = [PerformanceRecord(f"g04_1bed/{label}", 120.0, 90.0,
                              {"bed": 0.6, "foyer": 0.2, "kitchen": 0.5, "living": 0.8})
            for label in ("hg_g04_1bed", "hg_g04_1bed~m")]
    perf = tmp_path / "perf.csv"
    perf.write_text(fio.performance_to_csv(recs))
    code, out, _ = run(capsys, "fit", PLANS / "g04_1bed.json", GOLDEN / "hypergraphs", "--performance", perf)
    assert code == 0
    rows = [r for r in table(out)[1:] if r[1] in {rec.apartment_id for rec in recs}]
    assert rows and all(r[8] for r in rows)


def test_fit_svg_out(capsys, tmp_path):
    code, out, _ = run(capsys, "fit", PLANS / "g04_1bed.json", GOLDEN, "--svg-out", tmp_path / "svg")
    assert code == 0
    assert len(list((tmp_path / "svg").glob("*.svg"))) == len(table(out)) - 1


def test_fit_empty_library(capsys, tmp_path):
    (tmp_path / "lib").mkdir()
    assert run(capsys, "fit", PLANS / "g04_1bed.json", tmp_path / "lib")[0] == 1


def test_furnish_command(capsys):
    code, out, _ = run(capsys, "furnish", PLANS / "g04_1bed.json")
    assert code == 0
    assert "# feasible: true" in out
    assert table(out)[0][0] == "room_id"


def test_score_one_bed_target_area(capsys):
    code, out, _ = run(capsys, "score", PLANS / "g06_1bed_compact.json", GOLDEN / "performance.csv",
                       "--profile", "zurich")
    assert code == 0
    header, row = table(out)
    rec = dict(zip(header, row))
    assert float(rec["area [m2]"]) == pytest.approx(53.6)
    assert float(rec["a_e [m2]"]) == pytest.approx(0.0, abs=1e-9)
    assert rec["g_cc [kgCO2e/kWh]"] == "0.128"


def test_score_with_reference(capsys):
    code, out, _ = run(capsys, "score", PLANS / "g04_1bed.json", GOLDEN / "performance.csv",
                       "--reference", GOLDEN / "hypergraphs" / "hg_g04_1bed.json")
    assert code == 0
    rec = dict(zip(*table(out)))
    assert float(rec["delta_r"]) <= 1e-9
    assert rec["furnished"] == "true"


def test_score_missing_living_sda(capsys, tmp_path):
    recs = fio.read_performance(GOLDEN / "performance.csv")
    r = recs["g04_1bed"]
    sda = {k: v for k, v in r.sda.items() if k != "living"}
    p = tmp_path / "perf.csv"
    p.write_text(fio.performance_to_csv([PerformanceRecord(r.apartment_id, r.eui_s, r.eui_hp, sda)]))
    code, _, err = run(capsys, "score", PLANS / "g04_1bed.json", p)
    assert code == 1
    assert "MissingRoomScore" in err


def test_score_unknown_apartment(capsys):
    code, _, err = run(capsys, "score", GOLDEN / "counterexamples" / "x01_pinwheel.json", GOLDEN / "performance.csv")
    assert code == 1


def test_score_unknown_profile(capsys):
    code, _, err = run(capsys, "score", PLANS / "g04_1bed.json", GOLDEN / "performance.csv", "--profile", "atlantis")
    assert code == 1 and "atlantis" in err


def _one_plan_bundle(tmp_path):
    root = tmp_path / "one"
    (root / "plans").mkdir(parents=True)
    (root / "hypergraphs").mkdir()
    shutil.copy(PLANS / "g04_1bed.json", root / "plans")
    shutil.copy(GOLDEN / "hypergraphs" / "hg_g04_1bed.json", root / "hypergraphs")
    fio.write_json(root / "manifest.json", fio.manifest(["plans/g04_1bed.json"], ["hypergraphs/hg_g04_1bed.json"]))
    return root


def test_features_one_plan(capsys, tmp_path):
    code, out, _ = run(capsys, "features", _one_plan_bundle(tmp_path))
    assert code == 0
    assert out.startswith("# feature-set: features-v1")
    rows = table(out)
    assert rows[0] == ["id", *FEATURE_NAMES]
    assert len(rows) == 2 and len(rows[1]) == 11


def test_pca_one_plan_fails(capsys, tmp_path):
    code, _, err = run(capsys, "pca", _one_plan_bundle(tmp_path))
    assert code == 2 and "TooFewSamples" in err


def test_pca_golden_matches_oracle(capsys, golden):
    code, out, _ = run(capsys, "features", GOLDEN)
    mat = np.array([[float(v) for v in r[1:]] for r in table(out)[1:]])
    code, out, _ = run(capsys, "pca", GOLDEN)
    assert code == 0
    scores = np.array([[float(v) for v in r[1:]] for r in table(out)[1:]])
    w, v = pca_oracle(mat)
    mean, std = mat.mean(axis=0), mat.std(axis=0)
    z = np.where(std > 0, (mat - mean) / np.where(std > 0, std, 1), 0.0)
    want = z @ v.T
    for k in range(len(w)):
        if w[k] > 1e-6:
            col, ref = scores[:, k], want[:, k]
            assert min(np.abs(col - ref).max(), np.abs(col + ref).max()) <= 1e-8


def test_render_command(capsys, tmp_path):
    code, out, _ = run(capsys, "render", PLANS / "g04_1bed.json")
    assert code == 0
    assert out == (GOLDEN / "svg" / "g04_1bed.svg").read_text(encoding="utf-8")
    out_file = tmp_path / "f.svg"
    assert run(capsys, "render", PLANS / "g04_1bed.json", "--furnish", "-o", out_file)[0] == 0
    assert 'class="furniture"' in out_file.read_text()
