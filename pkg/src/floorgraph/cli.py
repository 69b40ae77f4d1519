"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 domain failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io as fio
from .analysis import FEATURE_NAMES, FEATURE_SET_VERSION, features, pca_fit
from .carbon import carbon_report, daylight_score, load_profiles
from .config import Config
from .errors import (
    FloorgraphError,
    InconsistentPair,
    InvalidHypergraph,
    InvalidRecord,
    MissingRoomScore,
    NoSharedWall,
    NotBspRepresentable,
    PlanError,
    SchemaError,
)
from .floorplan import FloorPlan, realize_doors
from .furnishing import FurnitureCatalog, furnish_plan
from .hypergraph import Hypergraph, apply, circulation_heading, encode_plan
from .pipeline import fit
from .render import render_hypergraph, render_plan
from .validity import check_plan, leaf_reference, validate_plan

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2
INPUT_ERRORS = (SchemaError, PlanError, InvalidRecord, InvalidHypergraph, MissingRoomScore, InconsistentPair)


class InputError(Exception):
    pass


class DomainFailure(Exception):
    pass


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return repr(round(float(x), 10))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows: Sequence[Sequence[object]], comments: Sequence[str] = ()) -> str:
    buf = _io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _catalog(args) -> FurnitureCatalog:
    return FurnitureCatalog.load(args.catalog) if args.catalog else FurnitureCatalog.default()


def _profile(args):
    profiles = load_profiles(args.profiles)
    if args.profile not in profiles:
        raise InputError(f"unknown profile {args.profile!r}; available: {', '.join(sorted(profiles))}")
    return profiles[args.profile]


# -- subcommands ---------------------------------------------------------------------

def cmd_encode(args, config: Config) -> int:
    plan = fio.read_plan(args.plan)
    try:
        hg = encode_plan(plan, args.id)
    except NotBspRepresentable as exc:
        raise DomainFailure(f"NotBspRepresentable: {exc}") from None
    _emit(fio.dumps(fio.hypergraph_to_record(hg)), args.output)
    return EXIT_OK


def cmd_apply(args, config: Config) -> int:
    hg = fio.read_hypergraph(args.hypergraph)
    target = fio.read_boundary(args.boundary)
    mode = args.mode or config.mode
    skel = apply(hg, target.boundary, mode, circulation_heading(target.boundary, target.circulation_edges))
    skel = replace(skel, facade_edges=target.facade_edges, circulation_edges=target.circulation_edges,
                   plan_id=f"{target.boundary_id}/{hg.label}")
    plan = realize_doors(skel, config.door_width)
    _emit(fio.dumps(fio.plan_to_record(plan)), args.output)
    if args.svg_out:
        Path(args.svg_out).mkdir(parents=True, exist_ok=True)
        (Path(args.svg_out) / f"{_safe(plan.plan_id)}.svg").write_text(render_plan(plan), encoding="utf-8")
    return EXIT_OK


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


FIT_HEADER = ("rank", "candidate_id", "hypergraph", "mirrored", "stage", "accepted", "delta_r",
              "f_tot [m2]", "d_tot [fraction]", "flags", "reason")


def cmd_fit(args, config: Config) -> int:
    target = fio.read_boundary(args.boundary)
    library = fio.load_library(args.library)
    if not library:
        raise InputError(f"library {args.library} contains no hypergraphs")
    performance = fio.read_performance(args.performance) if args.performance else None
    profile = _profile(args) if performance else None
    if args.mode:
        config = replace(config, mode=args.mode)
    results = fit(target, library, config, _catalog(args), performance, profile, jobs=args.jobs)
    rows: list[Sequence[object]] = [FIT_HEADER]
    shown = [r for r in results if r.accepted or args.all]
    for i, r in enumerate(shown, start=1):
        flags = ";".join(sorted(map(str, r.report.flags))) if r.report else ""
        rows.append((i if r.accepted else "", r.candidate_id, r.hypergraph.hypergraph_id,
                     str(r.hypergraph.source.mirrored).lower(), r.stage, str(r.accepted).lower(),
                     _fmt(r.report.delta_r) if r.report and r.report.room_scores else "",
                     _fmt(r.furnishing.f_tot) if r.furnishing else "", _fmt(r.d_tot), flags, r.reason))
    _emit(_csv(rows), args.output)
    if args.svg_out:
        out = Path(args.svg_out)
        out.mkdir(parents=True, exist_ok=True)
        for r in results:
            if r.accepted:
                (out / f"{_safe(r.candidate_id)}.svg").write_text(
                    render_plan(r.plan, r.furnishing.placements), encoding="utf-8")
    if not any(r.accepted for r in results):
        raise DomainFailure(f"no accepted candidates among {len(results)}")
    return EXIT_OK


FURNISH_HEADER = ("room_id", "block", "x [m]", "y [m]", "rotation [rad]", "width [m]", "depth [m]")


def cmd_furnish(args, config: Config) -> int:
    plan = fio.read_plan(args.plan)
    res = furnish_plan(plan, _catalog(args), config.furnishing_step)
    rows: list[Sequence[object]] = [FURNISH_HEADER]
    for room_id in sorted(res.placements):
        for p in res.placements[room_id]:
            rows.append((room_id, p.block.name, _fmt(p.position[0]), _fmt(p.position[1]), _fmt(p.rotation),
                         _fmt(p.block.width), _fmt(p.block.depth)))
    comments = [f"plan: {plan.plan_id}", f"occupancy: {plan.occupancy}", f"f_tot [m2]: {_fmt(res.f_tot)}",
                f"raw_area [m2]: {_fmt(res.raw_area)}", f"min_area [m2]: {_fmt(res.min_area)}",
                f"feasible: {str(res.feasible).lower()}", f"failures: {';'.join(res.failures)}"]
    _emit(_csv(rows, comments), args.output)
    if args.svg_out:
        Path(args.svg_out).mkdir(parents=True, exist_ok=True)
        (Path(args.svg_out) / f"{_safe(plan.plan_id)}.svg").write_text(
            render_plan(plan, res.placements), encoding="utf-8")
    return EXIT_OK


SCORE_HEADER = ("apartment_id", "area [m2]", "f_tot [m2]", "m", "a_e [m2]", "eui_s [kWh/m2/yr]",
                "eui_hp [kWh/m2/yr]", "g_cc [kgCO2e/kWh]", "c_e [kgCO2e/yr]", "delta_e [kgCO2e/yr]",
                "d_tot [fraction]", "furnished", "delta_r", "flags")


def cmd_score(args, config: Config) -> int:
    plan = fio.read_plan(args.plan)
    records = fio.read_performance(args.performance)
    if plan.plan_id not in records:
        raise InputError(f"performance file has no record for apartment {plan.plan_id!r}")
    rec = records[plan.plan_id]
    profile = _profile(args)
    furn = furnish_plan(plan, _catalog(args), config.furnishing_step)
    d_tot = daylight_score(plan, rec)
    report = carbon_report(plan.plan_id, plan.area, furn.f_tot, rec, profile, d_tot, config.m, furn.feasible)
    if args.reference:
        validity = validate_plan(plan, leaf_reference(fio.read_hypergraph(args.reference)), config.thresholds)
        delta_r, flags = _fmt(validity.delta_r), validity.flags
    else:
        delta_r, flags = "", check_plan(plan, config.thresholds)
    rows = [SCORE_HEADER, (report.apartment_id, _fmt(report.area), _fmt(report.f_tot), _fmt(report.m),
                           _fmt(report.a_e), _fmt(report.eui_s), _fmt(report.eui_hp), _fmt(report.g_cc),
                           _fmt(report.c_e), _fmt(report.delta_e), _fmt(report.d_tot),
                           str(furn.feasible).lower(), delta_r, ";".join(sorted(map(str, flags))))]
    _emit(_csv(rows, [f"profile: {profile.name}"]), args.output)
    return EXIT_OK


def feature_rows(bundle: fio.CorpusBundle) -> tuple[list[str], np.ndarray]:
    pairs = bundle.pairs()
    ids = [hg.hypergraph_id for hg, _ in pairs]
    mat = np.array([features(hg, plan) for hg, plan in pairs], dtype=float).reshape(len(pairs), len(FEATURE_NAMES))
    return ids, mat


def cmd_features(args, config: Config) -> int:
    ids, mat = feature_rows(fio.load_bundle(args.corpus))
    rows: list[Sequence[object]] = [("id",) + FEATURE_NAMES]
    rows += [(i, *(_fmt(v) for v in row)) for i, row in zip(ids, mat)]
    _emit(_csv(rows, [f"feature-set: {FEATURE_SET_VERSION}"]), args.output)
    return EXIT_OK


def cmd_pca(args, config: Config) -> int:
    ids, mat = feature_rows(fio.load_bundle(args.corpus))
    model = pca_fit(mat)
    scores = model.project(mat)
    k = scores.shape[1]
    rows: list[Sequence[object]] = [("id",) + tuple(f"pc{j + 1}" for j in range(k))]
    rows += [(i, *(_fmt(v) for v in row)) for i, row in zip(ids, scores)]
    comments = [f"feature-set: {FEATURE_SET_VERSION}",
                "explained_ratio: " + " ".join(_fmt(v) for v in model.explained_ratio)]
    _emit(_csv(rows, comments), args.output)
    if args.components_out:
        crow: list[Sequence[object]] = [("component",) + FEATURE_NAMES]
        crow += [(f"pc{j + 1}", *(_fmt(v) for v in c)) for j, c in enumerate(model.components)]
        Path(args.components_out).write_text(_csv(crow, [f"feature-set: {FEATURE_SET_VERSION}"]), encoding="utf-8")
    return EXIT_OK


def cmd_render(args, config: Config) -> int:
    obj = fio.read_any(args.input)
    if isinstance(obj, FloorPlan):
        placements = furnish_plan(obj, _catalog(args), config.furnishing_step).placements if args.furnish else None
        svg = render_plan(obj, placements)
    elif isinstance(obj, Hypergraph):
        svg = render_hypergraph(obj)
    else:
        raise InputError("render takes a plan or hypergraph record")
    _emit(svg, args.output)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file overriding thresholds and defaults")
    common.add_argument("--seed", type=int, default=None,
                        help="reserved; the pipeline is deterministic and ignores it")
    common.add_argument("-o", "--output", help="output file (default: stdout)")

    p = argparse.ArgumentParser(prog="floorgraph", description="Apartment layout hypergraphs: encode, fit, score.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("encode", parents=[common], help="plan record -> hypergraph record")
    s.add_argument("plan")
    s.add_argument("--id", help="hypergraph id (default: plan id)")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("apply", parents=[common], help="subdivide a boundary with one hypergraph")
    s.add_argument("hypergraph")
    s.add_argument("boundary", help="boundary or plan record")
    s.add_argument("--mode", choices=["ratio", "area"])
    s.add_argument("--svg-out", help="directory for an SVG of the result")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("fit", parents=[common], help="fit a hypergraph library onto a boundary")
    s.add_argument("boundary", help="boundary or plan record")
    s.add_argument("library", help="corpus bundle or directory of hypergraph records")
    s.add_argument("--mode", choices=["ratio", "area"])
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.add_argument("--svg-out", help="directory for one SVG per accepted candidate")
    s.add_argument("--performance", help="performance CSV keyed by candidate id")
    s.add_argument("--profile", default="zurich")
    s.add_argument("--profiles", help="city profile file extending the built-ins")
    s.add_argument("--catalog", help="furniture catalog file")
    s.add_argument("--all", action="store_true", help="also list rejected candidates")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("furnish", parents=[common], help="furniture test-fit of a plan")
    s.add_argument("plan")
    s.add_argument("--catalog")
    s.add_argument("--svg-out")
    s.set_defaults(func=cmd_furnish)

    s = sub.add_parser("score", parents=[common], help="carbon and validity report for a plan")
    s.add_argument("plan")
    s.add_argument("performance")
    s.add_argument("--profile", default="zurich")
    s.add_argument("--profiles")
    s.add_argument("--catalog")
    s.add_argument("--reference", help="hypergraph whose leaves give the perimeter reference")
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("features", parents=[common], help="feature matrix of a corpus bundle")
    s.add_argument("corpus")
    s.set_defaults(func=cmd_features)

    s = sub.add_parser("pca", parents=[common], help="PCA projection of a corpus bundle")
    s.add_argument("corpus")
    s.add_argument("--components-out")
    s.set_defaults(func=cmd_pca)

    s = sub.add_parser("render", parents=[common], help="SVG of a plan or hypergraph")
    s.add_argument("input")
    s.add_argument("--furnish", action="store_true", help="draw furniture placements")
    s.add_argument("--catalog")
    s.set_defaults(func=cmd_render)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = Config.load(args.config)
        return args.func(args, config)
    except NoSharedWall as exc:
        print(f"error: AccessUnrealizable: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, OSError, *INPUT_ERRORS) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FloorgraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
