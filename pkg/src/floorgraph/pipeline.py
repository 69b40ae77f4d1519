"""End-to-end fitting of a hypergraph library onto one apartment boundary."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .carbon import (
    CarbonReport,
    CityProfile,
    PerformanceRecord,
    carbon_report,
    daylight_score,
)
from .config import Config
from .errors import FloorgraphError, NoSharedWall
from .floorplan import ApartmentBoundary, FloorPlan, realize_doors
from .furnishing import FurnishResult, FurnitureCatalog, furnish_plan
from .hypergraph import Hypergraph, apply, circulation_heading, mirror
from .validity import (
    Flag,
    FlagKind,
    ValidityReport,
    fit_filter,
    leaf_reference,
    validate_plan,
)


@dataclass(frozen=True)
class FitResult:
    candidate_id: str
    hypergraph: Hypergraph
    stage: str  # last stage reached: filter, apply, doors, validity, furnish, accepted
    accepted: bool
    plan: FloorPlan | None = None
    report: ValidityReport | None = None
    furnishing: FurnishResult | None = None
    carbon: CarbonReport | None = None
    reason: str = ""

    @property
    def label(self) -> str:
        return self.hypergraph.label

    @property
    def delta_r(self) -> float:
        return self.report.delta_r if self.report else math.inf

    @property
    def d_tot(self) -> float | None:
        return self.carbon.d_tot if self.carbon else None

    def rank_key(self, rank_by: str = "delta_r") -> tuple:
        d = -self.d_tot if self.d_tot is not None else 0.0
        if rank_by == "d_tot":
            return (d, self.delta_r, self.label)
        return (self.delta_r, d, self.label)


def candidate_id(boundary_id: str, hg: Hypergraph) -> str:
    return f"{boundary_id}/{hg.label}"


def evaluate(hg: Hypergraph, target: ApartmentBoundary, config: Config, catalog: FurnitureCatalog,
             performance: Mapping[str, PerformanceRecord] | None = None,
             profile: CityProfile | None = None) -> FitResult:
    cid = candidate_id(target.boundary_id, hg)
    if not fit_filter(hg, target, config.thresholds):
        return FitResult(cid, hg, "filter", False, reason="footprint or facade ratio outside tolerance")
    try:
        heading = circulation_heading(target.boundary, target.circulation_edges)
        skeleton = apply(hg, target.boundary, config.mode, heading)
    except FloorgraphError as exc:
        return FitResult(cid, hg, "apply", False, reason=f"{type(exc).__name__}: {exc}")
    skeleton = replace(skeleton, facade_edges=target.facade_edges,
                       circulation_edges=target.circulation_edges, plan_id=cid)
    try:
        plan = realize_doors(skeleton, config.door_width)
    except NoSharedWall as exc:
        plan = FloorPlan(cid, skeleton.boundary, skeleton.rooms, skeleton.facade_edges, skeleton.circulation_edges)
        flag = Flag(FlagKind.ACCESS_UNREALIZABLE, exc.edge[0])
        return FitResult(cid, hg, "doors", False, plan,
                         ValidityReport(flags=frozenset({flag}), delta_max=config.thresholds.delta_max),
                         reason=str(exc))
    report = validate_plan(plan, leaf_reference(hg), config.thresholds)
    if not report.passed:
        why = ", ".join(sorted(map(str, report.flags))) or f"delta_r {report.delta_r:.4f} above limit"
        return FitResult(cid, hg, "validity", False, plan, report, reason=why)
    try:
        furn = furnish_plan(plan, catalog, config.furnishing_step)
    except FloorgraphError as exc:
        return FitResult(cid, hg, "furnish", False, plan, report, reason=f"{type(exc).__name__}: {exc}")
    carbon = None
    record = (performance or {}).get(cid)
    if record is not None and profile is not None:
        carbon = carbon_report(cid, plan.area, furn.f_tot, record, profile, daylight_score(plan, record),
                               config.m, furn.feasible)
    if not furn.feasible:
        return FitResult(cid, hg, "furnish", False, plan, report, furn, carbon,
                         reason="furnishing failed: " + (", ".join(furn.failures) or "below minimum area"))
    return FitResult(cid, hg, "accepted", True, plan, report, furn, carbon)


def _evaluate_args(args):
    return evaluate(*args)


def candidates(library: Sequence[Hypergraph]) -> list[Hypergraph]:
    """Every library hypergraph and its mirror, in canonical label order."""
    out = []
    for hg in library:
        out.append(hg)
        out.append(mirror(hg))
    return sorted(out, key=lambda h: h.label)


def fit(target: ApartmentBoundary, library: Sequence[Hypergraph], config: Config | None = None,
        catalog: FurnitureCatalog | None = None, performance: Mapping[str, PerformanceRecord] | None = None,
        profile: CityProfile | None = None, jobs: int = 1) -> list[FitResult]:
    """Evaluate all candidates; accepted ones first in rank order, then rejected by label."""
    if not library:
        raise ValueError("hypergraph library is empty")
    config = config or Config()
    catalog = catalog or FurnitureCatalog.default()
    cands = candidates(library)
    args = [(hg, target, config, catalog, performance, profile) for hg in cands]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_args, args, chunksize=max(1, len(args) // (4 * jobs))))
    else:
        results = [evaluate(*a) for a in args]
    accepted = sorted((r for r in results if r.accepted), key=lambda r: r.rank_key(config.rank_by))
    rejected = sorted((r for r in results if not r.accepted), key=lambda r: r.label)
    return accepted + rejected
