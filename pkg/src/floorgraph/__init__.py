"""Apartment layouts as hypergraphs: a binary subdivision tree plus a room
access graph, with fitting, validity checks, furnishing and carbon scoring."""

from __future__ import annotations

from .analysis import FEATURE_NAMES, PcaModel, features, hypergraph_distance, pca_fit
from .carbon import (
    BUILTIN_PROFILES,
    CarbonReport,
    CityProfile,
    PerformanceRecord,
    cohort_summary,
    daylight_score,
    emission_delta,
    excess_area,
    excess_carbon,
)
from .config import Config
from .floorplan import (
    ApartmentBoundary,
    Door,
    FloorPlan,
    Room,
    RoomProgram,
    ingest_traced,
    realize_doors,
)
from .furnishing import (
    FurnitureBlock,
    FurnitureCatalog,
    Placement,
    furnish_plan,
    furnish_room,
)
from .geometry import CutLine, Polygon, split_at_ratio, split_by_line
from .hypergraph import Hypergraph, RetentionMode, apply, encode_plan, mirror
from .pipeline import FitResult, fit
from .validity import ValidityReport, check_plan, fit_filter, perimeter_diff

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_PROFILES",
    "FEATURE_NAMES",
    "ApartmentBoundary",
    "CarbonReport",
    "CityProfile",
    "Config",
    "CutLine",
    "Door",
    "FitResult",
    "FloorPlan",
    "FurnitureBlock",
    "FurnitureCatalog",
    "Hypergraph",
    "PcaModel",
    "PerformanceRecord",
    "Placement",
    "Polygon",
    "RetentionMode",
    "Room",
    "RoomProgram",
    "ValidityReport",
    "apply",
    "check_plan",
    "cohort_summary",
    "daylight_score",
    "emission_delta",
    "encode_plan",
    "excess_area",
    "excess_carbon",
    "features",
    "fit",
    "fit_filter",
    "furnish_plan",
    "furnish_room",
    "hypergraph_distance",
    "ingest_traced",
    "mirror",
    "pca_fit",
    "perimeter_diff",
    "realize_doors",
    "split_at_ratio",
    "split_by_line",
]
