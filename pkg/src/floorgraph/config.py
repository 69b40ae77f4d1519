"""Run configuration loaded from a JSON file; every key is optional."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from .carbon import M_DEFAULT
from .errors import SchemaError
from .floorplan import DOOR_WIDTH_MIN
from .furnishing import ANCHOR_STEP
from .hypergraph import RetentionMode
from .validity import DEFAULT_THRESHOLDS, Thresholds

RANK_KEYS = ("delta_r", "d_tot")


@dataclass(frozen=True)
class Config:
    thresholds: Thresholds = DEFAULT_THRESHOLDS
    door_width: float = DOOR_WIDTH_MIN
    furnishing_step: float = ANCHOR_STEP
    m: float = M_DEFAULT
    mode: RetentionMode = RetentionMode.RATIO
    rank_by: str = "delta_r"  # primary key; the other one breaks ties

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Config:
        data = dict(data)
        th_names = {f.name for f in fields(Thresholds)}
        th = {k: float(data.pop(k)) for k in list(data) if k in th_names}
        unknown = set(data) - {"door_width", "furnishing_step", "m", "mode", "rank_by"}
        if unknown:
            raise SchemaError(f"unknown config keys {sorted(unknown)}", "config")
        try:
            cfg = cls(
                thresholds=replace(DEFAULT_THRESHOLDS, **th),
                door_width=float(data.get("door_width", DOOR_WIDTH_MIN)),
                furnishing_step=float(data.get("furnishing_step", ANCHOR_STEP)),
                m=float(data.get("m", M_DEFAULT)),
                mode=RetentionMode.parse(data.get("mode", RetentionMode.RATIO)),
                rank_by=str(data.get("rank_by", "delta_r")),
            )
        except ValueError as exc:
            raise SchemaError(str(exc), "config") from None
        if cfg.rank_by not in RANK_KEYS:
            raise SchemaError(f"rank_by must be one of {RANK_KEYS}", "config.rank_by")
        if cfg.furnishing_step <= 0 or cfg.door_width <= 0 or cfg.m <= 0:
            raise SchemaError("door_width, furnishing_step and m must be positive", "config")
        return cfg

    @classmethod
    def load(cls, path: str | Path | None) -> Config:
        if path is None:
            return cls()
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(exc.msg, f"{path}:{exc.lineno}") from None
        if not isinstance(data, dict):
            raise SchemaError("config must be a JSON object", str(path))
        return cls.from_dict(data)
