"""Synthetic performance data for exercising the pipeline.

The numbers are NOT physical: EUI is a linear function of envelope U-value
and façade ratio, and sDA grows with a room's façade exposure.  Real values
come from external energy and daylight simulation.
"""

from __future__ import annotations

import numpy as np

from .carbon import DAYLIT, CityProfile, PerformanceRecord
from .floorplan import FloorPlan, facade_ratio, longest_overlap
from .geometry import segment_length


def synthetic_eui(facade_ratio_: float, u_value: float, base: float = 70.0) -> float:
    return base + 180.0 * u_value + 60.0 * facade_ratio_


def synthetic_record(plan: FloorPlan, profile: CityProfile, rng: np.random.Generator,
                     apartment_id: str | None = None) -> PerformanceRecord:
    fr = facade_ratio(plan)
    eui_s = synthetic_eui(fr, profile.envelope_standard.u_value) + float(rng.uniform(-5, 5))
    eui_hp = min(eui_s, synthetic_eui(fr, profile.envelope_high.u_value) + float(rng.uniform(-5, 5)))
    sda = {}
    for room in plan.rooms:
        if room.program not in DAYLIT:
            continue
        wall = longest_overlap(room.polygon.edges(), plan.facade_edges)
        exposure = segment_length(wall) / room.polygon.perimeter if wall else 0.0
        sda[room.room_id] = round(float(np.clip(0.15 + 2.2 * exposure + rng.uniform(-0.05, 0.05), 0, 1)), 4)
    return PerformanceRecord(apartment_id or plan.plan_id, round(eui_s, 3), round(eui_hp, 3), sda,
                             "synthetic, non-physical")
