"""Carbon accounting over externally simulated energy and daylight results."""

from __future__ import annotations

import json
import statistics
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import (
    EmptyCohort,
    InvalidRecord,
    MissingRoomScore,
    SchemaError,
    VersionMismatch,
)
from .floorplan import FloorPlan, RoomProgram

M_DEFAULT = 1.6  # area multiplier on the minimum furniture area
DAYLIT = frozenset({RoomProgram.LIVING, RoomProgram.KITCHEN, RoomProgram.BEDROOM, RoomProgram.FOYER})
PROFILES_FORMAT = "floorgraph.profiles"
PROFILES_VERSION = 1


@dataclass(frozen=True)
class Envelope:
    u_value: float  # W/m2K
    wwr: float
    glazing: str


@dataclass(frozen=True)
class Hvac:
    system: str
    cop: float


@dataclass(frozen=True)
class CityProfile:
    name: str
    grid_carbon: float  # kgCO2e/kWh
    energy_template: str = ""
    envelope_standard: Envelope = Envelope(0.3, 0.6, "DoublePaneClr")
    envelope_high: Envelope = Envelope(0.1, 0.6, "TriplePaneLoE")
    hvac: Hvac = Hvac("Standard Electric HP", 3.3)

    def to_dict(self) -> dict[str, Any]:
        env = lambda e: {"u_value": e.u_value, "wwr": e.wwr, "glazing": e.glazing}
        return {"name": self.name, "grid_carbon": self.grid_carbon, "energy_template": self.energy_template,
                "envelope_standard": env(self.envelope_standard), "envelope_high": env(self.envelope_high),
                "hvac": {"system": self.hvac.system, "cop": self.hvac.cop}}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> CityProfile:
        try:
            env = lambda e: Envelope(float(e["u_value"]), float(e["wwr"]), str(e["glazing"]))
            kw: dict[str, Any] = {}
            if "envelope_standard" in d:
                kw["envelope_standard"] = env(d["envelope_standard"])
            if "envelope_high" in d:
                kw["envelope_high"] = env(d["envelope_high"])
            if "hvac" in d:
                kw["hvac"] = Hvac(str(d["hvac"]["system"]), float(d["hvac"]["cop"]))
            return cls(str(d["name"]), float(d["grid_carbon"]), str(d.get("energy_template", "")), **kw)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad profile entry: {exc}", str(d.get("name", "?"))) from exc


BUILTIN_PROFILES: dict[str, CityProfile] = {
    "new_york": CityProfile("new_york", 0.55, "ASHRAE 90.1 Climate Zone 4"),
    "singapore": CityProfile("singapore", 0.4057, "ASHRAE 90.1 Climate Zone 1"),
    "zurich": CityProfile("zurich", 0.128, "SIA 2024"),
}


def load_profiles(path: str | Path | None = None) -> dict[str, CityProfile]:
    """Built-in profiles, overridden or extended by entries of a profile file."""
    out = dict(BUILTIN_PROFILES)
    if path is None:
        return out
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, f"{path}:{exc.lineno}") from exc
    if data.get("format") != PROFILES_FORMAT:
        raise SchemaError(f"expected format {PROFILES_FORMAT!r}", "format")
    if data.get("version") != PROFILES_VERSION:
        raise VersionMismatch(f"profiles version {data.get('version')!r}", "version")
    for entry in data.get("profiles", []):
        p = CityProfile.from_dict(entry)
        out[p.name] = p
    return out


def profiles_document(profiles: Iterable[CityProfile]) -> dict[str, Any]:
    return {"format": PROFILES_FORMAT, "version": PROFILES_VERSION,
            "units": {"grid_carbon": "kgCO2e/kWh", "u_value": "W/m2K"},
            "profiles": [p.to_dict() for p in sorted(profiles, key=lambda p: p.name)]}


@dataclass(frozen=True)
class PerformanceRecord:
    apartment_id: str
    eui_s: float  # kWh/m2/yr, standard envelope
    eui_hp: float  # kWh/m2/yr, high-performance envelope
    sda: Mapping[str, float] = field(default_factory=dict)
    provenance: str = ""

    def __post_init__(self) -> None:
        if not (self.eui_s >= self.eui_hp >= 0):
            raise InvalidRecord(f"{self.apartment_id}: need EUI_s >= EUI_hp >= 0, got {self.eui_s}, {self.eui_hp}")
        for room, v in self.sda.items():
            if not 0.0 <= v <= 1.0:
                raise InvalidRecord(f"{self.apartment_id}: sDA of {room} is {v}, outside [0, 1]")


@dataclass(frozen=True)
class CarbonReport:
    apartment_id: str
    area: float
    f_tot: float
    a_e: float
    c_e: float
    delta_e: float
    d_tot: float
    eui_s: float
    eui_hp: float
    g_cc: float
    m: float = M_DEFAULT
    valid: bool = True


def daylight_score(plan: FloorPlan, record: PerformanceRecord) -> float:
    """Area-weighted sDA over daylit rooms."""
    num = den = 0.0
    for room in plan.rooms:
        if room.program not in DAYLIT:
            continue
        if room.room_id not in record.sda:
            raise MissingRoomScore(f"{record.apartment_id}: no sDA for {room.program.value} room {room.room_id}")
        a = room.polygon.area
        num += record.sda[room.room_id] * a
        den += a
    if den == 0:
        raise MissingRoomScore(f"{plan.plan_id}: plan has no daylit rooms")
    return num / den


def excess_area(a_apt: float, f_tot: float, m: float = M_DEFAULT) -> float:
    return a_apt - f_tot * m


def excess_carbon(a_e: float, eui_s: float, g_cc: float) -> float:
    return max(a_e, 0.0) * eui_s * g_cc


def emission_delta(area: float, a_e: float, eui_s: float, eui_hp: float, g_cc: float) -> float:
    return excess_carbon(a_e, eui_s, g_cc) - area * (eui_s - eui_hp) * g_cc


def carbon_report(apartment_id: str, area: float, f_tot: float, record: PerformanceRecord,
                  profile: CityProfile, d_tot: float, m: float = M_DEFAULT, valid: bool = True) -> CarbonReport:
    g = profile.grid_carbon
    a_e = excess_area(area, f_tot, m)
    return CarbonReport(apartment_id, area, f_tot, a_e, excess_carbon(a_e, record.eui_s, g),
                        emission_delta(area, a_e, record.eui_s, record.eui_hp, g), d_tot,
                        record.eui_s, record.eui_hp, g, m, valid)


@dataclass(frozen=True)
class CohortSummary:
    n: int
    n_valid: int
    share_positive: float
    share_positive_valid: float | None
    mean_c_e: float
    median_c_e: float
    mean_d_tot: float


def cohort_summary(reports: Sequence[CarbonReport]) -> CohortSummary:
    """Share of apartments where excess space outweighs the envelope upgrade.

    The share is given over all apartments and over valid ones only.
    """
    if not reports:
        raise EmptyCohort("cohort is empty")
    valid = [r for r in reports if r.valid]
    pos = sum(1 for r in reports if r.delta_e > 0)
    pos_valid = sum(1 for r in valid if r.delta_e > 0)
    c = [r.c_e for r in reports]
    return CohortSummary(
        n=len(reports),
        n_valid=len(valid),
        share_positive=pos / len(reports),
        share_positive_valid=pos_valid / len(valid) if valid else None,
        mean_c_e=statistics.fmean(c),
        median_c_e=statistics.median(c),
        mean_d_tot=statistics.fmean(r.d_tot for r in reports),
    )
