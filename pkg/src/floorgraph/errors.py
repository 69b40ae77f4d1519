"""Exception hierarchy.

Every error raised by the package derives from :class:`FloorgraphError`.
Geometry, encoding and input errors are kept apart so the CLI can map them
to exit codes (input problems -> 1, domain failures -> 2).
"""

from __future__ import annotations


class FloorgraphError(Exception):
    """Base class for all package errors."""


# -- geometry ---------------------------------------------------------------

class GeometryError(FloorgraphError):
    pass


class DegenerateGeometry(GeometryError):
    pass


class SplitDisconnected(GeometryError):
    pass


class SplitEmpty(GeometryError):
    pass


class RatioSplitInfeasible(GeometryError):
    pass


class HoleProduced(GeometryError):
    pass


# -- hypergraph codec -------------------------------------------------------

class HypergraphError(FloorgraphError):
    pass


class NotBspRepresentable(HypergraphError):
    """No free cut separates the rooms of some parent region."""

    def __init__(self, message: str, level: int, room_ids: tuple[str, ...] = ()):
        super().__init__(f"{message} (recursion level {level})")
        self.level = level
        self.room_ids = room_ids


class ApplyFailed(HypergraphError):
    def __init__(self, node_id: str, reason: str = ""):
        super().__init__(f"apply failed at node {node_id}" + (f": {reason}" if reason else ""))
        self.node_id = node_id


class InsufficientArea(HypergraphError):
    pass


class NoCirculationEdge(HypergraphError):
    pass


class InvalidHypergraph(HypergraphError):
    pass


# -- plans ------------------------------------------------------------------

class PlanError(FloorgraphError):
    pass


class TilingGap(PlanError):
    pass


class TilingOverlap(PlanError):
    pass


class UnknownProgram(PlanError):
    pass


class DanglingDoor(PlanError):
    pass


class NoSharedWall(PlanError):
    def __init__(self, edge: tuple[str, str], length: float = 0.0):
        super().__init__(f"no shared wall of sufficient length for access edge {edge[0]}-{edge[1]} "
                         f"(longest {length:.3f} m)")
        self.edge = edge
        self.length = length


# -- validity / furnishing / carbon / analysis -------------------------------

class RoomSetMismatch(FloorgraphError):
    pass


class Infeasible(FloorgraphError):
    """Furniture block could not be placed after exhausting all positions."""

    def __init__(self, block: str, room_id: str = ""):
        where = f" in room {room_id}" if room_id else ""
        super().__init__(f"cannot place block {block!r}{where}")
        self.block = block
        self.room_id = room_id


class UnknownOccupancy(FloorgraphError):
    pass


class InvalidRecord(FloorgraphError):
    pass


class MissingRoomScore(FloorgraphError):
    pass


class EmptyCohort(FloorgraphError):
    pass


class InconsistentPair(FloorgraphError):
    pass


class TooFewSamples(FloorgraphError):
    pass


# -- files ------------------------------------------------------------------

class SchemaError(FloorgraphError):
    """Malformed input file; ``where`` names the offending field or line."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class VersionMismatch(SchemaError):
    pass
