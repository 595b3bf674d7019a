"""Domain model: places, segments, characteristics and the building graph.

The graph is undirected and weighted by metric length; everything here is
immutable after construction so request handlers can share one instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

EARTH_RADIUS_M = 6_371_008.8

#: Minimum usable segment length; synthetic links are clamped up to this so
#: shortest-path weights stay strictly positive.
MIN_SEGMENT_LENGTH_M = 0.1


class InvalidInputError(ValueError):
    """Caller-supplied value is outside the accepted domain."""


class StructuralError(ValueError):
    """Graph data violates a structural invariant."""


class Characteristic(Enum):
    """The ten route-affecting properties a place or segment can carry."""

    ELEVATOR = "elevator"
    STAIRS = "stairs"
    QUIET_PLACE = "quiet_place"
    LIT_AREA = "lit_area"
    TACTILE_PAVING = "tactile_paving"
    AUTOMATIC_DOOR = "automatic_door"
    HEAVY_DOOR = "heavy_door"
    RAMP = "ramp"
    DIFFICULT_TERRAIN = "difficult_terrain"
    CONSTRUCTION_ZONE = "construction_zone"

    @classmethod
    def from_name(cls, name: str) -> "Characteristic":
        try:
            return cls(name)
        except ValueError:
            raise InvalidInputError(f"unknown characteristic: {name!r}") from None


#: Characteristics that move between levels; the only group where the
#: "indispensable" setting excludes alternative transitions.
VERTICAL_TRANSITION = frozenset(
    {Characteristic.ELEVATOR, Characteristic.STAIRS, Characteristic.RAMP}
)


class PreferenceLevel(Enum):
    """Seven-step importance scale; each step carries a polarity and factor."""

    INDISPENSABLE = ("indispensable", 1, 1000)
    WANT = ("want", 1, 100)
    PREFER = ("prefer", 1, 10)
    NEUTRAL = ("neutral", 0, 1)
    PREFER_NOT = ("prefer_not", -1, 10)
    DO_NOT_WANT = ("do_not_want", -1, 100)
    IMPOSSIBLE = ("impossible", -1, 1000)

    def __new__(cls, name: str, polarity: int, factor: int):
        obj = object.__new__(cls)
        obj._value_ = name
        obj.polarity = polarity
        obj.factor = factor
        return obj

    @property
    def is_constraint(self) -> bool:
        return self.factor == 1000

    @classmethod
    def from_name(cls, name: str) -> "PreferenceLevel":
        try:
            return cls(name)
        except ValueError:
            raise InvalidInputError(f"unknown preference level: {name!r}") from None


class PlaceKind(Enum):
    ROOM = "room"
    DOOR = "door"
    CORRIDOR_POINT = "corridor_point"
    STAIRS_NODE = "stairs_node"
    ELEVATOR_NODE = "elevator_node"
    ENTRANCE = "entrance"
    OUTDOOR_POINT = "outdoor_point"


#: Kinds that count as trip endpoints for the connectivity audit.
ROUTABLE_KINDS = frozenset({PlaceKind.ROOM, PlaceKind.DOOR, PlaceKind.ENTRANCE})


@dataclass(frozen=True)
class Place:
    id: str
    kind: PlaceKind
    position: tuple[float, float]  # (lon, lat) degrees
    level: int
    characteristics: frozenset[Characteristic] = frozenset()
    name: str | None = None
    building_id: str | None = None


@dataclass(frozen=True)
class Segment:
    id: str
    endpoints: tuple[str, str]  # canonicalised to sorted order by build_graph
    length_m: float
    characteristics: frozenset[Characteristic] = frozenset()
    level_span: frozenset[int] = frozenset()


@dataclass(frozen=True)
class RoomGeometry:
    id: str
    level: int
    outline: tuple[tuple[float, float], ...]
    room_place_id: str
    anchor_place_ids: tuple[str, ...]
    name: str | None = None
    building_id: str | None = None


@dataclass(frozen=True)
class CorridorGeometry:
    id: str
    levels: tuple[int, ...]
    points: tuple[tuple[float, float], ...]
    kind: str = "corridor"  # corridor | footway | stairs | elevator


@dataclass(frozen=True)
class BuildingInfo:
    id: str
    name: str | None
    levels: tuple[int, ...]


@dataclass(frozen=True)
class GraphMeta:
    source: str = ""
    generated_at: str = ""
    schema_version: int = 1


@dataclass(frozen=True)
class BuildingGraph:
    places: dict[str, Place]
    segments: dict[str, Segment]
    adjacency: dict[str, tuple[tuple[str, str], ...]]  # place -> ((segment, neighbor), ...)
    rooms: dict[str, RoomGeometry] = field(default_factory=dict)
    corridors: tuple[CorridorGeometry, ...] = ()
    buildings: tuple[BuildingInfo, ...] = ()
    meta: GraphMeta = GraphMeta()

    @property
    def levels(self) -> list[int]:
        return sorted({p.level for p in self.places.values()})

    def neighbors(self, place_id: str) -> tuple[tuple[str, str], ...]:
        return self.adjacency.get(place_id, ())

    def routable_place_ids(self) -> list[str]:
        return sorted(p.id for p in self.places.values() if p.kind in ROUTABLE_KINDS)


def _check_position(position: Sequence[float]) -> tuple[float, float]:
    lon, lat = float(position[0]), float(position[1])
    if not (math.isfinite(lon) and math.isfinite(lat)):
        raise InvalidInputError(f"non-finite coordinate: {position!r}")
    if not (-180.0 <= lon <= 180.0 and -90.0 <= lat <= 90.0):
        raise InvalidInputError(f"coordinate out of range: {position!r}")
    return lon, lat


def geodesic_length(a: Sequence[float], b: Sequence[float]) -> float:
    """Great-circle distance in meters between two (lon, lat) positions."""
    lon1, lat1 = _check_position(a)
    lon2, lat2 = _check_position(b)
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlmb = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def effective_characteristics(graph: BuildingGraph, segment_id: str) -> frozenset[Characteristic]:
    """Characteristics counted when traversing a segment: its own plus both endpoints'."""
    try:
        seg = graph.segments[segment_id]
    except KeyError:
        raise InvalidInputError(f"unknown segment: {segment_id!r}") from None
    a, b = seg.endpoints
    return seg.characteristics | graph.places[a].characteristics | graph.places[b].characteristics


def build_graph(
    places: Iterable[Place],
    segments: Iterable[Segment],
    *,
    rooms: Mapping[str, RoomGeometry] | None = None,
    corridors: Sequence[CorridorGeometry] = (),
    buildings: Sequence[BuildingInfo] = (),
    meta: GraphMeta = GraphMeta(),
) -> BuildingGraph:
    """Assemble and validate a BuildingGraph; raises StructuralError on bad data.

    Output is canonical: places, segments and adjacency lists are sorted by id,
    segment endpoints are stored in sorted order, so equal inputs in any order
    produce equal graphs.
    """
    place_map: dict[str, Place] = {}
    for p in sorted(places, key=lambda p: p.id):
        if p.id in place_map:
            raise StructuralError(f"duplicate place id: {p.id!r}")
        _check_position(p.position)
        place_map[p.id] = p

    segment_map: dict[str, Segment] = {}
    for s in sorted(segments, key=lambda s: s.id):
        if s.id in segment_map:
            raise StructuralError(f"duplicate segment id: {s.id!r}")
        a, b = s.endpoints
        if a == b:
            raise StructuralError(f"segment {s.id!r} connects {a!r} to itself")
        for end in (a, b):
            if end not in place_map:
                raise StructuralError(f"segment {s.id!r} references unknown place {end!r}")
        if not (math.isfinite(s.length_m) and s.length_m > 0):
            raise StructuralError(f"segment {s.id!r} has non-positive length {s.length_m!r}")
        if len(s.level_span) >= 2 and not (s.characteristics & VERTICAL_TRANSITION):
            raise StructuralError(
                f"segment {s.id!r} spans levels {sorted(s.level_span)} without a "
                f"vertical-transition characteristic"
            )
        if a > b:
            s = Segment(s.id, (b, a), s.length_m, s.characteristics, s.level_span)
        segment_map[s.id] = s

    adjacency: dict[str, list[tuple[str, str]]] = {pid: [] for pid in place_map}
    for s in segment_map.values():
        a, b = s.endpoints
        adjacency[a].append((s.id, b))
        adjacency[b].append((s.id, a))

    room_map = dict(rooms or {})
    for room in room_map.values():
        for pid in (room.room_place_id, *room.anchor_place_ids):
            if pid not in place_map:
                raise StructuralError(f"room {room.id!r} anchor references unknown place {pid!r}")

    return BuildingGraph(
        places=place_map,
        segments=segment_map,
        adjacency={pid: tuple(sorted(adjacency[pid])) for pid in place_map},
        rooms={rid: room_map[rid] for rid in sorted(room_map)},
        corridors=tuple(sorted(corridors, key=lambda c: c.id)),
        buildings=tuple(sorted(buildings, key=lambda b: b.id)),
        meta=meta,
    )
