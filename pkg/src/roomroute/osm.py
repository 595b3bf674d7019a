"""Compile OSM XML indoor cartography into a building graph.

Walkable ways are split into segments between their nodes, rooms anchor at the
door nodes on their outline, and a multi-level elevator or stairs node expands
into one place per level joined by transition segments. Nothing is snapped
together automatically: a room whose outline has no door stays disconnected so
the connectivity audit can surface the mapping gap.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .model import (
    MIN_SEGMENT_LENGTH_M,
    BuildingGraph,
    BuildingInfo,
    Characteristic,
    CorridorGeometry,
    GraphMeta,
    Place,
    PlaceKind,
    RoomGeometry,
    Segment,
    StructuralError,
    build_graph,
    geodesic_length,
)

#: Effective vertical distance per floor for same-shaft transitions (an
#: elevator or stairwell node expanded per level has no horizontal extent).
LEVEL_TRANSITION_M = 4.0

C = Characteristic


class OsmParseError(ValueError):
    """The input is not a usable OSM XML document."""


class UnsupportedLevelError(StructuralError):
    """A level value is outside the supported integer grammar."""


@dataclass(frozen=True)
class OsmNode:
    id: int
    position: tuple[float, float]  # (lon, lat)
    tags: dict[str, str]


@dataclass(frozen=True)
class OsmWay:
    id: int
    node_ids: tuple[int, ...]
    tags: dict[str, str]


@dataclass(frozen=True)
class OsmDocument:
    nodes: dict[int, OsmNode]
    ways: dict[int, OsmWay]


@dataclass
class IngestReport:
    places: int = 0
    segments: int = 0
    rooms: int = 0
    ignored_elements: int = 0
    rooms_without_doors: int = 0

    def to_json_dict(self) -> dict:
        return {
            "places": self.places,
            "segments": self.segments,
            "rooms": self.rooms,
            "ignored_elements": self.ignored_elements,
            "rooms_without_doors": self.rooms_without_doors,
        }


def parse_osm(data: bytes | str) -> OsmDocument:
    """Parse OSM XML into nodes and ways; relations are skipped."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise OsmParseError(f"malformed XML at line {line}, column {column}: {exc.msg}") from exc
    if root.tag != "osm":
        raise OsmParseError(f"expected <osm> root element, found <{root.tag}>")

    nodes: dict[int, OsmNode] = {}
    ways: dict[int, OsmWay] = {}
    for element in root:
        if element.tag == "node":
            tags = {t.attrib["k"]: t.attrib["v"] for t in element if t.tag == "tag"}
            node_id = int(element.attrib["id"])
            nodes[node_id] = OsmNode(
                id=node_id,
                position=(float(element.attrib["lon"]), float(element.attrib["lat"])),
                tags=tags,
            )
        elif element.tag == "way":
            tags = {t.attrib["k"]: t.attrib["v"] for t in element if t.tag == "tag"}
            refs = tuple(int(nd.attrib["ref"]) for nd in element if nd.tag == "nd")
            way_id = int(element.attrib["id"])
            ways[way_id] = OsmWay(id=way_id, node_ids=refs, tags=tags)

    dangling = sorted({ref for w in ways.values() for ref in w.node_ids if ref not in nodes})
    if dangling:
        raise StructuralError(
            "way references missing node(s): " + ", ".join(str(r) for r in dangling)
        )
    return OsmDocument(nodes=nodes, ways=ways)


_RANGE_RE = re.compile(r"^(-?\d+)\s*-\s*(-?\d+)$")


def parse_levels(value: str) -> set[int]:
    """Parse a level tag: single integers, ';' lists and inclusive '-' ranges."""
    levels: set[int] = set()
    for token in str(value).split(";"):
        token = token.strip()
        try:
            levels.add(int(token))
            continue
        except ValueError:
            pass
        match = _RANGE_RE.match(token)
        if not match:
            raise UnsupportedLevelError(f"unsupported level value: {token!r}")
        lo, hi = sorted((int(match.group(1)), int(match.group(2))))
        levels.update(range(lo, hi + 1))
    if not levels:
        raise UnsupportedLevelError(f"unsupported level value: {value!r}")
    return levels


_WALKABLE_HIGHWAYS = {"footway", "corridor"}
_DIFFICULT_SURFACES = {"unpaved", "gravel", "grass"}


def characteristics_from_tags(tags: dict[str, str]) -> frozenset[Characteristic]:
    chars: set[Characteristic] = set()
    if tags.get("highway") == "steps" or tags.get("stairs") == "yes":
        chars.add(C.STAIRS)
    if tags.get("highway") == "elevator":
        chars.add(C.ELEVATOR)
    if tags.get("ramp") == "yes":
        chars.add(C.RAMP)
    if "door" in tags:
        if tags.get("automatic_door") == "yes" or tags.get("door") == "sliding":
            chars.add(C.AUTOMATIC_DOOR)
        if tags.get("door:heavy") == "yes":
            chars.add(C.HEAVY_DOOR)
    if tags.get("tactile_paving") == "yes":
        chars.add(C.TACTILE_PAVING)
    if tags.get("lit") == "yes":
        chars.add(C.LIT_AREA)
    if tags.get("quiet") == "yes":
        chars.add(C.QUIET_PLACE)
    if tags.get("surface") in _DIFFICULT_SURFACES:
        chars.add(C.DIFFICULT_TERRAIN)
    if tags.get("construction") == "yes":
        chars.add(C.CONSTRUCTION_ZONE)
    return frozenset(chars)


@dataclass(frozen=True)
class WayClass:
    role: str  # room | walkable | ignored
    characteristics: frozenset[Characteristic] = frozenset()
    indoor: bool = False


def classify_way(tags: dict[str, str]) -> WayClass:
    chars = characteristics_from_tags(tags)
    indoor = "indoor" in tags or "level" in tags
    if tags.get("indoor") == "room":
        return WayClass("room", chars, True)
    if (
        tags.get("indoor") == "corridor"
        or tags.get("highway") in _WALKABLE_HIGHWAYS
        or tags.get("highway") == "steps"
        or tags.get("highway") == "elevator"
    ):
        return WayClass("walkable", chars, indoor)
    return WayClass("ignored")


def node_kind(tags: dict[str, str]) -> PlaceKind | None:
    """Kind from the first matching tag row; None when tags force no kind."""
    if tags.get("highway") == "steps" or tags.get("stairs") == "yes":
        return PlaceKind.STAIRS_NODE
    if tags.get("highway") == "elevator":
        return PlaceKind.ELEVATOR_NODE
    if "door" in tags:
        return PlaceKind.DOOR
    if tags.get("entrance") in {"yes", "main"}:
        return PlaceKind.ENTRANCE
    return None


def _polygon_centroid(points: list[tuple[float, float]]) -> tuple[float, float]:
    # Shoelace centroid; falls back to vertex mean for degenerate rings.
    ring = points[:-1] if points[0] == points[-1] else points
    area2 = 0.0
    cx = cy = 0.0
    for (x1, y1), (x2, y2) in zip(ring, ring[1:] + ring[:1]):
        cross = x1 * y2 - x2 * y1
        area2 += cross
        cx += (x1 + x2) * cross
        cy += (y1 + y2) * cross
    if abs(area2) < 1e-18:
        return (sum(x for x, _ in ring) / len(ring), sum(y for _, y in ring) / len(ring))
    return (cx / (3.0 * area2), cy / (3.0 * area2))


def _slug(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "building"


@dataclass
class _NodeState:
    node: OsmNode
    kind: PlaceKind | None = None
    own_levels: set[int] | None = None
    flat_levels: set[int] = field(default_factory=set)
    vertical_levels: set[int] = field(default_factory=set)
    on_walkable: bool = False
    on_room: bool = False
    on_ignored_way: bool = False
    indoor: bool = False

    @property
    def expanded(self) -> bool:
        return self.own_levels is not None and len(self.own_levels) >= 2

    def levels(self) -> set[int]:
        if self.own_levels:
            return self.own_levels
        if self.flat_levels:
            return {min(self.flat_levels)}
        if self.vertical_levels:
            return {min(self.vertical_levels)}
        return {0}

    def makes_place(self) -> bool:
        return self.kind is not None or self.on_walkable


def build_from_osm(doc: OsmDocument, source: str = "") -> tuple[BuildingGraph, IngestReport]:
    """Compile a parsed OSM document into a validated BuildingGraph."""
    report = IngestReport()

    way_classes: dict[int, WayClass] = {}
    way_levels: dict[int, set[int]] = {}
    for way_id in sorted(doc.ways):
        way = doc.ways[way_id]
        cls = classify_way(way.tags)
        way_classes[way_id] = cls
        if cls.role == "ignored":
            report.ignored_elements += 1
            continue
        if "level" in way.tags:
            try:
                way_levels[way_id] = parse_levels(way.tags["level"])
            except UnsupportedLevelError as exc:
                raise UnsupportedLevelError(f"way {way_id}: {exc}") from None
        else:
            way_levels[way_id] = {0}

    states: dict[int, _NodeState] = {}
    for node_id in sorted(doc.nodes):
        node = doc.nodes[node_id]
        state = _NodeState(node=node, kind=node_kind(node.tags))
        if "level" in node.tags:
            try:
                state.own_levels = parse_levels(node.tags["level"])
            except UnsupportedLevelError as exc:
                raise UnsupportedLevelError(f"node {node_id}: {exc}") from None
            state.indoor = True
        if state.kind is PlaceKind.ENTRANCE:
            state.indoor = True
        states[node_id] = state

    for way_id in sorted(doc.ways):
        cls = way_classes[way_id]
        if cls.role == "ignored":
            for ref in doc.ways[way_id].node_ids:
                states[ref].on_ignored_way = True
            continue
        levels = way_levels[way_id]
        vertical = len(levels) >= 2
        for ref in doc.ways[way_id].node_ids:
            state = states[ref]
            if cls.role == "walkable":
                state.on_walkable = True
                (state.vertical_levels if vertical else state.flat_levels).update(levels)
            else:
                state.on_room = True
                state.flat_levels.add(min(levels))
            if cls.indoor:
                state.indoor = True

    for node_id in sorted(states):
        state = states[node_id]
        if not state.makes_place() and not state.on_room and not state.on_ignored_way:
            report.ignored_elements += 1

    building_slug = _slug(source.rsplit("/", 1)[-1].rsplit(".", 1)[0]) if source else "building"

    places: list[Place] = []
    segments: list[Segment] = []

    def place_id_for(node_id: int, level: int) -> str:
        return f"n{node_id}@{level}" if states[node_id].expanded else f"n{node_id}"

    def node_level_for_way(node_id: int, way_id: int) -> int:
        """Level at which a way attaches to a node (expanded nodes pick the matching floor)."""
        state = states[node_id]
        levels = way_levels[way_id]
        if state.expanded:
            shared = sorted(state.own_levels & levels)
            if not shared:
                raise StructuralError(
                    f"way {way_id} (levels {sorted(levels)}) references node {node_id} "
                    f"which only exists on levels {sorted(state.own_levels)}"
                )
            return shared[0]
        return min(state.levels() & levels) if state.levels() & levels else min(state.levels())

    for node_id in sorted(states):
        state = states[node_id]
        if not state.makes_place():
            continue
        kind = state.kind
        if kind is None:
            kind = PlaceKind.CORRIDOR_POINT if state.indoor else PlaceKind.OUTDOOR_POINT
        chars = characteristics_from_tags(state.node.tags)
        name = state.node.tags.get("name") or state.node.tags.get("ref")
        building = building_slug if state.indoor else None
        node_levels = sorted(state.levels())
        for level in node_levels:
            places.append(
                Place(
                    id=place_id_for(node_id, level),
                    kind=kind,
                    position=state.node.position,
                    level=level,
                    characteristics=chars,
                    name=name,
                    building_id=building,
                )
            )
        if state.expanded:
            for low, high in zip(node_levels, node_levels[1:]):
                segments.append(
                    Segment(
                        id=f"n{node_id}t{low}",
                        endpoints=(place_id_for(node_id, low), place_id_for(node_id, high)),
                        length_m=LEVEL_TRANSITION_M * (high - low),
                        characteristics=chars,
                        level_span=frozenset({low, high}),
                    )
                )

    corridors: list[CorridorGeometry] = []
    for way_id in sorted(doc.ways):
        cls = way_classes[way_id]
        if cls.role != "walkable":
            continue
        way = doc.ways[way_id]
        levels = way_levels[way_id]
        vertical = len(levels) >= 2
        index = 0
        for a, b in zip(way.node_ids, way.node_ids[1:]):
            if a == b:
                continue
            level_a = node_level_for_way(a, way_id)
            level_b = node_level_for_way(b, way_id)
            pa, pb = place_id_for(a, level_a), place_id_for(b, level_b)
            span = levels if vertical else {level_a}
            segments.append(
                Segment(
                    id=f"w{way_id}s{index}",
                    endpoints=(pa, pb),
                    length_m=max(
                        geodesic_length(doc.nodes[a].position, doc.nodes[b].position),
                        MIN_SEGMENT_LENGTH_M,
                    ),
                    characteristics=cls.characteristics,
                    level_span=frozenset(span),
                )
            )
            index += 1
        if C.STAIRS in cls.characteristics:
            display_kind = "stairs"
        elif C.ELEVATOR in cls.characteristics:
            display_kind = "elevator"
        elif cls.indoor:
            display_kind = "corridor"
        else:
            display_kind = "footway"
        corridors.append(
            CorridorGeometry(
                id=f"w{way_id}",
                levels=tuple(sorted(levels)),
                points=tuple(doc.nodes[ref].position for ref in way.node_ids),
                kind=display_kind,
            )
        )

    rooms: dict[str, RoomGeometry] = {}
    for way_id in sorted(doc.ways):
        if way_classes[way_id].role != "room":
            continue
        way = doc.ways[way_id]
        if len(way.node_ids) < 4 or way.node_ids[0] != way.node_ids[-1]:
            raise StructuralError(f"room way {way_id} outline is not a closed ring")
        report.rooms += 1
        level = min(way_levels[way_id])
        outline = [doc.nodes[ref].position for ref in way.node_ids]
        door_refs = sorted(
            {ref for ref in way.node_ids if states[ref].kind is PlaceKind.DOOR}
        )
        room_place_id = f"w{way_id}"
        name = way.tags.get("name") or way.tags.get("ref")
        chars = characteristics_from_tags(way.tags)
        places.append(
            Place(
                id=room_place_id,
                kind=PlaceKind.ROOM,
                position=_polygon_centroid(outline),
                level=level,
                characteristics=chars,
                name=name,
                building_id=building_slug,
            )
        )
        anchors: list[str] = []
        for k, ref in enumerate(door_refs):
            door_place = place_id_for(ref, node_level_for_way(ref, way_id))
            anchors.append(door_place)
            segments.append(
                Segment(
                    id=f"w{way_id}a{k}",
                    endpoints=(room_place_id, door_place),
                    length_m=MIN_SEGMENT_LENGTH_M,
                    level_span=frozenset({level}),
                )
            )
        if not anchors:
            report.rooms_without_doors += 1
            anchors = [room_place_id]
        rooms[room_place_id] = RoomGeometry(
            id=room_place_id,
            name=name,
            level=level,
            outline=tuple(outline),
            room_place_id=room_place_id,
            anchor_place_ids=tuple(anchors),
            building_id=building_slug,
        )

    building_levels = sorted({p.level for p in places if p.building_id == building_slug})
    buildings = [
        BuildingInfo(
            id=building_slug,
            name=source.rsplit("/", 1)[-1].rsplit(".", 1)[0] if source else None,
            levels=tuple(building_levels),
        )
    ]

    graph = build_graph(
        places,
        segments,
        rooms=rooms,
        corridors=corridors,
        buildings=buildings,
        meta=GraphMeta(
            source=source.rsplit("/", 1)[-1],
            generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        ),
    )
    report.places = len(graph.places)
    report.segments = len(graph.segments)
    return graph, report
