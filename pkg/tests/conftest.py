from __future__ import annotations

from pathlib import Path

import pytest

from roomroute.model import (
    BuildingGraph,
    BuildingInfo,
    Characteristic,
    GraphMeta,
    Place,
    PlaceKind,
    RoomGeometry,
    Segment,
    build_graph,
)
from roomroute.osm import build_from_osm, parse_osm

FIXTURE_DIR = Path(__file__).parent / "fixtures"
HALL_OSM = FIXTURE_DIR / "hall.osm"

# Frozen at fixture-authoring time; any edit to hall.osm must re-freeze these.
HALL_NODE_COUNT = 20
HALL_WAY_COUNT = 8
HALL_PLACE_COUNT = 14
HALL_SEGMENT_COUNT = 14
HALL_ROOM_COUNT = 2


@pytest.fixture(scope="session")
def hall_graph() -> BuildingGraph:
    graph, _ = build_from_osm(parse_osm(HALL_OSM.read_bytes()), source=HALL_OSM.name)
    return graph


def drop_segments(graph: BuildingGraph, segment_ids: set[str]) -> BuildingGraph:
    """Rebuild a graph without the named segments (audit/what-if variants)."""
    return build_graph(
        graph.places.values(),
        [s for s in graph.segments.values() if s.id not in segment_ids],
        rooms=graph.rooms,
        corridors=graph.corridors,
        buildings=graph.buildings,
        meta=graph.meta,
    )


def _place(pid, kind, lon, lat, level, chars=(), name=None):
    return Place(
        id=pid,
        kind=kind,
        position=(lon, lat),
        level=level,
        characteristics=frozenset(Characteristic(c) for c in chars),
        name=name,
        building_id="hall",
    )


def small_graph_parts():
    """Hand-built condensed two-level building: 9 places, 9 segments.

    Two rooms behind one door each, an elevator pair and a single long stairs
    edge as the only level transitions.
    """
    places = [
        _place("x", PlaceKind.ENTRANCE, 4.8700, 45.7800, 0),
        _place("c1", PlaceKind.CORRIDOR_POINT, 4.8701, 45.7800, 0),
        _place("d0", PlaceKind.DOOR, 4.8701, 45.77995, 0),
        _place("assoc", PlaceKind.ROOM, 4.8701, 45.7799, 0, name="Assoc"),
        _place("e0", PlaceKind.ELEVATOR_NODE, 4.8702, 45.7800, 0, chars=("elevator",)),
        _place("e1", PlaceKind.ELEVATOR_NODE, 4.8702, 45.7800, 1, chars=("elevator",)),
        _place("c4", PlaceKind.CORRIDOR_POINT, 4.8703, 45.7801, 1),
        _place("d1", PlaceKind.DOOR, 4.8703, 45.78015, 1),
        _place("bu", PlaceKind.ROOM, 4.8703, 45.7802, 1, name="BU"),
    ]
    segments = [
        Segment("cor0", ("x", "c1"), 8.0, frozenset(), frozenset({0})),
        Segment("cor1", ("c1", "d0"), 6.0, frozenset(), frozenset({0})),
        Segment("anc0", ("assoc", "d0"), 0.1, frozenset(), frozenset({0})),
        Segment("cor2", ("c1", "e0"), 8.0, frozenset(), frozenset({0})),
        Segment(
            "lift", ("e0", "e1"), 4.0, frozenset({Characteristic.ELEVATOR}), frozenset({0, 1})
        ),
        Segment(
            "stair", ("c1", "c4"), 30.0, frozenset({Characteristic.STAIRS}), frozenset({0, 1})
        ),
        Segment("cor3", ("e1", "c4"), 12.0, frozenset(), frozenset({1})),
        Segment("cor4", ("c4", "d1"), 4.0, frozenset(), frozenset({1})),
        Segment("anc1", ("bu", "d1"), 0.1, frozenset(), frozenset({1})),
    ]
    rooms = {
        "assoc": RoomGeometry(
            id="assoc",
            name="Assoc",
            level=0,
            outline=((4.87005, 45.7799), (4.87015, 45.7799), (4.8701, 45.77995), (4.87005, 45.7799)),
            room_place_id="assoc",
            anchor_place_ids=("d0",),
            building_id="hall",
        ),
        "bu": RoomGeometry(
            id="bu",
            name="BU",
            level=1,
            outline=((4.87025, 45.7802), (4.87035, 45.7802), (4.8703, 45.78015), (4.87025, 45.7802)),
            room_place_id="bu",
            anchor_place_ids=("d1",),
            building_id="hall",
        ),
    }
    buildings = [BuildingInfo(id="hall", name="Hall", levels=(0, 1))]
    return places, segments, rooms, buildings


@pytest.fixture()
def small_graph() -> BuildingGraph:
    places, segments, rooms, buildings = small_graph_parts()
    return build_graph(
        places, segments, rooms=rooms, buildings=buildings, meta=GraphMeta(source="hand")
    )


def triangle_graph() -> BuildingGraph:
    """A--B direct 5 m versus A--C--B 2 m + 2 m: flips with the turn penalty."""
    places = [
        _place("a", PlaceKind.CORRIDOR_POINT, 4.87, 45.78, 0),
        _place("b", PlaceKind.CORRIDOR_POINT, 4.8701, 45.78, 0),
        _place("c", PlaceKind.CORRIDOR_POINT, 4.87005, 45.7801, 0),
    ]
    segments = [
        Segment("ab", ("a", "b"), 5.0),
        Segment("ac", ("a", "c"), 2.0),
        Segment("cb", ("c", "b"), 2.0),
    ]
    return build_graph(places, segments)


def graph_from_spec(places_spec, segments_spec) -> BuildingGraph:
    """Build a graph from the plain-dict shape the random generator emits."""
    places = [
        Place(
            id=p["id"],
            kind=PlaceKind(p["kind"]),
            position=tuple(p["position"]),
            level=p["level"],
            characteristics=frozenset(Characteristic(c) for c in p["characteristics"]),
        )
        for p in places_spec
    ]
    segments = [
        Segment(
            id=s["id"],
            endpoints=tuple(s["endpoints"]),
            length_m=s["length_m"],
            characteristics=frozenset(Characteristic(c) for c in s["characteristics"]),
            level_span=frozenset(s["level_span"]),
        )
        for s in segments_spec
    ]
    return build_graph(places, segments)
