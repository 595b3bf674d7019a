"""GeoJSON documents served to clients: floor plans and route plans.

Geometry is strictly copied from the graph; nothing here invents coordinates.
Routes are split into one LineString per run of same-level places so a client
can show only what belongs to the visible floor.
"""

from __future__ import annotations

from .model import BuildingGraph, PlaceKind
from .routing import Route, RoutePlan

#: Place kinds drawn as point markers on floor plans.
_PLAN_POINT_KINDS = frozenset(
    {PlaceKind.DOOR, PlaceKind.ENTRANCE, PlaceKind.STAIRS_NODE, PlaceKind.ELEVATOR_NODE}
)


def level_plan(graph: BuildingGraph, building_id: str, level: int) -> dict:
    """FeatureCollection for one floor: room polygons, corridor lines, marker points."""
    features: list[dict] = []
    for room in graph.rooms.values():
        if room.level != level or room.building_id != building_id:
            continue
        outline = [[x, y] for x, y in room.outline]
        if outline and outline[0] != outline[-1]:
            outline.append(outline[0])
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [outline]},
                "properties": {
                    "feature": "room",
                    "name": room.name,
                    "level": room.level,
                    "place_id": room.room_place_id,
                },
            }
        )
    for corridor in graph.corridors:
        if level not in corridor.levels:
            continue
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[x, y] for x, y in corridor.points],
                },
                "properties": {
                    "feature": "corridor",
                    "kind": corridor.kind,
                    "levels": list(corridor.levels),
                },
            }
        )
    for place in graph.places.values():
        if place.level != level or place.kind not in _PLAN_POINT_KINDS:
            continue
        if place.building_id is not None and place.building_id != building_id:
            continue
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [place.position[0], place.position[1]]},
                "properties": {
                    "feature": "place",
                    "kind": place.kind.value,
                    "name": place.name,
                    "level": place.level,
                    "place_id": place.id,
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


def route_geometry(graph: BuildingGraph, route: Route) -> dict:
    """Per-level route geometry: one feature per run of same-level places."""
    features: list[dict] = []
    run: list[str] = []
    run_level: int | None = None
    seq = 0

    def flush():
        nonlocal seq
        if not run:
            return
        coords = [[graph.places[pid].position[0], graph.places[pid].position[1]] for pid in run]
        if len(coords) == 1:
            geometry = {"type": "Point", "coordinates": coords[0]}
        else:
            geometry = {"type": "LineString", "coordinates": coords}
        features.append(
            {
                "type": "Feature",
                "geometry": geometry,
                "properties": {"feature": "route_leg", "level": run_level, "seq": seq},
            }
        )
        seq += 1

    for pid in route.place_ids:
        level = graph.places[pid].level
        if run_level is None or level == run_level:
            run.append(pid)
            run_level = level
        else:
            flush()
            run = [pid]
            run_level = level
    flush()
    return {"type": "FeatureCollection", "features": features}


def route_document(graph: BuildingGraph, route: Route) -> dict:
    return {
        "place_ids": list(route.place_ids),
        "segment_ids": list(route.segment_ids),
        "distance_m": route.distance_m,
        "cost": route.cost,
        "levels_visited": list(route.levels_visited),
        "violations": [
            {
                "segment_id": v.segment_id,
                "characteristic": v.characteristic.value,
                "level": v.level.value,
            }
            for v in route.violations
        ],
        "geometry": route_geometry(graph, route),
    }


def route_plan_document(graph: BuildingGraph, plan: RoutePlan) -> dict:
    return {
        "status": plan.status,
        "adapted": route_document(graph, plan.adapted) if plan.adapted else None,
        "fastest": route_document(graph, plan.fastest) if plan.fastest else None,
    }
