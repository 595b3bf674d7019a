"""Versioned JSON persistence for building graphs.

The file is a plain UTF-8 JSON document so fixtures stay inspectable and the
CLI and service share one stable contract. Unknown top-level keys are ignored
on read; unknown characteristic names are an error.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import (
    BuildingGraph,
    BuildingInfo,
    Characteristic,
    CorridorGeometry,
    GraphMeta,
    InvalidInputError,
    Place,
    PlaceKind,
    RoomGeometry,
    Segment,
    StructuralError,
    build_graph,
)

SCHEMA_VERSION = 1


def graph_to_dict(graph: BuildingGraph) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "buildings": [
            {"id": b.id, "name": b.name, "levels": list(b.levels)} for b in graph.buildings
        ],
        "places": [
            {
                "id": p.id,
                "name": p.name,
                "kind": p.kind.value,
                "position": [p.position[0], p.position[1]],
                "level": p.level,
                "characteristics": sorted(c.value for c in p.characteristics),
                "building_id": p.building_id,
            }
            for p in graph.places.values()
        ],
        "segments": [
            {
                "id": s.id,
                "endpoints": [s.endpoints[0], s.endpoints[1]],
                "length_m": s.length_m,
                "characteristics": sorted(c.value for c in s.characteristics),
                "level_span": sorted(s.level_span),
            }
            for s in graph.segments.values()
        ],
        "rooms": [
            {
                "id": r.id,
                "name": r.name,
                "level": r.level,
                "outline": [[x, y] for x, y in r.outline],
                "room_place_id": r.room_place_id,
                "anchor_place_ids": list(r.anchor_place_ids),
                "building_id": r.building_id,
            }
            for r in graph.rooms.values()
        ],
        "corridors": [
            {
                "id": c.id,
                "levels": list(c.levels),
                "points": [[x, y] for x, y in c.points],
                "kind": c.kind,
            }
            for c in graph.corridors
        ],
        "meta": {
            "source": graph.meta.source,
            "generated_at": graph.meta.generated_at,
        },
    }


def _chars(names) -> frozenset[Characteristic]:
    return frozenset(Characteristic.from_name(n) for n in names)


def graph_from_dict(doc: dict) -> BuildingGraph:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise StructuralError(f"unsupported graph schema version: {version!r}")
    try:
        places = [
            Place(
                id=str(p["id"]),
                name=p.get("name"),
                kind=PlaceKind(p["kind"]),
                position=(float(p["position"][0]), float(p["position"][1])),
                level=int(p["level"]),
                characteristics=_chars(p.get("characteristics", ())),
                building_id=p.get("building_id"),
            )
            for p in doc.get("places", ())
        ]
        segments = [
            Segment(
                id=str(s["id"]),
                endpoints=(str(s["endpoints"][0]), str(s["endpoints"][1])),
                length_m=float(s["length_m"]),
                characteristics=_chars(s.get("characteristics", ())),
                level_span=frozenset(int(l) for l in s.get("level_span", ())),
            )
            for s in doc.get("segments", ())
        ]
        rooms = {
            str(r["id"]): RoomGeometry(
                id=str(r["id"]),
                name=r.get("name"),
                level=int(r["level"]),
                outline=tuple((float(x), float(y)) for x, y in r.get("outline", ())),
                room_place_id=str(r["room_place_id"]),
                anchor_place_ids=tuple(str(a) for a in r.get("anchor_place_ids", ())),
                building_id=r.get("building_id"),
            )
            for r in doc.get("rooms", ())
        }
        corridors = [
            CorridorGeometry(
                id=str(c["id"]),
                levels=tuple(int(l) for l in c.get("levels", ())),
                points=tuple((float(x), float(y)) for x, y in c.get("points", ())),
                kind=str(c.get("kind", "corridor")),
            )
            for c in doc.get("corridors", ())
        ]
        buildings = [
            BuildingInfo(
                id=str(b["id"]),
                name=b.get("name"),
                levels=tuple(int(l) for l in b.get("levels", ())),
            )
            for b in doc.get("buildings", ())
        ]
        meta_doc = doc.get("meta", {})
        meta = GraphMeta(
            source=str(meta_doc.get("source", "")),
            generated_at=str(meta_doc.get("generated_at", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (StructuralError, InvalidInputError)):
            raise
        raise StructuralError(f"malformed graph document: {exc}") from exc

    return build_graph(
        places, segments, rooms=rooms, corridors=corridors, buildings=buildings, meta=meta
    )


def save_graph(graph: BuildingGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(graph_to_dict(graph), indent=2) + "\n", encoding="utf-8")


def load_graph(path: str | Path) -> BuildingGraph:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StructuralError(f"{path}: graph document must be a JSON object")
    return graph_from_dict(doc)
