"""Regenerate the UI test fixtures from the real backend.

Run from the repository root after changing the service's wire format:

    python frontend/scripts/export_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from roomroute.graphio import save_graph
from roomroute.osm import build_from_osm, parse_osm
from roomroute.service import ServiceConfig, create_app

ROOT = Path(__file__).resolve().parents[2]
OSM = ROOT / "tests" / "fixtures" / "hall.osm"
OUT = ROOT / "frontend" / "tests" / "fixtures"


def main():
    graph, _ = build_from_osm(parse_osm(OSM.read_bytes()), source="hall.osm")
    graph_path = OUT / "hall.graph.json"
    OUT.mkdir(parents=True, exist_ok=True)
    save_graph(graph, graph_path)
    client = TestClient(create_app(ServiceConfig(graph_paths=(str(graph_path),))))

    def dump(name, payload):
        (OUT / name).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print("wrote", name)

    dump("buildings.json", client.get("/buildings").json())
    dump("plan_level0.json", client.get("/buildings/hall/levels/0/plan").json())
    dump("plan_level1.json", client.get("/buildings/hall/levels/1/plan").json())
    dump(
        "route_alice.json",
        client.post(
            "/route",
            json={"from": "Assoc", "to": "BU", "profile": {"elevator": "do_not_want"}},
        ).json(),
    )
    dump(
        "route_bob.json",
        client.post(
            "/route",
            json={"from": "Assoc", "to": "BU", "profile": {"elevator": "indispensable"}},
        ).json(),
    )

    # variant without the elevator: stairs-impossible forces a flagged fastest
    from roomroute.model import build_graph

    variant = build_graph(
        graph.places.values(),
        [s for s in graph.segments.values() if s.id != "n6t0"],
        rooms=graph.rooms,
        corridors=graph.corridors,
        buildings=graph.buildings,
        meta=graph.meta,
    )
    variant_path = OUT / "hall_nolift.graph.json"
    save_graph(variant, variant_path)
    client2 = TestClient(create_app(ServiceConfig(graph_paths=(str(variant_path),))))
    dump(
        "route_violation.json",
        client2.post(
            "/route",
            json={"from": "Assoc", "to": "BU", "profile": {"stairs": "impossible"}},
        ).json(),
    )
    graph_path.unlink()
    variant_path.unlink()


if __name__ == "__main__":
    main()
