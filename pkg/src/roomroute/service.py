"""HTTP service exposing buildings, floor plans, place search, routing and audits.

Graphs are loaded once at startup and shared immutably by all request
handlers; refreshing the cartography means re-ingesting and restarting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .audit import audit_connectivity
from .geojson import level_plan, route_plan_document
from .graphio import load_graph
from .model import (
    ROUTABLE_KINDS,
    BuildingGraph,
    InvalidInputError,
    StructuralError,
    geodesic_length,
)
from .routing import (
    AmbiguousRoomError,
    CostParams,
    Profile,
    plan_routes,
)
from .schemas import (
    AuditResponse,
    BuildingSummary,
    CoordinateRef,
    HealthResponse,
    PlaceSummary,
    RoutePlanResponse,
    RouteRequest,
)

DEFAULT_SNAP_RADIUS_M = 50.0


@dataclass(frozen=True)
class ServiceConfig:
    graph_paths: tuple[str, ...]
    host: str = "127.0.0.1"
    port: int = 8000
    turn_penalty_m: float | None = None
    static_dir: str | None = None
    snap_radius_m: float = DEFAULT_SNAP_RADIUS_M
    cors_origins: tuple[str, ...] = ("*",)

    def __post_init__(self):
        if not self.graph_paths:
            raise InvalidInputError("at least one graph file is required")
        if not (1 <= self.port <= 65535):
            raise InvalidInputError(f"port out of range: {self.port}")


class ServiceError(Exception):
    def __init__(self, status_code: int, code: str, detail: str):
        super().__init__(detail)
        self.status_code = status_code
        self.code = code
        self.detail = detail


def load_graphs(paths) -> dict[str, BuildingGraph]:
    graphs: dict[str, BuildingGraph] = {}
    for path in paths:
        try:
            graph = load_graph(path)
        except (OSError, StructuralError, InvalidInputError) as exc:
            raise RuntimeError(f"cannot load graph file {path}: {exc}") from exc
        if not graph.buildings:
            raise RuntimeError(f"graph file {path} declares no building")
        building_id = graph.buildings[0].id
        if building_id in graphs:
            raise RuntimeError(f"duplicate building id {building_id!r} from {path}")
        graphs[building_id] = graph
    return graphs


def _building_or_404(graphs: dict[str, BuildingGraph], building_id: str) -> BuildingGraph:
    graph = graphs.get(building_id)
    if graph is None:
        raise ServiceError(404, "unknown_building", f"no building named {building_id!r}")
    return graph


def _snap(graphs: dict[str, BuildingGraph], ref: CoordinateRef, radius_m: float) -> tuple[str, str]:
    """Nearest place on the requested level within the snap radius, over all buildings."""
    best: tuple[float, str, str] | None = None
    for building_id in sorted(graphs):
        for place in graphs[building_id].places.values():
            if place.level != ref.level:
                continue
            d = geodesic_length((ref.lon, ref.lat), place.position)
            if d <= radius_m and (best is None or (d, place.id) < (best[0], best[2])):
                best = (d, building_id, place.id)
    if best is None:
        raise ServiceError(
            422, "snap_failed", f"no place within {radius_m:g} m of ({ref.lon}, {ref.lat}) on level {ref.level}"
        )
    return best[1], best[2]


def _find_endpoint_building(graphs: dict[str, BuildingGraph], ref: str) -> list[str]:
    found = []
    for building_id in sorted(graphs):
        graph = graphs[building_id]
        if ref in graph.places:
            found.append(building_id)
            continue
        lowered = ref.lower()
        if any((r.name or "").lower().startswith(lowered) for r in graph.rooms.values()):
            found.append(building_id)
    return found


def create_app(config: ServiceConfig) -> FastAPI:
    graphs = load_graphs(config.graph_paths)
    default_params = CostParams(
        turn_penalty_m=config.turn_penalty_m if config.turn_penalty_m is not None else CostParams().turn_penalty_m
    )

    app = FastAPI(title="roomroute", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status_code, content={"error": exc.code, "detail": exc.detail}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "invalid_request", "detail": str(exc.errors())}
        )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", buildings=len(graphs))

    @app.get("/buildings", response_model=list[BuildingSummary])
    def buildings():
        out = []
        for building_id in sorted(graphs):
            graph = graphs[building_id]
            info = graph.buildings[0]
            out.append(
                BuildingSummary(
                    id=info.id,
                    name=info.name,
                    levels=list(info.levels),
                    places=len(graph.places),
                    segments=len(graph.segments),
                    rooms=len(graph.rooms),
                )
            )
        return out

    @app.get("/buildings/{building_id}/levels", response_model=list[int])
    def building_levels(building_id: str):
        graph = _building_or_404(graphs, building_id)
        return list(graph.buildings[0].levels)

    @app.get("/buildings/{building_id}/levels/{level}/plan")
    def building_plan(building_id: str, level: int):
        graph = _building_or_404(graphs, building_id)
        return level_plan(graph, building_id, level)

    @app.get("/buildings/{building_id}/places", response_model=list[PlaceSummary])
    def search_places(building_id: str, q: str = ""):
        graph = _building_or_404(graphs, building_id)
        needle = q.strip().lower()
        out = []
        for pid in sorted(graph.places):
            place = graph.places[pid]
            if place.kind not in ROUTABLE_KINDS:
                continue
            haystack = f"{place.id} {place.name or ''}".lower()
            if needle and needle not in haystack:
                continue
            out.append(
                PlaceSummary(
                    id=place.id,
                    name=place.name,
                    kind=place.kind.value,
                    level=place.level,
                    position=[place.position[0], place.position[1]],
                )
            )
        return out

    @app.get("/buildings/{building_id}/audit", response_model=AuditResponse)
    def building_audit(building_id: str, profile: str | None = None):
        graph = _building_or_404(graphs, building_id)
        parsed = None
        if profile:
            try:
                names = json.loads(profile)
                if not isinstance(names, dict):
                    raise InvalidInputError("profile must be a JSON object")
                parsed = Profile.from_names(names)
            except (json.JSONDecodeError, InvalidInputError) as exc:
                raise ServiceError(400, "invalid_profile", str(exc)) from exc
        report = audit_connectivity(graph, parsed)
        return AuditResponse(**report.to_json_dict())

    @app.post("/route", response_model=RoutePlanResponse, response_model_exclude_none=False)
    def route(request: RouteRequest):
        try:
            profile = Profile.from_names(request.profile)
        except InvalidInputError as exc:
            raise ServiceError(400, "invalid_profile", str(exc)) from exc
        params = default_params
        if request.turn_penalty_m is not None:
            try:
                params = CostParams(turn_penalty_m=request.turn_penalty_m)
            except InvalidInputError as exc:
                raise ServiceError(400, "invalid_turn_penalty", str(exc)) from exc

        scope = graphs
        if request.building_id is not None:
            scope = {request.building_id: _building_or_404(graphs, request.building_id)}

        if isinstance(request.from_ref, CoordinateRef):
            from_building, from_ref = _snap(scope, request.from_ref, config.snap_radius_m)
        else:
            from_building, from_ref = None, request.from_ref
        if isinstance(request.to_ref, CoordinateRef):
            to_building, to_ref = _snap(scope, request.to_ref, config.snap_radius_m)
        else:
            to_building, to_ref = None, request.to_ref

        candidates = set()
        for ref, fixed in ((from_ref, from_building), (to_ref, to_building)):
            if fixed is not None:
                candidates.add(fixed)
                continue
            hits = _find_endpoint_building(scope, ref)
            if not hits:
                raise ServiceError(404, "unknown_place", f"no place or room named {ref!r}")
            if len(hits) > 1:
                raise ServiceError(
                    409, "ambiguous_place", f"{ref!r} exists in buildings: {', '.join(hits)}"
                )
            candidates.add(hits[0])
        if len(candidates) != 1:
            raise ServiceError(
                400, "cross_building_route", f"endpoints live in different buildings: {sorted(candidates)}"
            )
        graph = scope[candidates.pop()]

        if from_ref == to_ref:
            raise ServiceError(400, "degenerate_route", "origin and destination are identical")
        try:
            plan = plan_routes(graph, from_ref, to_ref, profile, params)
        except AmbiguousRoomError as exc:
            raise ServiceError(409, "ambiguous_room", str(exc)) from exc
        except InvalidInputError as exc:
            raise ServiceError(404, "unknown_place", str(exc)) from exc
        return RoutePlanResponse(**route_plan_document(graph, plan))

    if config.static_dir is not None:
        app.mount("/ui", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    """Blocking entrypoint: build the app and run it with uvicorn."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
