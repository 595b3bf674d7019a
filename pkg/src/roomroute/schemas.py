"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class HealthResponse(BaseModel):
    status: str
    buildings: int


class BuildingSummary(BaseModel):
    id: str
    name: str | None
    levels: list[int]
    places: int
    segments: int
    rooms: int


class PlaceSummary(BaseModel):
    id: str
    name: str | None
    kind: str
    level: int
    position: list[float]


class CoordinateRef(BaseModel):
    lon: float
    lat: float
    level: int


class RouteRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    from_ref: str | CoordinateRef = Field(alias="from")
    to_ref: str | CoordinateRef = Field(alias="to")
    profile: dict[str, str] = Field(default_factory=dict)
    turn_penalty_m: float | None = None
    building_id: str | None = None


class ViolationDoc(BaseModel):
    segment_id: str
    characteristic: str
    level: str


class RouteDoc(BaseModel):
    place_ids: list[str]
    segment_ids: list[str]
    distance_m: float
    cost: float
    levels_visited: list[int]
    violations: list[ViolationDoc]
    geometry: dict


class RoutePlanResponse(BaseModel):
    status: str
    adapted: RouteDoc | None = None
    fastest: RouteDoc | None = None


class AuditResponse(BaseModel):
    building_id: str | None
    total_places: int
    unroutable_pairs: int
    unroutable_rate: float
    components: list[list[str]]
    orphans: list[str]
    profile_used: dict[str, str] | None


class ErrorBody(BaseModel):
    error: str
    detail: str
