"""Personalized indoor/outdoor route planning for multi-level buildings."""

from .audit import AuditReport, audit_connectivity
from .model import (
    BuildingGraph,
    Characteristic,
    InvalidInputError,
    Place,
    PlaceKind,
    PreferenceLevel,
    Segment,
    StructuralError,
    build_graph,
    effective_characteristics,
    geodesic_length,
)
from .osm import IngestReport, build_from_osm, parse_levels, parse_osm
from .routing import (
    CostParams,
    Profile,
    Route,
    RoutePlan,
    apply_profile,
    plan_routes,
    shortest_path,
    transform_weight,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "BuildingGraph",
    "Characteristic",
    "CostParams",
    "IngestReport",
    "InvalidInputError",
    "Place",
    "PlaceKind",
    "PreferenceLevel",
    "Profile",
    "Route",
    "RoutePlan",
    "Segment",
    "StructuralError",
    "apply_profile",
    "audit_connectivity",
    "build_from_osm",
    "build_graph",
    "effective_characteristics",
    "geodesic_length",
    "parse_levels",
    "parse_osm",
    "plan_routes",
    "shortest_path",
    "transform_weight",
    "__version__",
]
