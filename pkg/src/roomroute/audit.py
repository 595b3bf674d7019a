"""Cartography validation: how many place pairs cannot be routed at all.

A non-zero rate means at least one room, door or entrance is missing a
connection and the map data needs fixing. Connected components are enough to
decide pair reachability, so no per-pair search is run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ROUTABLE_KINDS, BuildingGraph
from .routing import NEUTRAL_PROFILE, Profile, apply_profile


@dataclass(frozen=True)
class AuditReport:
    building_id: str | None
    total_places: int
    unroutable_pairs: int
    unroutable_rate: float
    components: tuple[tuple[str, ...], ...]
    orphans: tuple[str, ...]
    profile_used: dict[str, str] | None

    def to_json_dict(self) -> dict:
        return {
            "building_id": self.building_id,
            "total_places": self.total_places,
            "unroutable_pairs": self.unroutable_pairs,
            "unroutable_rate": self.unroutable_rate,
            "components": [list(c) for c in self.components],
            "orphans": list(self.orphans),
            "profile_used": self.profile_used,
        }


def _components(adjacency: dict[str, tuple[tuple[str, str, float], ...]]) -> list[set[str]]:
    seen: set[str] = set()
    out: list[set[str]] = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        component = {start}
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            for _, v, _ in adjacency.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    component.add(v)
                    stack.append(v)
        out.append(component)
    return out


def audit_connectivity(graph: BuildingGraph, profile: Profile | None = None) -> AuditReport:
    """Count unordered routable-place pairs with no path between them.

    With a profile the check runs on the filtered view, so it reports what that
    user could actually reach. Components are ordered largest first, then by
    smallest member id; orphans are every place outside the largest component.
    """
    view = apply_profile(graph, profile if profile is not None else NEUTRAL_PROFILE)
    components = _components(view.adjacency)
    components.sort(key=lambda c: (-len(c), min(c)))

    routable = {p.id for p in graph.places.values() if p.kind in ROUTABLE_KINDS}
    total = len(routable)
    total_pairs = total * (total - 1) // 2
    connected_pairs = 0
    for component in components:
        r = len(component & routable)
        connected_pairs += r * (r - 1) // 2
    unroutable = total_pairs - connected_pairs

    orphans = sorted(pid for component in components[1:] for pid in component)
    building_id = graph.buildings[0].id if graph.buildings else None
    return AuditReport(
        building_id=building_id,
        total_places=total,
        unroutable_pairs=unroutable,
        unroutable_rate=(unroutable / total_pairs) if total_pairs else 0.0,
        components=tuple(tuple(sorted(c)) for c in components),
        orphans=tuple(orphans),
        profile_used=profile.to_names() if profile is not None else None,
    )
