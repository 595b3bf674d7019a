"""Personalized shortest paths.

Edge weights start as metric lengths and are reshaped by the user's profile:
a positively rated characteristic divides the weight by the level's factor, a
negatively rated one multiplies it. The two constraint levels additionally act
as hard filters. Path cost adds a fixed surcharge per intermediate node to
model direction changes.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import (
    VERTICAL_TRANSITION,
    BuildingGraph,
    Characteristic,
    InvalidInputError,
    PreferenceLevel,
    effective_characteristics,
)

DEFAULT_TURN_PENALTY_M = 2.0


@dataclass(frozen=True)
class Profile:
    """Per-characteristic preference levels; anything unset is neutral."""

    settings: Mapping[Characteristic, PreferenceLevel] = field(default_factory=dict)

    def level_for(self, characteristic: Characteristic) -> PreferenceLevel:
        return self.settings.get(characteristic, PreferenceLevel.NEUTRAL)

    def is_neutral(self) -> bool:
        return all(level is PreferenceLevel.NEUTRAL for level in self.settings.values())

    @classmethod
    def from_names(cls, names: Mapping[str, str]) -> "Profile":
        settings = {}
        for char_name, level_name in names.items():
            settings[Characteristic.from_name(char_name)] = PreferenceLevel.from_name(level_name)
        return cls(settings)

    def to_names(self) -> dict[str, str]:
        return {
            c.value: level.value
            for c, level in sorted(self.settings.items(), key=lambda kv: kv[0].value)
            if level is not PreferenceLevel.NEUTRAL
        }


NEUTRAL_PROFILE = Profile()


@dataclass(frozen=True)
class CostParams:
    turn_penalty_m: float = DEFAULT_TURN_PENALTY_M

    def __post_init__(self):
        if not (math.isfinite(self.turn_penalty_m) and self.turn_penalty_m >= 0):
            raise InvalidInputError(f"turn_penalty_m must be finite and >= 0, got {self.turn_penalty_m!r}")


@dataclass(frozen=True)
class Violation:
    segment_id: str
    characteristic: Characteristic
    level: PreferenceLevel


@dataclass(frozen=True)
class Route:
    place_ids: tuple[str, ...]
    segment_ids: tuple[str, ...]
    distance_m: float
    cost: float
    levels_visited: tuple[int, ...]
    violations: tuple[Violation, ...] = ()


@dataclass(frozen=True)
class RoutePlan:
    status: str  # both | single | no_compliant_route | unreachable
    adapted: Route | None = None
    fastest: Route | None = None


def transform_weight(length_m: float, chars: Iterable[Characteristic], profile: Profile) -> float:
    """Reshape a raw edge length by the profile's factors.

    Characteristics are applied in sorted name order so repeated calls produce
    bit-identical floats.
    """
    w = length_m
    for c in sorted(chars, key=lambda c: c.value):
        level = profile.level_for(c)
        if level.polarity > 0:
            w /= level.factor
        elif level.polarity < 0:
            w *= level.factor
    return w


@dataclass(frozen=True)
class ProfiledView:
    """A graph filtered and re-weighted for one profile."""

    graph: BuildingGraph
    adjacency: dict[str, tuple[tuple[str, str, float], ...]]  # place -> ((segment, neighbor, weight), ...)
    removed_segment_ids: frozenset[str]

    def weight_of(self, segment_id: str) -> float | None:
        seg = self.graph.segments[segment_id]
        a, _ = seg.endpoints
        for sid, _, w in self.adjacency.get(a, ()):
            if sid == segment_id:
                return w
        return None


def apply_profile(graph: BuildingGraph, profile: Profile) -> ProfiledView:
    """Drop segments the profile forbids and transform the weights of the rest.

    A segment is dropped when it carries a characteristic rated impossible, or
    when it is a vertical transition that lacks a vertical characteristic rated
    indispensable (an elevator-only user must never be offered the stairs).
    """
    required_vertical = {
        c
        for c, level in profile.settings.items()
        if level is PreferenceLevel.INDISPENSABLE and c in VERTICAL_TRANSITION
    }

    adjacency: dict[str, list[tuple[str, str, float]]] = {pid: [] for pid in graph.places}
    removed: set[str] = set()
    for seg in graph.segments.values():
        chars = effective_characteristics(graph, seg.id)
        if any(profile.level_for(c) is PreferenceLevel.IMPOSSIBLE for c in chars):
            removed.add(seg.id)
            continue
        if len(seg.level_span) >= 2 and required_vertical and not required_vertical <= chars:
            removed.add(seg.id)
            continue
        w = transform_weight(seg.length_m, chars, profile)
        a, b = seg.endpoints
        adjacency[a].append((seg.id, b, w))
        adjacency[b].append((seg.id, a, w))

    return ProfiledView(
        graph=graph,
        adjacency={pid: tuple(sorted(adjacency[pid])) for pid in graph.places},
        removed_segment_ids=frozenset(removed),
    )


def _as_id_set(graph: BuildingGraph, endpoint: str | Iterable[str], label: str) -> frozenset[str]:
    ids = frozenset([endpoint]) if isinstance(endpoint, str) else frozenset(endpoint)
    if not ids:
        raise InvalidInputError(f"{label} resolves to no places")
    for pid in ids:
        if pid not in graph.places:
            raise InvalidInputError(f"unknown place: {pid!r}")
    return ids


def _route_from_path(
    graph: BuildingGraph, place_ids: tuple[str, ...], segment_ids: tuple[str, ...], cost: float
) -> Route:
    distance = sum(graph.segments[sid].length_m for sid in segment_ids)
    levels: list[int] = []
    for pid in place_ids:
        level = graph.places[pid].level
        if not levels or levels[-1] != level:
            levels.append(level)
    return Route(
        place_ids=place_ids,
        segment_ids=segment_ids,
        distance_m=distance,
        cost=cost,
        levels_visited=tuple(levels),
    )


def shortest_path(
    view: ProfiledView,
    source: str | Iterable[str],
    target: str | Iterable[str],
    params: CostParams = CostParams(),
) -> Route | None:
    """Minimum-cost path between two places or virtual place sets.

    Cost is the sum of view weights plus ``turn_penalty_m`` per intermediate
    node. Virtual sets (multi-door rooms) enter and exit with zero weight and
    contribute no node penalty at the boundary. Among cost-equal optima the
    lexicographically smallest place-id sequence wins; returns None when the
    target cannot be reached.
    """
    graph = view.graph
    sources = _as_id_set(graph, source, "source")
    targets = _as_id_set(graph, target, "target")

    # Heap entries order by (cost, place path, segment path): the first time a
    # target pops it carries the minimum cost and, within that cost, the
    # lexicographically smallest id sequence.
    heap: list[tuple[float, tuple[str, ...], tuple[str, ...]]] = []
    for s in sorted(sources):
        heapq.heappush(heap, (0.0, (s,), ()))
    best: dict[str, float] = {s: 0.0 for s in sources}
    settled: set[str] = set()

    while heap:
        cost, places, segs = heapq.heappop(heap)
        u = places[-1]
        if u in settled:
            continue
        settled.add(u)
        if u in targets:
            return _route_from_path(graph, places, segs, cost)
        step_penalty = params.turn_penalty_m if len(places) > 1 else 0.0
        for seg_id, v, w in view.adjacency.get(u, ()):
            if v in settled:
                continue
            c = cost + w + step_penalty
            known = best.get(v)
            if known is None or c <= known:
                best[v] = c if known is None else min(known, c)
                heapq.heappush(heap, (c, places + (v,), segs + (seg_id,)))
    return None


def route_violations(graph: BuildingGraph, route: Route, profile: Profile) -> tuple[Violation, ...]:
    """Constraint breaches a route commits under a profile.

    Traversing any characteristic rated impossible is a breach, as is using a
    vertical transition that lacks a characteristic rated indispensable.
    """
    required_vertical = sorted(
        (
            c
            for c, level in profile.settings.items()
            if level is PreferenceLevel.INDISPENSABLE and c in VERTICAL_TRANSITION
        ),
        key=lambda c: c.value,
    )
    out: list[Violation] = []
    for sid in route.segment_ids:
        chars = effective_characteristics(graph, sid)
        for c in sorted(chars, key=lambda c: c.value):
            if profile.level_for(c) is PreferenceLevel.IMPOSSIBLE:
                out.append(Violation(sid, c, PreferenceLevel.IMPOSSIBLE))
        if len(graph.segments[sid].level_span) >= 2:
            for c in required_vertical:
                if c not in chars:
                    out.append(Violation(sid, c, PreferenceLevel.INDISPENSABLE))
    return tuple(out)


@dataclass(frozen=True)
class Endpoint:
    """A resolved trip endpoint: the display place plus the graph places to route through."""

    ref: str
    place_ids: frozenset[str]


class AmbiguousRoomError(InvalidInputError):
    def __init__(self, query: str, candidates: list[str]):
        super().__init__(f"room name {query!r} is ambiguous: {', '.join(candidates)}")
        self.query = query
        self.candidates = candidates


def resolve_endpoint(graph: BuildingGraph, ref: str) -> Endpoint:
    """Resolve a place id or room name to the place set routing should use.

    Rooms route through their door anchors. Names match exactly first, then by
    unique case-insensitive prefix; an ambiguous prefix raises
    AmbiguousRoomError, anything else unknown raises InvalidInputError.
    """
    place = graph.places.get(ref)
    if place is not None:
        room = graph.rooms.get(ref)
        if room is not None:
            return Endpoint(ref, frozenset(room.anchor_place_ids))
        return Endpoint(ref, frozenset([ref]))

    named = [r for r in graph.rooms.values() if r.name == ref]
    if not named:
        lowered = ref.lower()
        named = [r for r in graph.rooms.values() if (r.name or "").lower().startswith(lowered)]
    if len(named) == 1:
        room = named[0]
        return Endpoint(room.room_place_id, frozenset(room.anchor_place_ids))
    if len(named) > 1:
        raise AmbiguousRoomError(ref, sorted(r.name or r.id for r in named))
    raise InvalidInputError(f"unknown place: {ref!r}")


def plan_routes(
    graph: BuildingGraph,
    from_ref: str,
    to_ref: str,
    profile: Profile = NEUTRAL_PROFILE,
    params: CostParams = CostParams(),
) -> RoutePlan:
    """Compute the adapted itinerary and, when it differs, the raw fastest one.

    The fastest route is withheld when it is identical to the adapted one or
    when it breaches a hard constraint while an adapted alternative exists; if
    only the fastest exists it is returned flagged so the user can see what
    rules it breaks.
    """
    if from_ref == to_ref:
        raise InvalidInputError(f"origin and destination are identical: {from_ref!r}")
    src = resolve_endpoint(graph, from_ref)
    dst = resolve_endpoint(graph, to_ref)

    fastest = shortest_path(apply_profile(graph, NEUTRAL_PROFILE), src.place_ids, dst.place_ids, params)
    adapted = shortest_path(apply_profile(graph, profile), src.place_ids, dst.place_ids, params)

    if fastest is not None:
        fastest = Route(
            place_ids=fastest.place_ids,
            segment_ids=fastest.segment_ids,
            distance_m=fastest.distance_m,
            cost=fastest.cost,
            levels_visited=fastest.levels_visited,
            violations=route_violations(graph, fastest, profile),
        )

    if adapted is not None and fastest is not None:
        if adapted.segment_ids == fastest.segment_ids:
            return RoutePlan(status="single", adapted=adapted)
        if fastest.violations:
            return RoutePlan(status="single", adapted=adapted)
        return RoutePlan(status="both", adapted=adapted, fastest=fastest)
    if adapted is not None:  # unreachable: filtering only removes edges
        return RoutePlan(status="single", adapted=adapted)
    if fastest is not None:
        return RoutePlan(status="no_compliant_route", fastest=fastest)
    return RoutePlan(status="unreachable")
