import random

import pytest
from hypothesis import given, strategies as st

from oracles import enumerate_best_path, random_graph_spec, random_profile_names
from roomroute.model import Characteristic, InvalidInputError, PreferenceLevel
from roomroute.routing import (
    AmbiguousRoomError,
    CostParams,
    NEUTRAL_PROFILE,
    Profile,
    apply_profile,
    plan_routes,
    resolve_endpoint,
    route_violations,
    shortest_path,
    transform_weight,
)

from conftest import drop_segments, triangle_graph

ELEVATOR = Characteristic.ELEVATOR
STAIRS = Characteristic.STAIRS


def profile(**names):
    return Profile.from_names(names)


class TestProfile:
    def test_from_names_rejects_unknown_characteristic(self):
        with pytest.raises(InvalidInputError, match="characteristic"):
            profile(escalator="want")

    def test_from_names_rejects_unknown_level(self):
        with pytest.raises(InvalidInputError, match="level"):
            profile(elevator="sometimes")

    def test_missing_settings_are_neutral(self):
        p = profile(elevator="want")
        assert p.level_for(STAIRS) is PreferenceLevel.NEUTRAL
        assert p.level_for(ELEVATOR) is PreferenceLevel.WANT

    def test_round_trip(self):
        names = {"elevator": "impossible", "quiet_place": "want"}
        assert Profile.from_names(names).to_names() == names


class TestTransformWeight:
    def test_factor_table_on_ten_meter_edge(self):
        expected = {
            "indispensable": 0.01,
            "want": 0.1,
            "prefer": 1.0,
            "neutral": 10.0,
            "prefer_not": 100.0,
            "do_not_want": 1000.0,
            "impossible": 10000.0,
        }
        for name, value in expected.items():
            assert transform_weight(10.0, {ELEVATOR}, profile(elevator=name)) == value

    def test_characteristic_absent_from_edge(self):
        assert transform_weight(10.0, {STAIRS}, profile(elevator="impossible")) == 10.0

    def test_factors_compound_across_characteristics(self):
        p = profile(elevator="prefer", quiet_place="prefer_not")
        w = transform_weight(10.0, {ELEVATOR, Characteristic.QUIET_PLACE}, p)
        assert w == pytest.approx(10.0)  # /10 then *10

    def test_factor_sandwich_monotonicity(self):
        positive = ["indispensable", "want", "prefer", "neutral"]
        weights = [transform_weight(10.0, {ELEVATOR}, profile(elevator=n)) for n in positive]
        assert weights == sorted(weights)
        assert len(set(weights)) == len(weights)
        negative = ["neutral", "prefer_not", "do_not_want", "impossible"]
        weights = [transform_weight(10.0, {ELEVATOR}, profile(elevator=n)) for n in negative]
        assert weights == sorted(weights)
        assert len(set(weights)) == len(weights)

    @given(st.floats(0.01, 1e6))
    def test_result_stays_positive_and_finite(self, length):
        p = profile(elevator="impossible", stairs="indispensable")
        w = transform_weight(length, {ELEVATOR, STAIRS}, p)
        assert w > 0
        assert w == pytest.approx(length, rel=1e-12)  # *1000 then /1000


class TestApplyProfile:
    def test_neutral_profile_keeps_lengths(self, small_graph):
        view = apply_profile(small_graph, NEUTRAL_PROFILE)
        assert view.removed_segment_ids == frozenset()
        for seg in small_graph.segments.values():
            assert view.weight_of(seg.id) == seg.length_m

    def test_impossible_removes_segment(self, small_graph):
        view = apply_profile(small_graph, profile(elevator="impossible"))
        assert "lift" in view.removed_segment_ids
        # corridor edges touching the elevator places inherit its characteristic
        assert "cor2" in view.removed_segment_ids
        assert "cor3" in view.removed_segment_ids
        assert "stair" not in view.removed_segment_ids

    def test_indispensable_removes_competing_transitions(self, small_graph):
        view = apply_profile(small_graph, profile(elevator="indispensable"))
        assert "stair" in view.removed_segment_ids
        assert "lift" not in view.removed_segment_ids
        assert view.weight_of("lift") == pytest.approx(4.0 / 1000)

    def test_indispensable_outside_vertical_group_only_weights(self, small_graph):
        view = apply_profile(small_graph, profile(quiet_place="indispensable"))
        assert view.removed_segment_ids == frozenset()


class TestCostParams:
    def test_rejects_negative_and_non_finite(self):
        with pytest.raises(InvalidInputError):
            CostParams(turn_penalty_m=-1.0)
        with pytest.raises(InvalidInputError):
            CostParams(turn_penalty_m=float("nan"))

    def test_default(self):
        assert CostParams().turn_penalty_m == 2.0


class TestShortestPath:
    def test_single_edge(self):
        graph = triangle_graph()
        route = shortest_path(apply_profile(graph, NEUTRAL_PROFILE), "a", "b", CostParams(2.0))
        assert route.place_ids == ("a", "b")
        assert route.cost == pytest.approx(5.0)
        assert route.distance_m == pytest.approx(5.0)

    def test_turn_penalty_prefers_direct_edge(self):
        graph = triangle_graph()
        route = shortest_path(apply_profile(graph, NEUTRAL_PROFILE), "a", "b", CostParams(2.0))
        assert route.place_ids == ("a", "b")  # 5.0 < 2+2+penalty 2

    def test_small_turn_penalty_prefers_detour(self):
        graph = triangle_graph()
        route = shortest_path(apply_profile(graph, NEUTRAL_PROFILE), "a", "b", CostParams(0.5))
        assert route.place_ids == ("a", "c", "b")
        assert route.cost == pytest.approx(4.5)

    def test_disconnected_returns_none(self, small_graph):
        graph = drop_segments(small_graph, {"anc0"})
        view = apply_profile(graph, NEUTRAL_PROFILE)
        assert shortest_path(view, "assoc", "bu") is None

    def test_unknown_place(self, small_graph):
        view = apply_profile(small_graph, NEUTRAL_PROFILE)
        with pytest.raises(InvalidInputError):
            shortest_path(view, "zz", "bu")

    def test_virtual_sets_cost_no_penalty_at_ends(self, small_graph):
        view = apply_profile(small_graph, NEUTRAL_PROFILE)
        via_sets = shortest_path(view, frozenset({"d0"}), frozenset({"d1"}), CostParams(2.0))
        direct = shortest_path(view, "d0", "d1", CostParams(2.0))
        assert via_sets == direct

    def test_matches_enumeration_oracle_on_seeded_graphs(self, subtests=None):
        from conftest import graph_from_spec

        rng = random.Random(2024)
        checked = 0
        for case in range(120):
            places, segments = random_graph_spec(rng)
            graph = graph_from_spec(places, segments)
            prof = Profile.from_names(random_profile_names(rng))
            params = CostParams(turn_penalty_m=rng.choice([0.0, 0.5, 2.0, 7.5]))
            view = apply_profile(graph, prof)
            ids = sorted(graph.places)
            src, dst = rng.sample(ids, 2)
            mine = shortest_path(view, src, dst, params)
            adjacency = {pid: list(view.adjacency[pid]) for pid in view.adjacency}
            oracle = enumerate_best_path(adjacency, {src}, {dst}, params.turn_penalty_m)
            if oracle is None:
                assert mine is None, f"case {case}: oracle found no path but got {mine}"
            else:
                assert mine is not None, f"case {case}: path exists but none returned"
                assert abs(mine.cost - oracle[0]) <= 1e-9, f"case {case}"
                assert list(mine.place_ids) == oracle[1], f"case {case}"
            checked += 1
        assert checked == 120

    def test_deterministic_tie_break_prefers_lexicographic(self):
        from roomroute.model import Place, PlaceKind, Segment, build_graph

        def pl(pid):
            return Place(id=pid, kind=PlaceKind.CORRIDOR_POINT, position=(4.87, 45.78), level=0)

        graph = build_graph(
            [pl("a"), pl("m"), pl("n"), pl("z")],
            [
                Segment("s1", ("a", "m"), 5.0),
                Segment("s2", ("m", "z"), 5.0),
                Segment("s3", ("a", "n"), 5.0),
                Segment("s4", ("n", "z"), 5.0),
            ],
        )
        route = shortest_path(apply_profile(graph, NEUTRAL_PROFILE), "a", "z")
        assert route.place_ids == ("a", "m", "z")


class TestResolveEndpoint:
    def test_place_id(self, small_graph):
        assert resolve_endpoint(small_graph, "d0").place_ids == {"d0"}

    def test_room_id_resolves_to_doors(self, small_graph):
        assert resolve_endpoint(small_graph, "assoc").place_ids == {"d0"}

    def test_room_name_exact(self, small_graph):
        assert resolve_endpoint(small_graph, "BU").place_ids == {"d1"}

    def test_room_name_prefix(self, small_graph):
        assert resolve_endpoint(small_graph, "ass").place_ids == {"d0"}

    def test_prefix_ambiguity_and_exact_precedence(self):
        from conftest import small_graph_parts
        from roomroute.model import GraphMeta, RoomGeometry, build_graph

        places, segments, rooms, buildings = small_graph_parts()
        rooms = dict(rooms)
        rooms["bu2"] = RoomGeometry(
            id="bu2",
            name="BUreau",
            level=1,
            outline=rooms["bu"].outline,
            room_place_id="bu",
            anchor_place_ids=("d1",),
            building_id="hall",
        )
        graph = build_graph(places, segments, rooms=rooms, buildings=buildings, meta=GraphMeta())
        # "B" prefixes both BU and BUreau and is not a place id
        with pytest.raises(AmbiguousRoomError):
            resolve_endpoint(graph, "B")
        # an exact name wins even when it prefixes another room
        assert resolve_endpoint(graph, "BU").place_ids == {"d1"}

    def test_unknown(self, small_graph):
        with pytest.raises(InvalidInputError):
            resolve_endpoint(small_graph, "garage")


class TestPlanRoutes:
    def test_neutral_profile_single(self, hall_graph):
        plan = plan_routes(hall_graph, "Assoc", "BU")
        assert plan.status == "single"
        assert plan.fastest is None
        assert plan.adapted.violations == ()

    def test_alice_both_routes(self, hall_graph):
        plan = plan_routes(hall_graph, "Assoc", "BU", profile(elevator="do_not_want"))
        assert plan.status == "both"
        adapted_segments = {
            sid for sid in plan.adapted.segment_ids
        }
        assert {"w104s0", "w104s1"} <= adapted_segments
        assert "n6t0" not in adapted_segments
        assert "n6t0" in plan.fastest.segment_ids
        assert plan.fastest.distance_m < plan.adapted.distance_m
        assert plan.fastest.violations == ()

    def test_bob_single_via_elevator(self, hall_graph):
        plan = plan_routes(hall_graph, "Assoc", "BU", profile(elevator="indispensable"))
        assert plan.status == "single"
        assert plan.fastest is None
        assert "n6t0" in plan.adapted.segment_ids
        assert not any(sid.startswith("w104") for sid in plan.adapted.segment_ids)

    def test_impossible_withholds_violating_fastest(self, hall_graph):
        plan = plan_routes(hall_graph, "Assoc", "BU", profile(elevator="impossible"))
        assert plan.status == "single"
        assert "n6t0" not in plan.adapted.segment_ids

    def test_no_compliant_route_returns_flagged_fastest(self, hall_graph):
        graph = drop_segments(hall_graph, {"n6t0"})
        plan = plan_routes(graph, "Assoc", "BU", profile(stairs="impossible"))
        assert plan.status == "no_compliant_route"
        assert plan.adapted is None
        flagged = {(v.segment_id, v.characteristic.value, v.level.value) for v in plan.fastest.violations}
        assert ("w104s0", "stairs", "impossible") in flagged
        assert ("w104s1", "stairs", "impossible") in flagged

    def test_unreachable(self, hall_graph):
        graph = drop_segments(hall_graph, {"n6t0", "w104s0"})
        plan = plan_routes(graph, "Assoc", "BU")
        assert plan.status == "unreachable"
        assert plan.adapted is None and plan.fastest is None

    def test_identical_refs_rejected(self, hall_graph):
        with pytest.raises(InvalidInputError):
            plan_routes(hall_graph, "Assoc", "Assoc")

    def test_unknown_endpoint(self, hall_graph):
        with pytest.raises(InvalidInputError):
            plan_routes(hall_graph, "Assoc", "Cafeteria")

    def test_indispensable_violation_reported_on_fastest(self, small_graph):
        # make stairs much faster so the raw optimum conflicts with Bob's need
        from roomroute.model import Segment, build_graph
        from conftest import small_graph_parts

        places, segments, rooms, buildings = small_graph_parts()
        segments = [
            Segment("stair", ("c1", "c4"), 1.0, frozenset({STAIRS}), frozenset({0, 1}))
            if s.id == "stair"
            else s
            for s in segments
        ]
        graph = build_graph(places, segments, rooms=rooms, buildings=buildings)
        plan = plan_routes(graph, "assoc", "bu", profile(elevator="indispensable"))
        assert plan.status == "single"
        assert "lift" in plan.adapted.segment_ids


class TestRoutingProperties:
    def test_identity_profile_equals_fastest_everywhere(self, hall_graph):
        routable = hall_graph.routable_place_ids()
        for src in routable:
            for dst in routable:
                if src == dst:
                    continue
                plan = plan_routes(hall_graph, src, dst)
                assert plan.status == "single", (src, dst)

    def test_adapted_respects_filter(self):
        from conftest import graph_from_spec

        rng = random.Random(99)
        for _ in range(60):
            places, segments = random_graph_spec(rng)
            graph = graph_from_spec(places, segments)
            prof = Profile.from_names(random_profile_names(rng))
            view = apply_profile(graph, prof)
            ids = sorted(graph.places)
            src, dst = rng.sample(ids, 2)
            route = shortest_path(view, src, dst)
            if route is None:
                continue
            assert not set(route.segment_ids) & view.removed_segment_ids
            assert route_violations(graph, route, prof) == ()

    def test_scale_invariance_of_choice(self):
        from conftest import graph_from_spec
        from roomroute.model import Segment

        rng = random.Random(5)
        lam = 3.7
        for _ in range(40):
            places, segments = random_graph_spec(rng)
            graph = graph_from_spec(places, segments)
            scaled = graph_from_spec(
                places,
                [dict(s, length_m=s["length_m"] * lam) for s in segments],
            )
            prof = Profile.from_names(random_profile_names(rng))
            ids = sorted(graph.places)
            src, dst = rng.sample(ids, 2)
            a = shortest_path(apply_profile(graph, prof), src, dst, CostParams(2.0))
            b = shortest_path(apply_profile(scaled, prof), src, dst, CostParams(2.0 * lam))
            assert (a is None) == (b is None)
            if a is not None:
                assert a.place_ids == b.place_ids

    def test_adding_segment_never_increases_cost(self):
        from conftest import graph_from_spec

        rng = random.Random(17)
        for _ in range(40):
            places, segments = random_graph_spec(rng)
            graph = graph_from_spec(places, segments)
            ids = sorted(graph.places)
            src, dst = rng.sample(ids, 2)
            base = shortest_path(apply_profile(graph, NEUTRAL_PROFILE), src, dst)
            a, b = rng.sample(ids, 2)
            extra = {
                "id": "zz-extra",
                "endpoints": (a, b),
                "length_m": round(rng.uniform(1.0, 50.0), 3),
                "characteristics": [],
                "level_span": sorted({graph.places[a].level, graph.places[b].level}),
            }
            if len(extra["level_span"]) > 1:
                extra["characteristics"] = ["stairs"]
            bigger = graph_from_spec(places, segments + [extra])
            after = shortest_path(apply_profile(bigger, NEUTRAL_PROFILE), src, dst)
            if base is not None:
                assert after is not None
                assert after.cost <= base.cost + 1e-9
