"""Tests for scenario parsing, the surrogate intention model, and bundles."""

import math

import pytest

from intone.scenario import (
    ActorScript,
    IntentionModelConfig,
    Scenario,
    ScenarioError,
    bundled_scenario,
    in_fov,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_dict,
    synth_intention,
)

MODEL = IntentionModelConfig()


def logistic_oracle(d, alignment, cfg=MODEL):
    # Independent evaluation of the documented formula.
    z = cfg.gain * ((1.0 - d / cfg.d_scale_m) + cfg.facing_weight * alignment)
    return 1.0 / (1.0 + math.exp(-z))


class TestSurrogateModel:
    def test_close_and_facing_is_confident(self):
        p = synth_intention((0.3, 0.0), 180.0, MODEL)
        assert p == pytest.approx(logistic_oracle(0.3, 1.0), abs=1e-12)
        assert p > 0.9

    def test_far_and_averted_is_dismissive(self):
        p = synth_intention((3.0, 0.0), 0.0, MODEL)
        assert p == pytest.approx(logistic_oracle(3.0, -1.0), abs=1e-12)
        assert p < 0.1

    def test_monotone_in_distance_when_facing(self):
        ps = [synth_intention((d, 0.0), 180.0, MODEL) for d in (3.0, 2.0, 1.0, 0.5, 0.2)]
        assert all(b > a for a, b in zip(ps, ps[1:]))

    def test_alignment_uses_facing_direction(self):
        toward = synth_intention((1.0, 1.0), -135.0, MODEL)  # facing the origin
        away = synth_intention((1.0, 1.0), 45.0, MODEL)
        assert toward > away

    def test_fov_wedge(self):
        cfg = IntentionModelConfig(fov_deg=120.0)
        assert in_fov((1.0, 0.0), cfg)
        assert in_fov((1.0, 1.7), cfg)  # ~59.5 degrees
        assert not in_fov((1.0, 1.8), cfg)  # ~60.9 degrees
        assert not in_fov((-1.0, 0.0), cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError, match="fov_deg"):
            IntentionModelConfig(fov_deg=270.0)


class TestActorScript:
    def test_trajectory_interpolation(self):
        actor = ActorScript(
            actor_id="a",
            mode="trajectory",
            waypoints=[(0.0, 0.0, 0.0, 0.0), (2.0, 4.0, -2.0, 90.0)],
        )
        x, y, facing = actor.pose_at(1.0)
        assert (x, y, facing) == pytest.approx((2.0, -1.0, 45.0))

    def test_clamps_outside_span(self):
        actor = ActorScript(
            actor_id="a",
            mode="trajectory",
            waypoints=[(1.0, 1.0, 0.0, 0.0), (2.0, 3.0, 0.0, 0.0)],
        )
        assert actor.pose_at(0.0)[0] == 1.0
        assert actor.pose_at(99.0)[0] == 3.0

    def test_direct_p_interpolation(self):
        actor = ActorScript(actor_id="a", mode="direct_p", waypoints=[(0.0, 0.0), (1.0, 1.0)])
        assert actor.p_at(0.25) == pytest.approx(0.25)

    def test_mode_mismatch_raises(self):
        actor = ActorScript(actor_id="a", mode="direct_p", waypoints=[(0.0, 0.5)])
        with pytest.raises(ValueError):
            actor.pose_at(0.0)

    def test_active_window(self):
        actor = ActorScript(
            actor_id="a",
            mode="direct_p",
            waypoints=[(0.0, 0.5)],
            enters_at=1.0,
            leaves_at=2.0,
        )
        assert not actor.active_at(0.99)
        assert actor.active_at(1.0)
        assert actor.active_at(2.0)
        assert not actor.active_at(2.01)


def minimal_doc(**overrides):
    doc = {
        "version": 1,
        "duration_s": 5.0,
        "actors": [
            {
                "id": "a",
                "mode": "direct_p",
                "waypoints": [{"t": 0.0, "p": 0.5}],
            }
        ],
    }
    doc.update(overrides)
    return doc


class TestParseScenario:
    def test_minimal_document(self):
        sc = parse_scenario(minimal_doc())
        assert sc.duration_s == 5.0
        assert sc.frame_rate == 30.0
        assert len(sc.actors) == 1

    def test_unknown_version_rejected(self):
        with pytest.raises(ScenarioError, match="version"):
            parse_scenario(minimal_doc(version=99))

    def test_missing_duration_names_field(self):
        doc = minimal_doc()
        del doc["duration_s"]
        with pytest.raises(ScenarioError, match="duration_s"):
            parse_scenario(doc)

    def test_bad_waypoint_field_path(self):
        doc = minimal_doc()
        doc["actors"][0]["waypoints"] = [{"t": 0.0, "p": 1.5}]
        with pytest.raises(ScenarioError, match=r"actors\[0\].waypoints\[0\].p"):
            parse_scenario(doc)

    def test_non_increasing_waypoints_rejected(self):
        doc = minimal_doc()
        doc["actors"][0]["waypoints"] = [{"t": 1.0, "p": 0.5}, {"t": 1.0, "p": 0.6}]
        with pytest.raises(ScenarioError, match="strictly increasing"):
            parse_scenario(doc)

    def test_event_for_unknown_actor_rejected(self):
        doc = minimal_doc(events=[{"t": 1.0, "kind": "treat_taken", "actor": "ghost"}])
        with pytest.raises(ScenarioError, match="unknown actor"):
            parse_scenario(doc)

    def test_unsorted_events_rejected(self):
        doc = minimal_doc(
            events=[
                {"t": 2.0, "kind": "treat_taken", "actor": "a"},
                {"t": 1.0, "kind": "treat_taken", "actor": "a"},
            ]
        )
        with pytest.raises(ScenarioError, match="sorted"):
            parse_scenario(doc)

    def test_multiple_problems_all_reported(self):
        doc = minimal_doc(duration_s=-1.0, frame_rate=0)
        with pytest.raises(ScenarioError) as err:
            parse_scenario(doc)
        assert len(err.value.problems) >= 2

    def test_duplicate_actor_ids_rejected(self):
        doc = minimal_doc()
        doc["actors"].append(dict(doc["actors"][0]))
        with pytest.raises(ScenarioError, match="duplicate"):
            parse_scenario(doc)

    def test_round_trip_through_dict(self, tmp_path):
        sc = bundled_scenario("fig5_approach_leave")
        path = str(tmp_path / "copy.yaml")
        save_scenario(sc, path)
        again = load_scenario(path)
        assert scenario_to_dict(again) == scenario_to_dict(sc)


class TestBundledScenarios:
    @pytest.mark.parametrize(
        "name", ["fig5_approach_leave", "shy_user", "two_actors", "walkthrough"]
    )
    def test_all_bundles_load(self, name):
        sc = bundled_scenario(name)
        assert isinstance(sc, Scenario)
        assert sc.duration_s > 0

    def test_unknown_bundle_lists_available(self):
        with pytest.raises(ScenarioError, match="available"):
            bundled_scenario("nope")

    def test_fig5_has_phase_markers(self):
        sc = bundled_scenario("fig5_approach_leave")
        for key in ("approach_end", "offer_start", "offer_end", "leave_onset"):
            assert key in sc.markers
