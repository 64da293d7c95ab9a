"""Tests for target selection, the engagement FSM, and LED mapping."""

import numpy as np
import pytest

from intone.behavior import (
    EngagementFsm,
    EventKind,
    FsmConfig,
    Phase,
    led_for,
    select_target,
)
from intone.tracking import SmoothedSignal


def sig(uid, p, dp_dt=0.0, done=False, seq=0, t_last=0.0):
    return SmoothedSignal(
        user_id=uid, p=p, dp_dt=dp_dt, t_last=t_last, done=done, raw_p=p, created_seq=seq
    )


class TestSelectTarget:
    def test_argmax(self):
        signals = {"a": sig("a", 0.9), "b": sig("b", 0.4, seq=1)}
        assert select_target(signals) == "a"

    def test_done_users_skipped(self):
        signals = {"a": sig("a", 0.6, done=True), "b": sig("b", 0.3, seq=1)}
        assert select_target(signals) == "b"

    def test_empty_is_none(self):
        assert select_target({}) is None

    def test_all_done_is_none(self):
        assert select_target({"a": sig("a", 0.9, done=True)}) is None

    def test_tie_breaks_to_earliest_track(self):
        signals = {"late": sig("late", 0.5, seq=5), "early": sig("early", 0.5, seq=2)}
        assert select_target(signals) == "early"


class TestLedFor:
    def test_idle_is_dim_white(self):
        fsm = EngagementFsm()
        cmd = led_for(fsm.state, 0.0, FsmConfig())
        assert cmd.rgb == (1.0, 1.0, 1.0)
        assert cmd.intensity == 0.15

    def test_low_p_is_blue(self):
        state = EngagementFsm().state
        state = type(state)(phase=Phase.AWARE)
        cmd = led_for(state, 0.0, FsmConfig())
        assert cmd.rgb == (0.0, 0.0, 1.0)

    def test_high_p_is_yellow_full(self):
        state = type(EngagementFsm().state)(phase=Phase.ENGAGED, target="u")
        cmd = led_for(state, 1.0, FsmConfig())
        assert cmd.rgb == (1.0, 1.0, 0.0)
        assert cmd.intensity == 1.0

    def test_midpoint_interpolation(self):
        # Channel-wise lerp between (0,0,1) and (1,1,0) at p=0.5.
        state = type(EngagementFsm().state)(phase=Phase.AWARE)
        cmd = led_for(state, 0.5, FsmConfig())
        assert cmd.rgb == pytest.approx((0.5, 0.5, 0.5))

    def test_intensity_floors_at_idle(self):
        state = type(EngagementFsm().state)(phase=Phase.AWARE)
        cmd = led_for(state, 0.05, FsmConfig(idle_intensity=0.15))
        assert cmd.intensity == 0.15

    def test_hue_monotone_in_p(self):
        state = type(EngagementFsm().state)(phase=Phase.AWARE)
        cfg = FsmConfig()
        grid = np.linspace(0, 1, 500)
        reds = [led_for(state, p, cfg).rgb[0] for p in grid]
        blues = [led_for(state, p, cfg).rgb[2] for p in grid]
        assert all(b >= a for a, b in zip(reds, reds[1:]))
        assert all(b <= a for a, b in zip(blues, blues[1:]))


class TestFsmConfig:
    def test_threshold_order_enforced(self):
        with pytest.raises(ValueError, match="p_off < p_on"):
            FsmConfig(p_on=0.7, p_off=0.8)

    def test_hold_positive(self):
        with pytest.raises(ValueError):
            FsmConfig(release_hold_s=0.0)


def run_fsm(trace, fsm=None, fps=30.0):
    """Feed a single-user p trace; returns (events, phases)."""
    fsm = fsm or EngagementFsm()
    events = []
    phases = []
    for k, p in enumerate(trace):
        t = k / fps
        signals = {"u": sig("u", p)} if p is not None else {}
        _, evs, _ = fsm.step(signals, t)
        events.extend(evs)
        phases.append(fsm.state.phase)
    return events, phases


class TestEngagementFsm:
    def test_rise_through_threshold_engages(self):
        events, phases = run_fsm([0.80, 0.86])
        assert [e.kind for e in events] == [EventKind.ORIENT_TO_USER, EventKind.EXTEND_ARM]
        assert phases[-1] is Phase.ENGAGED

    def test_exactly_at_threshold_does_not_engage(self):
        events, phases = run_fsm([0.85, 0.85])
        assert events == []
        assert phases[-1] is Phase.AWARE

    def test_short_dip_does_not_retract(self):
        # 0.5 s below the release threshold, then recovery: still engaged.
        trace = [0.9] * 10 + [0.74] * 15 + [0.9] * 10
        events, phases = run_fsm(trace)
        assert [e.kind for e in events] == [EventKind.ORIENT_TO_USER, EventKind.EXTEND_ARM]
        assert phases[-1] is Phase.ENGAGED

    def test_long_drop_retracts_after_hold(self):
        trace = [0.9] * 10 + [0.70] * 40
        events, _ = run_fsm(trace)
        kinds = [e.kind for e in events]
        assert kinds == [
            EventKind.ORIENT_TO_USER,
            EventKind.EXTEND_ARM,
            EventKind.RETRACT_ARM,
            EventKind.ORIENT_NEUTRAL,
        ]
        retract = next(e for e in events if e.kind is EventKind.RETRACT_ARM)
        first_below = 10 / 30.0
        assert retract.t - first_below >= 1.0

    def test_dead_band_keeps_aware(self):
        events, phases = run_fsm([0.80] * 30)
        assert events == []
        assert set(phases) == {Phase.AWARE}

    def test_done_target_releases_immediately(self):
        fsm = EngagementFsm()
        fsm.step({"u": sig("u", 0.9)}, 0.0)
        assert fsm.state.phase is Phase.ENGAGED
        _, evs, _ = fsm.step({"u": sig("u", 0.9, done=True)}, 1 / 30)
        assert [e.kind for e in evs] == [EventKind.RETRACT_ARM, EventKind.ORIENT_NEUTRAL]
        assert fsm.state.phase is Phase.NO_USERS

    def test_track_loss_releases_immediately(self):
        fsm = EngagementFsm()
        fsm.step({"u": sig("u", 0.9)}, 0.0)
        _, evs, _ = fsm.step({}, 1 / 30)
        assert [e.kind for e in evs] == [EventKind.RETRACT_ARM, EventKind.ORIENT_NEUTRAL]
        assert fsm.state.phase is Phase.NO_USERS

    def test_engaged_target_frozen_against_higher_p(self):
        fsm = EngagementFsm()
        fsm.step({"a": sig("a", 0.9)}, 0.0)
        assert fsm.state.target == "a"
        fsm.step({"a": sig("a", 0.86), "b": sig("b", 0.99, seq=1)}, 1 / 30)
        assert fsm.state.target == "a"

    def test_reengagement_waits_one_tick_after_release(self):
        fsm = EngagementFsm()
        fsm.step({"a": sig("a", 0.9)}, 0.0)
        # a disappears while b is already hot: retraction now, extension next tick
        _, evs, _ = fsm.step({"b": sig("b", 0.95, seq=1)}, 1 / 30)
        assert [e.kind for e in evs] == [EventKind.RETRACT_ARM, EventKind.ORIENT_NEUTRAL]
        assert fsm.state.phase is Phase.AWARE
        _, evs, _ = fsm.step({"b": sig("b", 0.95, seq=1)}, 2 / 30)
        assert [e.kind for e in evs] == [EventKind.ORIENT_TO_USER, EventKind.EXTEND_ARM]
        assert fsm.state.target == "b"

    def test_below_since_only_set_while_below(self):
        fsm = EngagementFsm()
        fsm.step({"u": sig("u", 0.9)}, 0.0)
        fsm.step({"u": sig("u", 0.74)}, 1 / 30)
        assert fsm.state.below_since == pytest.approx(1 / 30)
        fsm.step({"u": sig("u", 0.76)}, 2 / 30)
        assert fsm.state.below_since is None

    def test_time_regression_rejected(self):
        fsm = EngagementFsm()
        fsm.step({}, 1.0)
        with pytest.raises(ValueError, match="clock regression"):
            fsm.step({}, 0.5)

    def test_no_users_phase_and_recovery(self):
        events, phases = run_fsm([None, 0.3, None])
        assert events == []
        assert phases == [Phase.NO_USERS, Phase.AWARE, Phase.NO_USERS]


def naive_reference_events(ps, fps, p_on=0.85, p_off=0.75, hold=1.0):
    """Deliberately plain tick-by-tick interpreter over a single-user trace."""
    events = []
    engaged = False
    below_since = None
    for k in range(len(ps)):
        t = k / fps
        p = ps[k]
        if not engaged:
            if p > p_on:
                engaged = True
                below_since = None
                events.append(("extend_arm", t))
        else:
            if p < p_off:
                if below_since is None:
                    below_since = t
                if t - below_since >= hold:
                    engaged = False
                    below_since = None
                    events.append(("retract_arm", t))
            else:
                below_since = None
    return events


class TestAgainstNaiveReference:
    def test_random_traces_match_event_for_event(self):
        rng = np.random.default_rng(20240811)
        fps = 30.0
        for _ in range(50):
            steps = rng.normal(0.0, 0.05, size=600)
            ps = np.clip(np.cumsum(steps) + rng.uniform(0.3, 0.9), 0.0, 1.0)
            expected = naive_reference_events(ps, fps)
            events, _ = run_fsm(ps.tolist(), fps=fps)
            arm = [
                (e.kind.value, e.t)
                for e in events
                if e.kind in (EventKind.EXTEND_ARM, EventKind.RETRACT_ARM)
            ]
            assert arm == expected

    def test_alternation_property(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            ps = np.clip(
                np.cumsum(rng.normal(0, 0.08, size=900)) + 0.8, 0.0, 1.0
            )
            events, _ = run_fsm(ps.tolist())
            arm = [e.kind for e in events if e.kind in (EventKind.EXTEND_ARM, EventKind.RETRACT_ARM)]
            for i, kind in enumerate(arm):
                expected = EventKind.EXTEND_ARM if i % 2 == 0 else EventKind.RETRACT_ARM
                assert kind is expected
