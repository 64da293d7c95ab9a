"""Live-mode engine core: steer messages in, frame messages out.

The world (steerable actors) advances one control frame at a time, indexed
by frame number; wall-clock pacing lives in the transport layer, never
here, so a live session is exactly replayable offline. Every applied steer
is logged with the frame at which it took effect, and
`scenario_from_steer_log` converts such a log back into a scenario whose
offline run reproduces the live trace.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .behavior import FsmConfig, Phase
from .config import EngineConfig
from .mapping import MapConfig
from .pipeline import PipelineStepper, SessionTrace, TraceRow
from .scenario import (
    ActorScript,
    Scenario,
    ScenarioEvent,
    in_fov,
    synth_intention,
)
from .synth import AudioBlock

PROTOCOL_SCHEMA_VERSION = 1


class SteerError(ValueError):
    """Steer message rejected; the session itself is unaffected."""


@dataclass
class LiveActor:
    actor_id: str
    x: float
    y: float
    facing_deg: float


class LiveEngine:
    """Single-writer engine state; callers serialize apply_steer/step_frame."""

    def __init__(self, config: EngineConfig, seed: int | None = None):
        self.config = config
        self.stepper = PipelineStepper(config, seed=seed)
        self.frame_rate = config.control_rate_hz
        self.actors: dict[str, LiveActor] = {}
        self.frame_idx = 0
        self.steer_log: list[dict] = []
        self.trace = SessionTrace(
            sample_rate=config.synth.sample_rate, frame_rate=self.frame_rate
        )
        self.blocks: list[AudioBlock] = []
        self.keep_audio = False  # sessions are unbounded; opt in to retain blocks

    # -- steering ---------------------------------------------------------

    def apply_steer(self, msg: dict) -> dict:
        """Validate and apply one steer message; returns the ack payload.

        Raises SteerError on rejection; state is untouched in that case.
        """
        action = msg.get("action")
        if action == "spawn_actor":
            actor_id = self._actor_id(msg)
            if actor_id in self.actors:
                raise SteerError(f"actor {actor_id!r} already exists")
            pose = self._pose(msg)
            self.actors[actor_id] = LiveActor(actor_id, *pose)
        elif action == "move_actor":
            actor_id = self._actor_id(msg)
            actor = self.actors.get(actor_id)
            if actor is None:
                raise SteerError(f"unknown actor {actor_id!r}")
            actor.x, actor.y, actor.facing_deg = self._pose(msg)
        elif action == "remove_actor":
            actor_id = self._actor_id(msg)
            if actor_id not in self.actors:
                raise SteerError(f"unknown actor {actor_id!r}")
            del self.actors[actor_id]
        elif action == "treat_taken":
            actor_id = msg.get("actor")
            if actor_id is None:
                state = self.stepper.fsm.state
                if state.phase is not Phase.ENGAGED or state.target is None:
                    raise SteerError("treat_taken without actor requires an engaged target")
                actor_id = state.target
            elif actor_id not in self.actors:
                raise SteerError(f"unknown actor {actor_id!r}")
            self.stepper.mark_done(actor_id)
            msg = {**msg, "actor": actor_id}
        elif action == "set_config_overrides":
            self._apply_overrides(msg)
        else:
            raise SteerError(f"unknown steer action {action!r}")

        entry = {"frame": self.frame_idx, "t": self.frame_idx / self.frame_rate, **msg}
        self.steer_log.append(entry)
        return {"action": action, "frame": self.frame_idx}

    @staticmethod
    def _actor_id(msg: dict) -> str:
        actor_id = msg.get("actor")
        if not isinstance(actor_id, str) or not actor_id:
            raise SteerError("actor must be a non-empty string")
        return actor_id

    @staticmethod
    def _pose(msg: dict) -> tuple[float, float, float]:
        vals = []
        for key in ("x", "y", "facing_deg"):
            v = msg.get(key)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise SteerError(f"{key} must be a finite number, got {v!r}")
            vals.append(float(v))
        return vals[0], vals[1], vals[2]

    def _apply_overrides(self, msg: dict) -> None:
        new_map = self.config.map
        new_fsm = self.config.fsm
        for section, current in (("map", self.config.map), ("fsm", self.config.fsm)):
            fields = msg.get(section)
            if fields is None:
                continue
            if not isinstance(fields, dict):
                raise SteerError(f"{section} overrides must be a mapping")
            known = {f.name for f in dataclasses.fields(current)}
            unknown = set(fields) - known
            if unknown:
                raise SteerError(f"unknown {section} fields: {', '.join(sorted(unknown))}")
            try:
                replaced = dataclasses.replace(current, **fields)
            except (TypeError, ValueError) as exc:
                raise SteerError(f"{section}: {exc}") from exc
            if section == "map":
                new_map = replaced
            else:
                new_fsm = replaced
        self.config.map = new_map
        self.config.fsm = new_fsm
        self.stepper.fsm.config = new_fsm

    # -- stepping ---------------------------------------------------------

    def step_frame(self) -> dict:
        """Advance one control frame and return its FrameMessage payload."""
        t = self.frame_idx / self.frame_rate
        raw_samples = []
        for actor in self.actors.values():
            if not in_fov((actor.x, actor.y), self.config.intention_model):
                continue
            raw_p = synth_intention(
                (actor.x, actor.y), actor.facing_deg, self.config.intention_model
            )
            raw_samples.append((actor.actor_id, raw_p))
        row = self.stepper.step(t, raw_samples)
        self.trace.rows.append(row)
        for ev in self.stepper.last_events:
            self.trace.events.append((t, ev.kind.value, {"user_id": ev.user_id}))

        # Keep the synth clock aligned with the control clock so parameter
        # mirroring on clients matches what the server would play locally.
        sample_rate = self.config.synth.sample_rate
        target = (self.frame_idx + 1) / self.frame_rate * sample_rate
        while self.stepper.synth.samples_rendered < target:
            block = self.stepper.synth.render_block()
            if self.keep_audio:
                self.blocks.append(block)

        self.frame_idx += 1
        return self.frame_message(row)

    def frame_message(self, row: TraceRow) -> dict:
        signals = self.stepper.tracker.signals()
        users = {
            uid: {
                "raw_p": sig.raw_p,
                "p": sig.p,
                "dp_dt": sig.dp_dt,
                "done": sig.done,
            }
            for uid, sig in sorted(signals.items())
        }
        state = self.stepper.fsm.state
        return {
            "type": "frame",
            "schema": PROTOCOL_SCHEMA_VERSION,
            "frame": self.frame_idx - 1,
            "t": row.t,
            "phase": row.phase,
            "target": state.target,
            "users": users,
            "sound": {
                "volume": row.volume,
                "frequency": row.frequency,
                "vibrato": row.vibrato,
                "audible": row.audible,
            },
            "led": {
                "r": row.led_rgb[0],
                "g": row.led_rgb[1],
                "b": row.led_rgb[2],
                "intensity": row.led_intensity,
            },
            "events": [
                {"kind": ev.kind.value, "user_id": ev.user_id, "t": ev.t}
                for ev in self.stepper.last_events
            ],
        }


def scenario_from_steer_log(
    steer_log: list[dict], n_frames: int, frame_rate: float
) -> Scenario:
    """Reconstruct a scenario whose offline run matches the live session.

    Live actors hold their pose between moves, so each pose change becomes a
    one-frame linear hop: a holding waypoint on the previous frame followed
    by the new pose. Sessions that used config overrides or respawned a
    removed actor cannot be expressed as a scenario and are rejected.
    """
    duration = n_frames / frame_rate

    poses: dict[str, tuple[float, float, float]] = {}
    waypoints: dict[str, list[tuple[float, float, float, float]]] = {}
    last_wp_frame: dict[str, int] = {}
    enters: dict[str, float] = {}
    leaves: dict[str, float] = {}
    events: list[ScenarioEvent] = []

    for entry in steer_log:
        action = entry.get("action")
        frame = int(entry["frame"])
        t = frame / frame_rate
        actor = entry.get("actor")
        if action == "set_config_overrides":
            raise ValueError("steer log with config overrides is not scenario-replayable")
        if action == "treat_taken":
            events.append(ScenarioEvent(t=t, kind="treat_taken", actor=actor))
            continue
        if action == "spawn_actor":
            if actor in waypoints:
                raise ValueError(f"respawn of {actor!r} is not scenario-replayable")
            pose = (entry["x"], entry["y"], entry["facing_deg"])
            poses[actor] = pose
            waypoints[actor] = [(t, *pose)]
            last_wp_frame[actor] = frame
            enters[actor] = t
        elif action == "move_actor":
            pose = (entry["x"], entry["y"], entry["facing_deg"])
            if poses.get(actor) == pose:
                continue
            prev_frame = last_wp_frame[actor]
            wps = waypoints[actor]
            if frame == prev_frame:
                # Coalesce several moves within one frame: the last wins.
                wps[-1] = (t, *pose)
            else:
                if frame - 1 > prev_frame:
                    hold_t = (frame - 1) / frame_rate
                    wps.append((hold_t, *poses[actor]))
                wps.append((t, *pose))
            poses[actor] = pose
            last_wp_frame[actor] = frame
        elif action == "remove_actor":
            # Gone from this frame on: deactivate just before it.
            leaves[actor] = (frame - 0.5) / frame_rate
            poses.pop(actor, None)

    actors = [
        ActorScript(
            actor_id=aid,
            mode="trajectory",
            waypoints=[tuple(wp) for wp in wps],
            enters_at=enters[aid],
            leaves_at=leaves.get(aid, math.inf),
        )
        for aid, wps in waypoints.items()
    ]
    return Scenario(
        duration_s=duration,
        frame_rate=frame_rate,
        actors=actors,
        events=events,
        name="steer_log_replay",
    )
