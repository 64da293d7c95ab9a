"""Offline scenario execution: perception surrogate -> tracker -> FSM ->
sound maps -> synth, stepped deterministically.

The audio clock drives the loop block by block; control frames are applied
at the first block boundary at or after their timestamp, which mirrors how
the live service hands parameters to the renderer. Identical scenario and
config in, byte-identical trace and sample stream out.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .behavior import ActuatorEvent, EngagementFsm, Phase, select_target
from .config import EngineConfig
from .mapping import compute_params
from .scenario import Scenario, in_fov, synth_intention
from .synth import Synth
from .tracking import IntentionSample, IntentionTracker


@dataclass(frozen=True)
class TraceRow:
    t: float
    user_id: str  # selected/engaged user, "" when nobody drives the sound
    raw_p: float | None
    p: float | None
    dp_dt: float | None
    phase: str
    volume: float
    frequency: float
    vibrato: float
    audible: bool
    led_rgb: tuple[float, float, float]
    led_intensity: float


@dataclass
class SessionTrace:
    rows: list[TraceRow] = field(default_factory=list)
    events: list[tuple[float, str, dict]] = field(default_factory=list)
    samples: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sample_rate: int = 44100
    frame_rate: float = 30.0


class PipelineStepper:
    """One control-frame step of the full engine; shared by offline and live."""

    def __init__(self, config: EngineConfig, seed: int | None = None):
        self.config = config
        self.tracker = IntentionTracker(config.tracker)
        self.fsm = EngagementFsm(config.fsm)
        self.synth = Synth(config.synth)
        self.last_events: list[ActuatorEvent] = []
        self._rng = np.random.default_rng(seed) if config.raw_p_noise_std > 0 else None

    def step(self, t: float, raw_samples: list[tuple[str, float]]) -> TraceRow:
        """Ingest this frame's raw probabilities and advance every stage."""
        for user_id, raw_p in raw_samples:
            if self._rng is not None:
                raw_p = float(
                    np.clip(raw_p + self._rng.normal(0.0, self.config.raw_p_noise_std), 0.0, 1.0)
                )
            self.tracker.ingest(IntentionSample(user_id=user_id, raw_p=raw_p, t=t))
        self.tracker.prune(t)
        signals = self.tracker.signals()
        state, events, led = self.fsm.step(signals, t)
        params = compute_params(signals, state.target, self.config.map)
        self.synth.set_params(params)

        shown = state.target if state.phase is Phase.ENGAGED else select_target(signals)
        sig = signals.get(shown) if shown is not None else None
        row = TraceRow(
            t=t,
            user_id=shown or "",
            raw_p=sig.raw_p if sig else None,
            p=sig.p if sig else None,
            dp_dt=sig.dp_dt if sig else None,
            phase=state.phase.value,
            volume=params.volume,
            frequency=params.frequency,
            vibrato=params.vibrato,
            audible=params.audible,
            led_rgb=led.rgb,
            led_intensity=led.intensity,
        )
        self.last_events = events
        return row

    def mark_done(self, user_id: str) -> None:
        self.tracker.mark_done(user_id)


def run_scenario(scenario: Scenario, config: EngineConfig, seed: int | None = None) -> SessionTrace:
    """Execute a scenario faster than real time; returns the full trace."""
    stepper = PipelineStepper(config, seed=seed)
    sample_rate = config.synth.sample_rate
    block_size = config.synth.block_size
    frame_rate = scenario.frame_rate

    n_frames = int(round(scenario.duration_s * frame_rate))
    total_samples = int(round(scenario.duration_s * sample_rate))

    trace = SessionTrace(sample_rate=sample_rate, frame_rate=frame_rate)
    blocks = []
    event_idx = 0
    frame_idx = 0

    def control_frame(k: int) -> None:
        nonlocal event_idx
        t = k / frame_rate
        while event_idx < len(scenario.events) and scenario.events[event_idx].t <= t:
            ev = scenario.events[event_idx]
            if ev.kind == "treat_taken":
                stepper.mark_done(ev.actor)
            trace.events.append((t, ev.kind, {"actor": ev.actor}))
            event_idx += 1
        raw_samples = []
        for actor in scenario.actors:
            if not actor.active_at(t):
                continue
            if actor.mode == "trajectory":
                x, y, facing = actor.pose_at(t)
                if not in_fov((x, y), config.intention_model):
                    continue
                raw_p = synth_intention((x, y), facing, config.intention_model)
            else:
                raw_p = actor.p_at(t)
            raw_samples.append((actor.actor_id, raw_p))
        row = stepper.step(t, raw_samples)
        trace.rows.append(row)
        for ev in stepper.last_events:
            trace.events.append((t, ev.kind.value, {"user_id": ev.user_id}))

    rendered = 0
    while rendered < total_samples:
        t_block = rendered / sample_rate
        while frame_idx < n_frames and frame_idx / frame_rate <= t_block:
            control_frame(frame_idx)
            frame_idx += 1
        blocks.append(stepper.synth.render_block())
        rendered += block_size
    while frame_idx < n_frames:
        control_frame(frame_idx)
        frame_idx += 1

    trace.samples = np.concatenate([b.samples for b in blocks]) if blocks else np.zeros(0)
    return trace


TRACE_COLUMNS = [
    "t",
    "user_id",
    "raw_p",
    "p",
    "dp_dt",
    "phase",
    "volume",
    "frequency",
    "vibrato",
    "audible",
    "led_r",
    "led_g",
    "led_b",
    "led_intensity",
]


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    if x == math.inf or x == -math.inf or x != x:
        raise ValueError(f"non-finite value in trace: {x}")
    return f"{x:.9g}"


def format_trace_row(row: TraceRow) -> list[str]:
    return [
        _fmt(row.t),
        row.user_id,
        _fmt(row.raw_p),
        _fmt(row.p),
        _fmt(row.dp_dt),
        row.phase,
        _fmt(row.volume),
        _fmt(row.frequency),
        _fmt(row.vibrato),
        "1" if row.audible else "0",
        _fmt(row.led_rgb[0]),
        _fmt(row.led_rgb[1]),
        _fmt(row.led_rgb[2]),
        _fmt(row.led_intensity),
    ]


def write_trace_rows(fh, rows: list[TraceRow]) -> None:
    writer = csv.writer(fh)
    writer.writerow(TRACE_COLUMNS)
    for row in rows:
        writer.writerow(format_trace_row(row))


def write_trace_csv(trace: SessionTrace, path: str) -> None:
    with open(path, "w", newline="") as fh:
        write_trace_rows(fh, trace.rows)


def read_trace_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_events_log(trace: SessionTrace, path: str) -> None:
    """One event per line: tab-separated time, kind, JSON payload."""
    with open(path, "w") as fh:
        for t, kind, payload in trace.events:
            fh.write(f"{_fmt(t)}\t{kind}\t{json.dumps(payload, sort_keys=True)}\n")
