"""Engagement state machine: arm and LED behavior from smoothed signals.

Schmitt-trigger semantics with a debounced release: the arm extends when the
selected user's probability rises above the activation threshold, and only
retracts after the probability has stayed below the release threshold for a
full hold period (or the user takes a treat, or their track is lost). The
LED ramps from blue to yellow with probability, dim white when nobody is
around.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import NamedTuple

from .tracking import SmoothedSignal


class Phase(enum.Enum):
    NO_USERS = "no_users"
    AWARE = "aware"
    ENGAGED = "engaged"


class EventKind(enum.Enum):
    ORIENT_TO_USER = "orient_to_user"
    EXTEND_ARM = "extend_arm"
    RETRACT_ARM = "retract_arm"
    ORIENT_NEUTRAL = "orient_neutral"


class ActuatorEvent(NamedTuple):
    kind: EventKind
    t: float
    user_id: str | None = None


class LedCommand(NamedTuple):
    rgb: tuple[float, float, float]
    intensity: float


@dataclass(frozen=True)
class EngagementState:
    phase: Phase = Phase.NO_USERS
    target: str | None = None
    below_since: float | None = None


@dataclass
class FsmConfig:
    p_on: float = 0.85
    p_off: float = 0.75
    release_hold_s: float = 1.0
    idle_intensity: float = 0.15

    def validate(self) -> list[str]:
        problems = []
        if not 0.0 < self.p_off < self.p_on <= 1.0:
            problems.append(
                f"thresholds must satisfy 0 < p_off < p_on <= 1, "
                f"got p_off={self.p_off}, p_on={self.p_on}"
            )
        if self.release_hold_s <= 0:
            problems.append(f"release_hold_s must be > 0, got {self.release_hold_s}")
        if not 0.0 <= self.idle_intensity <= 1.0:
            problems.append(f"idle_intensity must be in [0, 1], got {self.idle_intensity}")
        return problems

    def __post_init__(self) -> None:
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))


def select_target(signals: dict[str, SmoothedSignal]) -> str | None:
    """Pick the user who drives behavior and sound: highest p wins.

    Done users are excluded; ties go to the earliest-created track.
    """
    best: SmoothedSignal | None = None
    for sig in signals.values():
        if sig.done:
            continue
        if best is None or sig.p > best.p or (sig.p == best.p and sig.created_seq < best.created_seq):
            best = sig
    return best.user_id if best is not None else None


def led_for(state: EngagementState, p: float, config: FsmConfig) -> LedCommand:
    """LED command for the current phase and probability.

    Idle (nobody around): dim white. Otherwise blue-to-yellow interpolated
    channel-wise at p, with intensity following p down to the idle floor.
    """
    if state.phase is Phase.NO_USERS:
        return LedCommand(rgb=(1.0, 1.0, 1.0), intensity=config.idle_intensity)
    p = min(1.0, max(0.0, p))
    rgb = (p, p, 1.0 - p)
    intensity = min(1.0, max(config.idle_intensity, p))
    return LedCommand(rgb=rgb, intensity=intensity)


class EngagementFsm:
    """Steps the engagement state against signal snapshots at the control rate."""

    def __init__(self, config: FsmConfig | None = None):
        self.config = config or FsmConfig()
        self.state = EngagementState()
        self._last_t: float | None = None

    # Shared zero-event list: most ticks emit nothing, and this runs at the
    # control rate for every tracked scene.
    _NO_EVENTS: list[ActuatorEvent] = []

    def step(
        self, signals: dict[str, SmoothedSignal], t: float
    ) -> tuple[EngagementState, list[ActuatorEvent], LedCommand]:
        """Advance one control tick; returns (state, actuator events, led)."""
        if self._last_t is not None and t < self._last_t:
            raise ValueError(f"clock regression: step at t={t} after t={self._last_t}")
        self._last_t = t

        cfg = self.config
        state = self.state
        events = self._NO_EVENTS
        candidate = select_target(signals)
        led_p = 0.0

        if state.phase is Phase.ENGAGED:
            target_sig = signals.get(state.target)
            release = False
            if target_sig is None or target_sig.done:
                # Track loss and treat-taken release immediately; the hold
                # only debounces probability dips.
                release = True
            elif target_sig.p < cfg.p_off:
                below_since = state.below_since
                if below_since is None:
                    below_since = t
                    state = replace(state, below_since=t)
                if t - below_since >= cfg.release_hold_s:
                    release = True
            elif state.below_since is not None:
                state = replace(state, below_since=None)

            if release:
                events = [
                    ActuatorEvent(EventKind.RETRACT_ARM, t, state.target),
                    ActuatorEvent(EventKind.ORIENT_NEUTRAL, t),
                ]
                phase = Phase.AWARE if candidate is not None else Phase.NO_USERS
                state = EngagementState(phase=phase, target=None, below_since=None)
                # Re-engagement, if any, waits for the next tick.
                if candidate is not None:
                    led_p = signals[candidate].p
            elif target_sig is not None:
                led_p = target_sig.p
        else:
            if candidate is None:
                if state.phase is not Phase.NO_USERS:
                    state = EngagementState(phase=Phase.NO_USERS)
            else:
                candidate_sig = signals[candidate]
                if candidate_sig.p > cfg.p_on:
                    events = [
                        ActuatorEvent(EventKind.ORIENT_TO_USER, t, candidate),
                        ActuatorEvent(EventKind.EXTEND_ARM, t, candidate),
                    ]
                    state = EngagementState(phase=Phase.ENGAGED, target=candidate)
                elif state.phase is not Phase.AWARE:
                    state = EngagementState(phase=Phase.AWARE)
                led_p = candidate_sig.p

        self.state = state
        led = led_for(state, led_p, cfg)
        return state, events, led

    def reset(self) -> None:
        self.state = EngagementState()
        self._last_t = None
