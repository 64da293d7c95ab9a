"""Piecewise-linear maps from the smoothed signal to sound parameters.

Volume and pitch rise linearly with probability above a knee and sit on a
constant floor below it, so the robot stays quietly audible whenever anyone
is around. Vibrato depth stays at a small baseline while probability is
steady or rising and grows linearly as it falls, saturating at a configured
negative rate. With no live, non-done users the output is marked inaudible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .behavior import select_target
from .tracking import SmoothedSignal


@dataclass(frozen=True)
class SoundParams:
    volume: float
    frequency: float
    vibrato: float
    audible: bool


@dataclass
class MapConfig:
    p_knee: float = 0.2
    f_floor_hz: float = 220.0
    f_max_hz: float = 880.0
    vol_floor: float = 0.1
    vol_max: float = 0.9
    v_base: float = 0.02
    v_max: float = 0.2
    rate_sat: float = -0.5  # dp/dt at which vibrato saturates, 1/s

    def validate(self) -> list[str]:
        problems = []
        if not 0.0 < self.p_knee < 1.0:
            problems.append(f"p_knee must be in (0, 1), got {self.p_knee}")
        if not self.f_floor_hz < self.f_max_hz:
            problems.append(
                f"f_floor_hz must be < f_max_hz, got {self.f_floor_hz} >= {self.f_max_hz}"
            )
        if self.f_floor_hz <= 0:
            problems.append(f"f_floor_hz must be > 0, got {self.f_floor_hz}")
        if not 0.0 <= self.vol_floor < self.vol_max <= 1.0:
            problems.append(
                f"need 0 <= vol_floor < vol_max <= 1, got {self.vol_floor}, {self.vol_max}"
            )
        if not 0.0 <= self.v_base < self.v_max:
            problems.append(f"need 0 <= v_base < v_max, got {self.v_base}, {self.v_max}")
        if self.rate_sat >= 0:
            problems.append(f"rate_sat must be < 0, got {self.rate_sat}")
        return problems

    def __post_init__(self) -> None:
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def map_volume(p: float, config: MapConfig) -> float:
    """Amplitude for probability p: floor below the knee, linear ramp above."""
    p = _clamp01(p)
    if p <= config.p_knee:
        return config.vol_floor
    frac = (p - config.p_knee) / (1.0 - config.p_knee)
    return config.vol_floor + frac * (config.vol_max - config.vol_floor)


def map_frequency(p: float, config: MapConfig) -> float:
    """Pitch in Hz for probability p: same knee-then-ramp shape as volume."""
    p = _clamp01(p)
    if p <= config.p_knee:
        return config.f_floor_hz
    frac = (p - config.p_knee) / (1.0 - config.p_knee)
    return config.f_floor_hz + frac * (config.f_max_hz - config.f_floor_hz)


def map_vibrato(dp_dt: float, config: MapConfig) -> float:
    """Vibrato depth for a probability rate of change.

    Non-decreasing p keeps the baseline depth; falling p ramps the depth
    linearly up to v_max at rate_sat and saturates beyond.
    """
    if dp_dt >= 0.0:
        return config.v_base
    if dp_dt <= config.rate_sat:
        return config.v_max
    frac = dp_dt / config.rate_sat
    return config.v_base + frac * (config.v_max - config.v_base)


def compute_params(
    signals: dict[str, SmoothedSignal],
    target: str | None,
    config: MapConfig,
) -> SoundParams:
    """Sound parameters for the current scene.

    Silent (inaudible) when no live non-done user exists; otherwise the
    three maps applied to the target's signal. A stale or done target falls
    back to fresh selection so the awareness tone survives target churn.
    """
    sig = signals.get(target) if target is not None else None
    if sig is None or sig.done:
        fallback = select_target(signals)
        sig = signals.get(fallback) if fallback is not None else None
    if sig is None or sig.done:
        return SoundParams(
            volume=0.0, frequency=config.f_floor_hz, vibrato=config.v_base, audible=False
        )
    return SoundParams(
        volume=map_volume(sig.p, config),
        frequency=map_frequency(sig.p, config),
        vibrato=map_vibrato(sig.dp_dt, config),
        audible=True,
    )
