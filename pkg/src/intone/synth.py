"""Block-based sine synthesizer with a shared pitch/amplitude vibrato LFO.

One sine carrier tracks the mapped frequency; a single low-frequency
oscillator modulates both instantaneous frequency and amplitude by the
vibrato depth, sharing one phase. Parameter changes are installed as ramp
targets and interpolated linearly over a short window so updates at the
control rate never click. Phase accumulates per sample, so frequency is
modulated phase-accurately and blocks are continuous at their boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mapping import SoundParams

TWO_PI = 2.0 * math.pi


@dataclass
class SynthConfig:
    sample_rate: int = 44100
    block_size: int = 512
    vibrato_rate_hz: float = 20.0
    param_ramp_s: float = 0.05

    def validate(self) -> list[str]:
        problems = []
        if self.sample_rate < 8000:
            problems.append(f"sample_rate must be >= 8000, got {self.sample_rate}")
        if not 0 < self.block_size <= self.sample_rate:
            problems.append(
                f"block_size must be in (0, sample_rate], got {self.block_size}"
            )
        if self.vibrato_rate_hz <= 0:
            problems.append(f"vibrato_rate_hz must be > 0, got {self.vibrato_rate_hz}")
        if self.param_ramp_s < 0:
            problems.append(f"param_ramp_s must be >= 0, got {self.param_ramp_s}")
        return problems

    def __post_init__(self) -> None:
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))


@dataclass(frozen=True)
class AudioBlock:
    samples: np.ndarray  # mono float64 in [-1, 1]
    t_start: float


class _Ramp:
    """Linear per-sample interpolation toward a target value.

    The target is hit exactly (not asymptotically) on the last ramp sample,
    which is what makes post-ramp silence bit-exact zeros.
    """

    __slots__ = ("value", "target", "step", "remaining")

    def __init__(self, value: float):
        self.value = value
        self.target = value
        self.step = 0.0
        self.remaining = 0

    def set_target(self, target: float, ramp_samples: int) -> None:
        if target == self.target:
            # Re-installing the current target must not restart the ramp,
            # or a steady stream of identical updates would never land.
            return
        self.target = target
        if ramp_samples <= 0 or target == self.value:
            self.value = target
            self.step = 0.0
            self.remaining = 0
        else:
            self.step = (target - self.value) / ramp_samples
            self.remaining = ramp_samples

    def block(self, n: int) -> np.ndarray:
        if self.remaining <= 0:
            return np.full(n, self.value)
        k = np.arange(1, n + 1, dtype=np.float64)
        out = np.where(k < self.remaining, self.value + self.step * k, self.target)
        if self.remaining <= n:
            self.value = self.target
            self.remaining = 0
        else:
            self.value += self.step * n
            self.remaining -= n
        return out


class Synth:
    """Stateful renderer; single owner mutates, deterministic sample for sample.

    `set_params` and `render_block` must not run concurrently: callers hand
    parameters over between blocks (the control loop and the render loop are
    serialized by design elsewhere).
    """

    def __init__(self, config: SynthConfig | None = None):
        self.config = config or SynthConfig()
        self.carrier_phase = 0.0
        self.lfo_phase = 0.0
        self._vol = _Ramp(0.0)
        self._freq = _Ramp(0.0)
        self._vib = _Ramp(0.0)
        self._samples_rendered = 0

    @property
    def t(self) -> float:
        """Time of the next sample to be rendered, in seconds."""
        return self._samples_rendered / self.config.sample_rate

    @property
    def samples_rendered(self) -> int:
        return self._samples_rendered

    def set_params(self, params: SoundParams) -> None:
        """Install new ramp targets; values reach them within param_ramp_s."""
        ramp_samples = int(round(self.config.param_ramp_s * self.config.sample_rate))
        volume = params.volume if params.audible else 0.0
        self._vol.set_target(volume, ramp_samples)
        self._freq.set_target(params.frequency, ramp_samples)
        self._vib.set_target(params.vibrato, ramp_samples)

    def render_block(self) -> AudioBlock:
        """Render the next block_size samples, advancing both phases."""
        cfg = self.config
        n = cfg.block_size
        t_start = self.t

        vol = self._vol.block(n)
        freq = self._freq.block(n)
        vib = self._vib.block(n)

        lfo_incr = TWO_PI * cfg.vibrato_rate_hz / cfg.sample_rate
        lfo_phases = self.lfo_phase + lfo_incr * np.arange(n, dtype=np.float64)
        lfo_sin = np.sin(lfo_phases)

        inst_freq = freq * (1.0 + vib * lfo_sin)
        inst_amp = np.clip(vol * (1.0 + vib * lfo_sin), 0.0, 1.0)

        carrier_incr = TWO_PI * inst_freq / cfg.sample_rate
        carrier_phases = self.carrier_phase + np.concatenate(
            ([0.0], np.cumsum(carrier_incr[:-1]))
        )
        samples = inst_amp * np.sin(carrier_phases)

        self.carrier_phase = (carrier_phases[-1] + carrier_incr[-1]) % TWO_PI
        self.lfo_phase = (self.lfo_phase + lfo_incr * n) % TWO_PI
        self._samples_rendered += n
        return AudioBlock(samples=samples, t_start=t_start)

    def render_seconds(self, duration_s: float) -> list[AudioBlock]:
        """Render whole blocks until at least duration_s has elapsed."""
        blocks = []
        end = self._samples_rendered + duration_s * self.config.sample_rate
        while self._samples_rendered < end:
            blocks.append(self.render_block())
        return blocks
