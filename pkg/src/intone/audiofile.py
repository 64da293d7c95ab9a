"""Mono 16-bit PCM WAV writing and reading."""

from __future__ import annotations

import wave
from collections.abc import Sequence

import numpy as np

from .synth import AudioBlock

PCM_SCALE = 32767.0


def quantize_pcm16(samples: np.ndarray) -> np.ndarray:
    """Float samples in [-1, 1] to little-endian int16, round-half-even."""
    scaled = np.rint(np.asarray(samples, dtype=np.float64) * PCM_SCALE)
    return np.clip(scaled, -32768, 32767).astype("<i2")


def write_wav(blocks: Sequence[AudioBlock], path: str, sample_rate: int = 44100) -> None:
    """Write rendered blocks as a mono 16-bit PCM RIFF/WAVE file."""
    if len(blocks) == 0:
        raise ValueError("cannot write an empty block sequence")
    samples = np.concatenate([b.samples for b in blocks])
    write_wav_samples(samples, path, sample_rate)


def write_wav_samples(samples: np.ndarray, path: str, sample_rate: int = 44100) -> None:
    if len(samples) == 0:
        raise ValueError("cannot write an empty sample stream")
    data = quantize_pcm16(samples)
    with open(path, "wb") as fh, wave.open(fh, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(sample_rate)
        wf.writeframes(data.tobytes())


def read_wav(path: str) -> tuple[np.ndarray, int]:
    """Read a mono 16-bit PCM WAV; returns (float samples in [-1, 1], rate)."""
    with wave.open(path, "rb") as wf:
        if wf.getnchannels() != 1 or wf.getsampwidth() != 2:
            raise ValueError(
                f"{path}: expected mono 16-bit PCM, got "
                f"{wf.getnchannels()} channels, {8 * wf.getsampwidth()}-bit"
            )
        rate = wf.getframerate()
        raw = wf.readframes(wf.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / PCM_SCALE
    return samples, rate
