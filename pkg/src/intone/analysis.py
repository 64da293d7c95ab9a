"""Spectral analysis helpers: STFT spectrograms and amplitude envelopes.

Used by the test suite to verify rendered audio and by the CLI to export
plottable spectrogram data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.signal import hilbert


def stft(samples: np.ndarray, window_size: int, hop: int) -> np.ndarray:
    """Hann-windowed magnitude spectrogram, shape (frames, window_size//2+1).

    window_size must be a power of two and hop in [1, window_size]; inputs
    shorter than one window are an error.
    """
    if window_size <= 0 or window_size & (window_size - 1) != 0:
        raise ValueError(f"window_size must be a power of two, got {window_size}")
    if not 0 < hop <= window_size:
        raise ValueError(f"hop must be in [1, window_size], got {hop}")
    samples = np.asarray(samples, dtype=np.float64)
    if len(samples) < window_size:
        raise ValueError(
            f"need at least {window_size} samples for one frame, got {len(samples)}"
        )
    window = np.hanning(window_size)
    n_frames = 1 + (len(samples) - window_size) // hop
    out = np.empty((n_frames, window_size // 2 + 1))
    for i in range(n_frames):
        frame = samples[i * hop : i * hop + window_size]
        out[i] = np.abs(np.fft.rfft(frame * window))
    return out


@dataclass(frozen=True)
class Spectrogram:
    times: np.ndarray  # frame centers, seconds
    freqs: np.ndarray  # bin centers, Hz
    magnitudes: np.ndarray  # (frames, bins)


def spectrogram(
    samples: np.ndarray, sample_rate: int, window_size: int = 4096, hop: int = 2048
) -> Spectrogram:
    mags = stft(samples, window_size, hop)
    n_frames = mags.shape[0]
    times = (np.arange(n_frames) * hop + window_size / 2) / sample_rate
    freqs = np.fft.rfftfreq(window_size, d=1.0 / sample_rate)
    return Spectrogram(times=times, freqs=freqs, magnitudes=mags)


def write_spectrogram_csv(spec: Spectrogram, path: str, max_freq_hz: float = 2000.0) -> None:
    """Export frame_time, bin_freq, magnitude rows up to max_freq_hz."""
    keep = spec.freqs <= max_freq_hz
    freqs = spec.freqs[keep]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame_time", "bin_freq", "magnitude"])
        for i, t in enumerate(spec.times):
            row_mags = spec.magnitudes[i, keep]
            for f, m in zip(freqs, row_mags):
                writer.writerow([f"{t:.6f}", f"{f:.3f}", f"{m:.6g}"])


def amplitude_envelope(samples: np.ndarray) -> np.ndarray:
    """Instantaneous amplitude via the analytic signal (Hilbert transform)."""
    return np.abs(hilbert(np.asarray(samples, dtype=np.float64)))


def envelope_spectrum_peak_hz(
    samples: np.ndarray, sample_rate: int, f_min: float = 2.0, f_max: float = 60.0
) -> tuple[float, float]:
    """Strongest component of the amplitude envelope within [f_min, f_max].

    Returns (frequency, magnitude). The envelope mean is removed so DC never
    masks the modulation peak.
    """
    env = amplitude_envelope(samples)
    env = env - env.mean()
    spec = np.abs(np.fft.rfft(env))
    freqs = np.fft.rfftfreq(len(env), d=1.0 / sample_rate)
    band = (freqs >= f_min) & (freqs <= f_max)
    if not band.any():
        raise ValueError("no FFT bins inside the requested band")
    idx = np.argmax(spec[band])
    return float(freqs[band][idx]), float(spec[band][idx])
