"""Per-user intention signal tracking.

Raw interaction-intention probabilities arrive as timestamped samples, one
stream per tracked user. This module smooths each stream with a first-order
exponential moving average, estimates its rate of change over a short
trailing window, and manages the track lifecycle: tracks appear on first
sample, are dropped after a timeout without samples, and stay suppressed
forever once the user has taken their treat.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntentionSample:
    """One raw classifier observation: user, probability, monotonic time."""

    user_id: str
    raw_p: float
    t: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.raw_p <= 1.0:
            raise ValueError(f"raw_p must be in [0, 1], got {self.raw_p}")


class SmoothedSignal(NamedTuple):
    """Snapshot of one user's smoothed state, safe to hand to other modules.

    A tuple rather than a dataclass: these are built for every user on every
    control tick, and creation cost shows up in the control loop budget.
    """

    user_id: str
    p: float
    dp_dt: float
    t_last: float
    done: bool
    raw_p: float = 0.0
    created_seq: int = 0  # creation order, used for deterministic tie-breaks


@dataclass
class TrackerConfig:
    tau_s: float = 1.0
    rate_window_s: float = 0.5
    track_loss_timeout_s: float = 0.5

    def validate(self) -> list[str]:
        problems = []
        if self.tau_s <= 0:
            problems.append(f"tau_s must be > 0, got {self.tau_s}")
        if self.rate_window_s <= 0:
            problems.append(f"rate_window_s must be > 0, got {self.rate_window_s}")
        if self.track_loss_timeout_s <= 0:
            problems.append(
                f"track_loss_timeout_s must be > 0, got {self.track_loss_timeout_s}"
            )
        return problems

    def __post_init__(self) -> None:
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))


def ema_update(prev_p: float, raw_p: float, dt: float, tau_s: float) -> float:
    """Advance the exponential moving average by dt seconds.

    Uses the variable-interval coefficient 1 - exp(-dt/tau), so irregular
    sample spacing composes exactly: two updates of dt1 and dt2 against the
    same input equal one update of dt1+dt2.
    """
    if dt < 0:
        raise ValueError(f"clock regression: dt must be >= 0, got {dt}")
    if tau_s <= 0:
        raise ValueError(f"tau_s must be > 0, got {tau_s}")
    alpha = 1.0 - math.exp(-dt / tau_s)
    return prev_p + (raw_p - prev_p) * alpha


def estimate_rate(history: list[tuple[float, float]], rate_window_s: float) -> float:
    """Least-squares slope of (t, p) pairs over the trailing window, in 1/s.

    Degenerate inputs (fewer than two points in the window, or zero time
    spread) yield 0.0 rather than an error.
    """
    if not history:
        return 0.0
    t_latest = history[-1][0]
    cutoff = t_latest - rate_window_s
    pts = [(t, p) for t, p in history if t >= cutoff]
    if len(pts) < 2:
        return 0.0
    # Shift to the first point for conditioning; a flat trace stays exactly 0.
    t0, p0 = pts[0]
    ts = [t - t0 for t, _ in pts]
    ps = [p - p0 for _, p in pts]
    n = len(pts)
    t_mean = sum(ts) / n
    p_mean = sum(ps) / n
    num = sum((t - t_mean) * (p - p_mean) for t, p in zip(ts, ps))
    den = sum((t - t_mean) ** 2 for t in ts)
    if den == 0.0:
        return 0.0
    return num / den


class _Track:
    __slots__ = ("user_id", "p", "dp_dt", "t_last", "done", "raw_p", "history", "created_seq")

    def __init__(self, user_id: str, p: float, t: float, done: bool, created_seq: int):
        self.user_id = user_id
        self.p = p
        self.dp_dt = 0.0
        self.t_last = t
        self.done = done
        self.raw_p = p
        self.history: deque[tuple[float, float]] = deque([(t, p)])
        self.created_seq = created_seq


class IntentionTracker:
    """Holds all live tracks and applies smoothing to incoming samples.

    Single-owner, deterministic: time enters only through sample timestamps
    and the explicit `prune(now)` call, never through a hidden clock.
    """

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config or TrackerConfig()
        self._tracks: dict[str, _Track] = {}
        self._done_ids: set[str] = set()  # survives track loss; same id never re-activates
        self._next_seq = 0

    def ingest(self, sample: IntentionSample) -> SmoothedSignal:
        """Apply one sample; creates the track on first sighting."""
        track = self._tracks.get(sample.user_id)
        if track is None:
            # First sample initializes p at the raw value: a user who appears
            # already close should not sound like a slow rise from zero.
            track = _Track(
                sample.user_id,
                sample.raw_p,
                sample.t,
                done=sample.user_id in self._done_ids,
                created_seq=self._next_seq,
            )
            self._next_seq += 1
            self._tracks[sample.user_id] = track
            return self._snapshot(track)

        if sample.t <= track.t_last:
            raise ValueError(
                f"clock regression for user {sample.user_id!r}: "
                f"t={sample.t} after t={track.t_last}"
            )
        dt = sample.t - track.t_last
        track.p = ema_update(track.p, sample.raw_p, dt, self.config.tau_s)
        track.raw_p = sample.raw_p
        track.t_last = sample.t
        track.history.append((sample.t, track.p))
        cutoff = sample.t - self.config.rate_window_s
        while track.history and track.history[0][0] < cutoff:
            track.history.popleft()
        track.dp_dt = estimate_rate(list(track.history), self.config.rate_window_s)
        return self._snapshot(track)

    def mark_done(self, user_id: str) -> SmoothedSignal | None:
        """Treat taken: suppress this user permanently under this id."""
        self._done_ids.add(user_id)
        track = self._tracks.get(user_id)
        if track is None:
            logger.warning("mark_done for unknown user %r ignored", user_id)
            return None
        track.done = True
        return self._snapshot(track)

    def prune(self, now: float) -> list[str]:
        """Drop tracks without a sample within the loss timeout; returns ids."""
        timeout = self.config.track_loss_timeout_s
        lost = [uid for uid, tr in self._tracks.items() if now - tr.t_last > timeout]
        for uid in lost:
            del self._tracks[uid]
        return lost

    def signals(self) -> dict[str, SmoothedSignal]:
        return {uid: self._snapshot(tr) for uid, tr in self._tracks.items()}

    def get(self, user_id: str) -> SmoothedSignal | None:
        track = self._tracks.get(user_id)
        return self._snapshot(track) if track is not None else None

    def __len__(self) -> int:
        return len(self._tracks)

    @staticmethod
    def _snapshot(track: _Track) -> SmoothedSignal:
        return SmoothedSignal(
            user_id=track.user_id,
            p=track.p,
            dp_dt=track.dp_dt,
            t_last=track.t_last,
            done=track.done,
            raw_p=track.raw_p,
            created_seq=track.created_seq,
        )
