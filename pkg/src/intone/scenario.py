"""Scripted scenarios standing in for the live perception stack.

Actors either follow 2D waypoint trajectories around a robot fixed at the
origin (facing +x), with a logistic surrogate turning distance and facing
into an intention probability, or they play back a direct probability
trace. Scenario files are versioned YAML; the exact grammar is documented
in docs/formats.md.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

import yaml

SCENARIO_SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Scenario file rejected; `problems` lists offending fields."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass
class IntentionModelConfig:
    d_scale_m: float = 1.5
    facing_weight: float = 0.5
    fov_deg: float = 120.0
    gain: float = 4.0

    def validate(self) -> list[str]:
        problems = []
        if self.d_scale_m <= 0:
            problems.append(f"d_scale_m must be > 0, got {self.d_scale_m}")
        if self.facing_weight <= 0:
            problems.append(f"facing_weight must be > 0, got {self.facing_weight}")
        if not 0 < self.fov_deg <= 180:
            problems.append(f"fov_deg must be in (0, 180], got {self.fov_deg}")
        if self.gain <= 0:
            problems.append(f"gain must be > 0, got {self.gain}")
        return problems

    def __post_init__(self) -> None:
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))


def in_fov(position: tuple[float, float], config: IntentionModelConfig) -> bool:
    """Whether a point is inside the sensor wedge (robot at origin, +x axis)."""
    x, y = position
    if x == 0.0 and y == 0.0:
        return True
    angle = math.degrees(math.atan2(y, x))
    return abs(angle) <= config.fov_deg / 2.0


def synth_intention(
    position: tuple[float, float], facing_deg: float, config: IntentionModelConfig
) -> float:
    """Surrogate intention probability from pose: closer and facing -> higher.

    Logistic in a weighted sum of normalized proximity and facing alignment
    (cosine between the actor's facing and the direction to the robot).
    Strictly decreasing in distance, increasing in alignment.
    """
    x, y = position
    d = math.hypot(x, y)
    if d == 0.0:
        alignment = 1.0
    else:
        fx = math.cos(math.radians(facing_deg))
        fy = math.sin(math.radians(facing_deg))
        alignment = (fx * -x + fy * -y) / d
    z = config.gain * ((1.0 - d / config.d_scale_m) + config.facing_weight * alignment)
    return 1.0 / (1.0 + math.exp(-z))


@dataclass
class ActorScript:
    actor_id: str
    mode: str  # "trajectory" or "direct_p"
    waypoints: list[tuple]  # (t, x, y, facing_deg) or (t, p)
    enters_at: float = 0.0
    leaves_at: float = math.inf

    def active_at(self, t: float) -> bool:
        return self.enters_at <= t <= self.leaves_at

    def pose_at(self, t: float) -> tuple[float, float, float]:
        """Interpolated (x, y, facing_deg); clamps outside the waypoint span."""
        if self.mode != "trajectory":
            raise ValueError(f"actor {self.actor_id!r} has no trajectory")
        ts = [w[0] for w in self.waypoints]
        x = _interp(t, ts, [w[1] for w in self.waypoints])
        y = _interp(t, ts, [w[2] for w in self.waypoints])
        facing = _interp(t, ts, [w[3] for w in self.waypoints])
        return x, y, facing

    def p_at(self, t: float) -> float:
        if self.mode != "direct_p":
            raise ValueError(f"actor {self.actor_id!r} has no direct probability trace")
        ts = [w[0] for w in self.waypoints]
        return _interp(t, ts, [w[1] for w in self.waypoints])


def _interp(t: float, ts: list[float], vs: list[float]) -> float:
    if t <= ts[0]:
        return vs[0]
    if t >= ts[-1]:
        return vs[-1]
    for i in range(1, len(ts)):
        if t <= ts[i]:
            frac = (t - ts[i - 1]) / (ts[i] - ts[i - 1])
            return vs[i - 1] + frac * (vs[i] - vs[i - 1])
    return vs[-1]


@dataclass(frozen=True)
class ScenarioEvent:
    t: float
    kind: str
    actor: str


@dataclass
class Scenario:
    duration_s: float
    frame_rate: float = 30.0
    actors: list[ActorScript] = field(default_factory=list)
    events: list[ScenarioEvent] = field(default_factory=list)
    markers: dict[str, float] = field(default_factory=dict)
    name: str = ""


_EVENT_KINDS = {"treat_taken"}


def parse_scenario(data: object, source: str = "<scenario>") -> Scenario:
    """Validate a parsed YAML document into a Scenario.

    Raises ScenarioError listing every offending field path.
    """
    problems: list[str] = []
    if not isinstance(data, dict):
        raise ScenarioError([f"{source}: document must be a mapping"])

    version = data.get("version")
    if version != SCENARIO_SCHEMA_VERSION:
        raise ScenarioError(
            [f"{source}:version: expected {SCENARIO_SCHEMA_VERSION}, got {version!r}"]
        )

    duration = _num(data, "duration_s", problems, source)
    if duration is not None and duration <= 0:
        problems.append(f"{source}:duration_s: must be > 0, got {duration}")
    frame_rate = _num(data, "frame_rate", problems, source, default=30.0)
    if frame_rate is not None and frame_rate <= 0:
        problems.append(f"{source}:frame_rate: must be > 0, got {frame_rate}")

    actors: list[ActorScript] = []
    seen_ids: set[str] = set()
    raw_actors = data.get("actors", [])
    if not isinstance(raw_actors, list):
        problems.append(f"{source}:actors: must be a list")
        raw_actors = []
    for i, raw in enumerate(raw_actors):
        actor = _parse_actor(raw, f"{source}:actors[{i}]", duration, problems)
        if actor is not None:
            if actor.actor_id in seen_ids:
                problems.append(f"{source}:actors[{i}].id: duplicate id {actor.actor_id!r}")
            seen_ids.add(actor.actor_id)
            actors.append(actor)

    events: list[ScenarioEvent] = []
    raw_events = data.get("events", [])
    if not isinstance(raw_events, list):
        problems.append(f"{source}:events: must be a list")
        raw_events = []
    last_t = -math.inf
    for i, raw in enumerate(raw_events):
        path = f"{source}:events[{i}]"
        if not isinstance(raw, dict):
            problems.append(f"{path}: must be a mapping")
            continue
        t = raw.get("t")
        kind = raw.get("kind")
        actor = raw.get("actor")
        if not isinstance(t, (int, float)):
            problems.append(f"{path}.t: must be a number")
            continue
        if kind not in _EVENT_KINDS:
            problems.append(f"{path}.kind: unknown kind {kind!r}")
            continue
        if not isinstance(actor, str) or actor not in seen_ids:
            problems.append(f"{path}.actor: unknown actor {actor!r}")
            continue
        if duration is not None and not 0 <= t <= duration:
            problems.append(f"{path}.t: outside [0, duration_s], got {t}")
        if t < last_t:
            problems.append(f"{path}.t: events must be sorted by time")
        last_t = max(last_t, float(t))
        events.append(ScenarioEvent(t=float(t), kind=kind, actor=actor))

    markers: dict[str, float] = {}
    raw_markers = data.get("markers", {})
    if not isinstance(raw_markers, dict):
        problems.append(f"{source}:markers: must be a mapping")
    else:
        for key, val in raw_markers.items():
            if not isinstance(val, (int, float)):
                problems.append(f"{source}:markers.{key}: must be a number")
            else:
                markers[str(key)] = float(val)

    if problems:
        raise ScenarioError(problems)
    return Scenario(
        duration_s=float(duration),
        frame_rate=float(frame_rate),
        actors=actors,
        events=events,
        markers=markers,
        name=str(data.get("name", "")),
    )


def _num(data: dict, key: str, problems: list[str], source: str, default=None):
    val = data.get(key, default)
    if val is None:
        problems.append(f"{source}:{key}: required")
        return None
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        problems.append(f"{source}:{key}: must be a number, got {val!r}")
        return None
    return float(val)


def _parse_actor(
    raw: object, path: str, duration: float | None, problems: list[str]
) -> ActorScript | None:
    if not isinstance(raw, dict):
        problems.append(f"{path}: must be a mapping")
        return None
    actor_id = raw.get("id")
    if not isinstance(actor_id, str) or not actor_id:
        problems.append(f"{path}.id: must be a non-empty string")
        return None
    mode = raw.get("mode")
    if mode not in ("trajectory", "direct_p"):
        problems.append(f"{path}.mode: must be 'trajectory' or 'direct_p', got {mode!r}")
        return None

    raw_wps = raw.get("waypoints")
    if not isinstance(raw_wps, list) or not raw_wps:
        problems.append(f"{path}.waypoints: must be a non-empty list")
        return None
    waypoints: list[tuple] = []
    prev_t = -math.inf
    ok = True
    for j, wp in enumerate(raw_wps):
        wpath = f"{path}.waypoints[{j}]"
        if not isinstance(wp, dict):
            problems.append(f"{wpath}: must be a mapping")
            ok = False
            continue
        keys = ("t", "x", "y", "facing_deg") if mode == "trajectory" else ("t", "p")
        vals = []
        for key in keys:
            v = wp.get(key)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                problems.append(f"{wpath}.{key}: must be a number, got {v!r}")
                ok = False
                v = 0.0
            vals.append(float(v))
        t = vals[0]
        if t <= prev_t:
            problems.append(f"{wpath}.t: waypoint times must be strictly increasing")
            ok = False
        prev_t = t
        if duration is not None and not 0 <= t <= duration:
            problems.append(f"{wpath}.t: outside [0, duration_s], got {t}")
            ok = False
        if mode == "direct_p" and not 0.0 <= vals[1] <= 1.0:
            problems.append(f"{wpath}.p: must be in [0, 1], got {vals[1]}")
            ok = False
        waypoints.append(tuple(vals))
    if not ok:
        return None

    enters_at = raw.get("enters_at", 0.0)
    leaves_at = raw.get("leaves_at", math.inf)
    for key, val in (("enters_at", enters_at), ("leaves_at", leaves_at)):
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            problems.append(f"{path}.{key}: must be a number, got {val!r}")
            return None
    if leaves_at <= enters_at:
        problems.append(f"{path}.leaves_at: must be > enters_at")
        return None
    return ActorScript(
        actor_id=actor_id,
        mode=mode,
        waypoints=waypoints,
        enters_at=float(enters_at),
        leaves_at=float(leaves_at),
    )


def scenario_to_dict(scenario: Scenario) -> dict:
    """Inverse of parse_scenario, for saving generated scenarios."""
    actors = []
    for actor in scenario.actors:
        keys = ("t", "x", "y", "facing_deg") if actor.mode == "trajectory" else ("t", "p")
        entry: dict = {
            "id": actor.actor_id,
            "mode": actor.mode,
            "waypoints": [dict(zip(keys, wp)) for wp in actor.waypoints],
        }
        if actor.enters_at != 0.0:
            entry["enters_at"] = actor.enters_at
        if actor.leaves_at != math.inf:
            entry["leaves_at"] = actor.leaves_at
        actors.append(entry)
    out: dict = {
        "version": SCENARIO_SCHEMA_VERSION,
        "duration_s": scenario.duration_s,
        "frame_rate": scenario.frame_rate,
        "actors": actors,
        "events": [{"t": e.t, "kind": e.kind, "actor": e.actor} for e in scenario.events],
    }
    if scenario.name:
        out["name"] = scenario.name
    if scenario.markers:
        out["markers"] = dict(scenario.markers)
    return out


def save_scenario(scenario: Scenario, path: str) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(scenario_to_dict(scenario), fh, sort_keys=False)


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    return parse_scenario(data, source=path)


def bundled_scenario(name: str) -> Scenario:
    """Load one of the scenarios shipped with the package."""
    ref = resources.files("intone.scenarios").joinpath(f"{name}.yaml")
    if not ref.is_file():
        available = sorted(
            p.name[: -len(".yaml")]
            for p in resources.files("intone.scenarios").iterdir()
            if p.name.endswith(".yaml")
        )
        raise ScenarioError(
            [f"unknown bundled scenario {name!r}; available: {', '.join(available)}"]
        )
    data = yaml.safe_load(ref.read_text())
    return parse_scenario(data, source=f"bundled:{name}")
