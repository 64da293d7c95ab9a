"""Engine configuration: one YAML file feeding every subsystem.

The six headline constants (tau_s, p_on, p_off, p_knee, v_base,
vibrato_rate_hz) sit at the top level of the file; everything else lives in
per-subsystem sections. The loader records where each resolved value came
from (file or default) so `intone check` can report provenance.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import yaml

from .behavior import FsmConfig
from .mapping import MapConfig
from .scenario import IntentionModelConfig
from .synth import SynthConfig
from .tracking import TrackerConfig

CONFIG_SCHEMA_VERSION = 1

# Paper-visible constants promoted to the top level of the config file.
TOP_LEVEL_KEYS = {
    "tau_s": ("tracker", "tau_s"),
    "p_on": ("fsm", "p_on"),
    "p_off": ("fsm", "p_off"),
    "p_knee": ("map", "p_knee"),
    "v_base": ("map", "v_base"),
    "vibrato_rate_hz": ("synth", "vibrato_rate_hz"),
}

_SECTION_TYPES = {
    "tracker": TrackerConfig,
    "fsm": FsmConfig,
    "map": MapConfig,
    "synth": SynthConfig,
    "intention_model": IntentionModelConfig,
}


class ConfigError(ValueError):
    """Config file rejected; `problems` lists offending fields."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass
class EngineConfig:
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    fsm: FsmConfig = field(default_factory=FsmConfig)
    map: MapConfig = field(default_factory=MapConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    intention_model: IntentionModelConfig = field(default_factory=IntentionModelConfig)
    control_rate_hz: float = 30.0
    raw_p_noise_std: float = 0.0  # optional classifier-noise injection, off by default

    def __post_init__(self) -> None:
        if self.control_rate_hz <= 0:
            raise ValueError(f"control_rate_hz must be > 0, got {self.control_rate_hz}")
        if self.raw_p_noise_std < 0:
            raise ValueError(f"raw_p_noise_std must be >= 0, got {self.raw_p_noise_std}")


def default_config() -> EngineConfig:
    return EngineConfig()


def load_config(path: str) -> tuple[EngineConfig, dict[str, str]]:
    """Load and validate a config file.

    Returns (config, provenance) where provenance maps "section.field" to
    "file" or "default". Raises ConfigError naming every bad field.
    """
    with open(path) as fh:
        data = yaml.safe_load(fh)
    return parse_config(data if data is not None else {}, source=path)


def parse_config(data: object, source: str = "<config>") -> tuple[EngineConfig, dict[str, str]]:
    problems: list[str] = []
    if not isinstance(data, dict):
        raise ConfigError([f"{source}: document must be a mapping"])

    version = data.get("version")
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(
            [f"{source}:version: expected {CONFIG_SCHEMA_VERSION}, got {version!r}"]
        )

    section_values: dict[str, dict[str, object]] = {name: {} for name in _SECTION_TYPES}
    provenance: dict[str, str] = {}
    scalar_values: dict[str, object] = {}

    for key, value in data.items():
        if key == "version":
            continue
        if key in TOP_LEVEL_KEYS:
            section, fname = TOP_LEVEL_KEYS[key]
            section_values[section][fname] = value
            provenance[f"{section}.{fname}"] = "file"
        elif key in _SECTION_TYPES:
            if not isinstance(value, dict):
                problems.append(f"{source}:{key}: must be a mapping")
                continue
            cls = _SECTION_TYPES[key]
            known = {f.name for f in dataclasses.fields(cls)}
            for fname, fval in value.items():
                if fname not in known:
                    problems.append(f"{source}:{key}.{fname}: unknown field")
                    continue
                qualified = f"{key}.{fname}"
                if fname in section_values[key]:
                    alias = next(k for k, v in TOP_LEVEL_KEYS.items() if v == (key, fname))
                    problems.append(
                        f"{source}:{qualified}: set both at top level ({alias}) and in section"
                    )
                    continue
                section_values[key][fname] = fval
                provenance[qualified] = "file"
        elif key in ("control_rate_hz", "raw_p_noise_std"):
            scalar_values[key] = value
            provenance[key] = "file"
        else:
            problems.append(f"{source}:{key}: unknown field")

    sections: dict[str, object] = {}
    for name, cls in _SECTION_TYPES.items():
        try:
            sections[name] = cls(**section_values[name])
        except (TypeError, ValueError) as exc:
            problems.append(f"{source}:{name}: {exc}")
    for f in dataclasses.fields(EngineConfig):
        if f.name in _SECTION_TYPES or f.name in provenance:
            continue
        provenance.setdefault(f.name, "default")
    for name, cls in _SECTION_TYPES.items():
        for cf in dataclasses.fields(cls):
            provenance.setdefault(f"{name}.{cf.name}", "default")

    if problems:
        raise ConfigError(problems)

    try:
        config = EngineConfig(**sections, **scalar_values)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise ConfigError([f"{source}: {exc}"]) from exc
    return config, provenance


def describe_config(config: EngineConfig, provenance: dict[str, str] | None = None) -> str:
    """Human-readable dump of every resolved value with its provenance."""
    provenance = provenance or {}
    lines = []
    for key in ("control_rate_hz", "raw_p_noise_std"):
        origin = provenance.get(key, "default")
        lines.append(f"{key} = {getattr(config, key)} ({origin})")
    for name in _SECTION_TYPES:
        sub = getattr(config, name)
        for f in dataclasses.fields(sub):
            qualified = f"{name}.{f.name}"
            origin = provenance.get(qualified, "default")
            lines.append(f"{qualified} = {getattr(sub, f.name)} ({origin})")
    return "\n".join(lines)
