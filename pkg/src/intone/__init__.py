"""intone: sound, light, and arm behavior from interaction-intention signals.

The engine smooths per-user intention probabilities, runs a hysteresis
engagement state machine, maps the selected user's signal to volume, pitch,
and vibrato through piecewise-linear transfer functions, and renders the
result with a block-based sine synthesizer. A scenario simulator, CLI, and
websocket streaming service wrap the core.
"""

from .behavior import (
    ActuatorEvent,
    EngagementFsm,
    EngagementState,
    EventKind,
    FsmConfig,
    LedCommand,
    Phase,
    led_for,
    select_target,
)
from .config import ConfigError, EngineConfig, default_config, load_config
from .mapping import MapConfig, SoundParams, compute_params, map_frequency, map_vibrato, map_volume
from .scenario import (
    ActorScript,
    IntentionModelConfig,
    Scenario,
    ScenarioError,
    bundled_scenario,
    load_scenario,
    synth_intention,
)
from .synth import AudioBlock, Synth, SynthConfig
from .tracking import (
    IntentionSample,
    IntentionTracker,
    SmoothedSignal,
    TrackerConfig,
    ema_update,
    estimate_rate,
)

__version__ = "0.1.0"

__all__ = [
    "ActorScript",
    "ActuatorEvent",
    "AudioBlock",
    "ConfigError",
    "EngagementFsm",
    "EngagementState",
    "EngineConfig",
    "EventKind",
    "FsmConfig",
    "IntentionModelConfig",
    "IntentionSample",
    "IntentionTracker",
    "LedCommand",
    "MapConfig",
    "Phase",
    "Scenario",
    "ScenarioError",
    "SmoothedSignal",
    "SoundParams",
    "Synth",
    "SynthConfig",
    "TrackerConfig",
    "bundled_scenario",
    "compute_params",
    "default_config",
    "ema_update",
    "estimate_rate",
    "led_for",
    "load_config",
    "load_scenario",
    "map_frequency",
    "map_vibrato",
    "map_volume",
    "select_target",
    "synth_intention",
]
