"""Tests for config loading, validation paths, and provenance reporting."""

import pytest
import yaml

from intone.config import (
    ConfigError,
    EngineConfig,
    default_config,
    describe_config,
    load_config,
    parse_config,
)


def write_config(tmp_path, doc):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(doc))
    return str(path)


def test_defaults_carry_published_constants():
    cfg = default_config()
    assert cfg.tracker.tau_s == 1.0
    assert cfg.fsm.p_on == 0.85
    assert cfg.fsm.p_off == 0.75
    assert cfg.fsm.release_hold_s == 1.0
    assert cfg.map.p_knee == 0.2
    assert cfg.map.v_base == 0.02
    assert cfg.synth.vibrato_rate_hz == 20.0


def test_empty_file_needs_version(tmp_path):
    path = write_config(tmp_path, {})
    with pytest.raises(ConfigError, match="version"):
        load_config(path)


def test_version_only_gives_defaults(tmp_path):
    cfg, provenance = load_config(write_config(tmp_path, {"version": 1}))
    assert cfg == default_config()
    assert all(origin == "default" for origin in provenance.values())


def test_top_level_constants_route_to_sections(tmp_path):
    doc = {"version": 1, "tau_s": 2.0, "p_on": 0.9, "p_knee": 0.3, "vibrato_rate_hz": 15.0}
    cfg, provenance = load_config(write_config(tmp_path, doc))
    assert cfg.tracker.tau_s == 2.0
    assert cfg.fsm.p_on == 0.9
    assert cfg.map.p_knee == 0.3
    assert cfg.synth.vibrato_rate_hz == 15.0
    assert provenance["tracker.tau_s"] == "file"
    assert provenance["fsm.p_on"] == "file"
    assert provenance["fsm.p_off"] == "default"


def test_nested_section_override(tmp_path):
    doc = {"version": 1, "map": {"f_max_hz": 440.0}}
    cfg, provenance = load_config(write_config(tmp_path, doc))
    assert cfg.map.f_max_hz == 440.0
    assert provenance["map.f_max_hz"] == "file"
    assert provenance["map.f_floor_hz"] == "default"


def test_duplicate_top_level_and_nested_rejected(tmp_path):
    doc = {"version": 1, "tau_s": 2.0, "tracker": {"tau_s": 3.0}}
    with pytest.raises(ConfigError, match="set both"):
        load_config(write_config(tmp_path, doc))


def test_unknown_field_named_with_path(tmp_path):
    doc = {"version": 1, "fsm": {"p_onn": 0.9}}
    with pytest.raises(ConfigError, match=r"fsm\.p_onn"):
        load_config(write_config(tmp_path, doc))


def test_invariant_violation_cites_section(tmp_path):
    doc = {"version": 1, "p_on": 0.7, "p_off": 0.8}
    with pytest.raises(ConfigError, match="p_off < p_on"):
        load_config(write_config(tmp_path, doc))


def test_f_max_below_floor_cites_field(tmp_path):
    doc = {"version": 1, "map": {"f_max_hz": 110.0}}
    with pytest.raises(ConfigError, match="f_floor_hz"):
        load_config(write_config(tmp_path, doc))


def test_non_mapping_document_rejected():
    with pytest.raises(ConfigError, match="mapping"):
        parse_config([1, 2, 3])


def test_describe_config_lists_everything():
    cfg = default_config()
    text = describe_config(cfg, {"fsm.p_on": "file"})
    assert "fsm.p_on = 0.85 (file)" in text
    assert "tracker.tau_s = 1.0 (default)" in text
    assert "map.p_knee = 0.2 (default)" in text
    assert "synth.vibrato_rate_hz = 20.0 (default)" in text


def test_control_rate_validated():
    with pytest.raises(ValueError, match="control_rate_hz"):
        EngineConfig(control_rate_hz=0.0)
