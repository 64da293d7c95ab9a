"""Tests for the render/check/serve command-line interface."""

import os

import pytest
import yaml

from intone.cli import main


def write_yaml(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return str(path)


def test_render_bundled_scenario_writes_artifacts(tmp_path, capsys):
    out = str(tmp_path / "out")
    code = main(["render", "fig5_approach_leave", "--out", out])
    assert code == 0
    for name in ("out.wav", "trace.csv", "events.log", "spectrogram.csv"):
        assert os.path.exists(os.path.join(out, name)), name
    assert "rendered" in capsys.readouterr().out


def test_render_scenario_file(tmp_path):
    doc = {
        "version": 1,
        "duration_s": 1.0,
        "actors": [
            {"id": "a", "mode": "direct_p", "waypoints": [{"t": 0.0, "p": 0.4}]}
        ],
    }
    path = write_yaml(tmp_path, "scene.yaml", doc)
    code = main(["render", path, "--out", str(tmp_path / "out")])
    assert code == 0


def test_render_missing_config_names_path(tmp_path, capsys):
    code = main(
        ["render", "fig5_approach_leave", "--config", "/no/such/config.yaml", "--out", str(tmp_path)]
    )
    assert code != 0
    assert "/no/such/config.yaml" in capsys.readouterr().err


def test_render_invalid_config_cites_invariant(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "bad.yaml", {"version": 1, "p_on": 0.7, "p_off": 0.8})
    code = main(["render", "fig5_approach_leave", "--config", cfg, "--out", str(tmp_path / "o")])
    assert code != 0
    err = capsys.readouterr().err
    assert "bad.yaml" in err
    assert "p_off < p_on" in err


def test_render_malformed_scenario_lists_fields(tmp_path, capsys):
    doc = {
        "version": 1,
        "duration_s": 2.0,
        "actors": [{"id": "a", "mode": "direct_p", "waypoints": [{"t": 0.0, "p": 7}]}],
    }
    path = write_yaml(tmp_path, "bad_scene.yaml", doc)
    code = main(["render", path, "--out", str(tmp_path / "o")])
    assert code != 0
    err = capsys.readouterr().err
    assert "waypoints[0].p" in err


def test_check_valid_config_lists_constants(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "ok.yaml", {"version": 1})
    code = main(["check", cfg])
    assert code == 0
    out = capsys.readouterr().out
    assert "valid" in out
    for needle in (
        "tracker.tau_s = 1.0",
        "fsm.p_on = 0.85",
        "fsm.p_off = 0.75",
        "map.p_knee = 0.2",
        "map.v_base = 0.02",
        "synth.vibrato_rate_hz = 20.0",
    ):
        assert needle in out, needle


def test_check_reports_file_provenance(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "ok.yaml", {"version": 1, "map": {"f_max_hz": 440.0}})
    code = main(["check", cfg])
    assert code == 0
    out = capsys.readouterr().out
    assert "map.f_max_hz = 440.0 (file)" in out
    assert "map.f_floor_hz = 220.0 (default)" in out


def test_check_invalid_config_names_field(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "bad.yaml", {"version": 1, "map": {"f_max_hz": 110.0}})
    code = main(["check", cfg])
    assert code == 1
    err = capsys.readouterr().err
    assert "invalid" in err
    assert "map" in err and "f_floor_hz" in err


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
