"""Command-line entry points: render scenarios, validate configs, serve live."""

from __future__ import annotations

import argparse
import os
import sys

from .analysis import spectrogram, write_spectrogram_csv
from .audiofile import write_wav_samples
from .config import ConfigError, default_config, describe_config, load_config
from .pipeline import run_scenario, write_events_log, write_trace_csv
from .scenario import ScenarioError, bundled_scenario, load_scenario


def _load_config_arg(path: str | None):
    if path is None:
        return default_config(), {}
    return load_config(path)


def _load_scenario_arg(ref: str):
    if os.path.exists(ref):
        return load_scenario(ref)
    return bundled_scenario(ref)


def cmd_render(args: argparse.Namespace) -> int:
    try:
        config, _ = _load_config_arg(args.config)
        scenario = _load_scenario_arg(args.scenario)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ScenarioError) as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1

    trace = run_scenario(scenario, config, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    wav_path = os.path.join(args.out, "out.wav")
    write_wav_samples(trace.samples, wav_path, trace.sample_rate)
    write_trace_csv(trace, os.path.join(args.out, "trace.csv"))
    write_events_log(trace, os.path.join(args.out, "events.log"))
    spec = spectrogram(trace.samples, trace.sample_rate)
    write_spectrogram_csv(spec, os.path.join(args.out, "spectrogram.csv"))
    print(
        f"rendered {len(trace.samples) / trace.sample_rate:.2f} s "
        f"({len(trace.rows)} control frames, {len(trace.events)} events) -> {args.out}/"
    )
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    try:
        config, provenance = load_config(args.config)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print("invalid", file=sys.stderr)
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1
    print(describe_config(config, provenance))
    print("valid")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        config, _ = _load_config_arg(args.config)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1

    import uvicorn

    from .server import create_app

    ui_dir = args.ui_dir
    if ui_dir is not None and not os.path.isdir(ui_dir):
        print(f"error: --ui-dir {ui_dir} is not a directory", file=sys.stderr)
        return 1
    app = create_app(config, capture_wav=args.capture_wav, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intone",
        description="Sonification engine: intention probabilities in, sound and behavior out.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="run a scenario offline and write artifacts")
    p_render.add_argument("scenario", help="scenario file path or bundled scenario name")
    p_render.add_argument("--config", help="engine config file (defaults apply if omitted)")
    p_render.add_argument("--out", default="out", help="output directory (default: out)")
    p_render.add_argument(
        "--seed", type=int, default=None,
        help="RNG seed; only relevant when raw_p_noise_std > 0 in the config",
    )
    p_render.set_defaults(func=cmd_render)

    p_serve = sub.add_parser("serve", help="run the live websocket service")
    p_serve.add_argument("--config", help="engine config file")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument(
        "--capture-wav", default=None,
        help="also write the session's rendered audio to this WAV on shutdown",
    )
    p_serve.add_argument(
        "--ui-dir", default=None,
        help="serve a built studio frontend (directory with index.html) at /",
    )
    p_serve.set_defaults(func=cmd_serve)

    p_check = sub.add_parser("check", help="validate a config and print resolved values")
    p_check.add_argument("config", help="engine config file")
    p_check.set_defaults(func=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
