"""Command-line entry point: config-driven runs, canonical sweeps, enumeration.

Config files are INI-style key=value sections (see README for the schema).
Every results CSV is written together with a plain-text manifest recording
the resolved configuration, tool version and wall-clock bounds.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import datetime
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from .algorithms import ALGORITHM_NAMES, format_trace
from .channel import ChannelConfig
from .montecarlo import (
    CSV_HEADER,
    DEFAULT_THRESHOLD_GRID_DB,
    ExperimentConfig,
    csv_row,
    enumerate_exact,
    run_experiment,
    run_sweep,
    simulate_trial_outcome,
)
from .oracle import ORACLE_KINDS, OracleSpec

__all__ = ["ConfigError", "parse_config", "main"]

_VERSION = "0.1.0"

REPRODUCE_ALGORITHMS = ("agtba", "hgtba1", "hgtba2", "hgtba3", "hes")
DURATION_SWEEP_N = (8.0, 16.0, 32.0, 64.0, 128.0)
FIGURE_IDS = ("fig-duration-m2", "fig-duration-m4", "fig-threshold")
DEFAULT_REPRODUCE_TRIALS = 20_000
DEFAULT_REPRODUCE_SEED = 20_240


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


_CHANNEL_FIELDS = {f.name: f.type for f in dataclasses.fields(ChannelConfig)}


def _get_required(section: configparser.SectionProxy, key: str, section_name: str) -> str:
    if key not in section:
        raise ConfigError(f"missing required config key '{key}' in [{section_name}]")
    return section[key]


def _parse_typed(raw: str, key: str, kind):
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"config key '{key}': cannot parse {raw!r}") from exc


def _parse_channel(parser: configparser.ConfigParser) -> ChannelConfig:
    if not parser.has_section("channel"):
        return ChannelConfig()
    overrides = {}
    for key, raw in parser["channel"].items():
        if key not in _CHANNEL_FIELDS:
            raise ConfigError(f"unknown config key '{key}' in [channel]")
        if key == "n_rx_antennas":
            overrides[key] = _parse_typed(raw, key, int)
        elif key in ("pathloss_los", "pathloss_nlos"):
            parts = [p.strip() for p in raw.split(",")]
            if len(parts) != 3:
                raise ConfigError(f"config key '{key}': expected three comma-separated values")
            overrides[key] = tuple(_parse_typed(p, key, float) for p in parts)
        else:
            overrides[key] = _parse_typed(raw, key, float)
    try:
        return ChannelConfig(**overrides)
    except ValueError as exc:
        raise ConfigError(f"invalid [channel] configuration: {exc}") from exc


def _parse_oracle(parser: configparser.ConfigParser, kind: str) -> OracleSpec:
    if kind not in ORACLE_KINDS:
        raise ConfigError(f"config key 'oracle': must be one of {ORACLE_KINDS}, got {kind!r}")
    try:
        if kind == "bernoulli":
            if not parser.has_section("bernoulli"):
                raise ConfigError("oracle 'bernoulli' requires a [bernoulli] section")
            section = parser["bernoulli"]
            p_md = _parse_typed(_get_required(section, "p_md", "bernoulli"), "p_md", float)
            p_fa = _parse_typed(_get_required(section, "p_fa", "bernoulli"), "p_fa", float)
            return OracleSpec(kind="bernoulli", p_md=p_md, p_fa=p_fa)
        if kind == "energy":
            if not parser.has_section("energy"):
                raise ConfigError("oracle 'energy' requires an [energy] section")
            section = parser["energy"]
            threshold = _parse_typed(
                _get_required(section, "threshold_db", "energy"), "threshold_db", float
            )
            return OracleSpec(kind="energy", threshold_db=threshold)
        return OracleSpec(kind="noiseless")
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def parse_config(path: str | Path) -> list[ExperimentConfig]:
    """Parse an experiment config file into one config per listed algorithm."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if not parser.has_section("experiment"):
        raise ConfigError("missing [experiment] section")
    exp = parser["experiment"]

    algorithms = [a.strip() for a in _get_required(exp, "algorithm", "experiment").split(",") if a.strip()]
    if not algorithms:
        raise ConfigError("config key 'algorithm': no algorithm names given")
    for name in algorithms:
        if name not in ALGORITHM_NAMES:
            raise ConfigError(
                f"config key 'algorithm': unknown algorithm {name!r}, expected one of {ALGORITHM_NAMES}"
            )
    oracle = _parse_oracle(parser, _get_required(exp, "oracle", "experiment"))
    n_intervals = _parse_typed(_get_required(exp, "n_intervals", "experiment"), "n_intervals", int)
    m_paths = _parse_typed(_get_required(exp, "m_paths", "experiment"), "m_paths", int)
    n_trials = _parse_typed(_get_required(exp, "n_trials", "experiment"), "n_trials", int)
    seed = _parse_typed(_get_required(exp, "seed", "experiment"), "seed", int)

    distinct = None
    if "distinct_intervals" in exp:
        try:
            distinct = exp.getboolean("distinct_intervals")
        except ValueError as exc:
            raise ConfigError("config key 'distinct_intervals': expected a boolean") from exc

    sweep = None
    has_param = "sweep_param" in exp
    has_values = "sweep_values" in exp
    if has_param != has_values:
        raise ConfigError("config keys 'sweep_param' and 'sweep_values' must be given together")
    if has_param:
        param = exp["sweep_param"].strip()
        values = tuple(
            _parse_typed(v.strip(), "sweep_values", float)
            for v in exp["sweep_values"].split(",")
            if v.strip()
        )
        sweep = (param, values)

    channel = _parse_channel(parser)

    configs = []
    for name in algorithms:
        try:
            configs.append(
                ExperimentConfig(
                    n_intervals=n_intervals,
                    m_paths=m_paths,
                    algorithm=name,
                    oracle=oracle,
                    n_trials=n_trials,
                    seed=seed,
                    distinct_intervals=distinct,
                    sweep=sweep,
                    channel=channel,
                )
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return configs


def _utcnow() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _write_text_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flatten(prefix: str, value) -> list[str]:
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        lines = []
        for field in dataclasses.fields(value):
            lines.extend(_flatten(f"{prefix}.{field.name}", getattr(value, field.name)))
        return lines
    if isinstance(value, (tuple, list)):
        return [f"{prefix}={';'.join(str(v) for v in value)}"]
    return [f"{prefix}={value}"]


def _write_manifest(
    path: Path, configs: list[ExperimentConfig], outputs: list[Path], started: str, finished: str
) -> None:
    lines = [
        f"tool_version={_VERSION}",
        f"started_utc={started}",
        f"finished_utc={finished}",
    ]
    for output in outputs:
        lines.append(f"output={output.name}")
    for i, config in enumerate(configs):
        prefix = f"config{i}" if len(configs) > 1 else "config"
        lines.extend(_flatten(prefix, config))
    _write_text_atomic(path, "\n".join(lines) + "\n")


def _rows_for(config: ExperimentConfig, workers: int) -> list[str]:
    if config.sweep is None:
        summary = run_experiment(config, workers=workers)
        return [
            csv_row(
                config.algorithm,
                config.oracle,
                config.n_intervals,
                config.m_paths,
                "",
                None,
                summary,
                config.seed,
            )
        ]
    param, _ = config.sweep
    rows = []
    for value, summary in run_sweep(config, workers=workers):
        n_point = int(value) if param == "N" else config.n_intervals
        rows.append(
            csv_row(
                config.algorithm,
                config.oracle,
                n_point,
                config.m_paths,
                param,
                value,
                summary,
                config.seed,
            )
        )
    return rows


def cmd_run(args: argparse.Namespace) -> int:
    configs = parse_config(args.config)
    if args.seed is not None:
        configs = [replace(c, seed=args.seed) for c in configs]
    if args.trace and (len(configs) != 1 or configs[0].sweep is not None or configs[0].n_trials != 1):
        raise ConfigError("--trace requires a single algorithm, no sweep, and n_trials = 1")

    started = _utcnow()
    rows = [CSV_HEADER]
    for config in configs:
        rows.extend(_rows_for(config, args.workers))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "results.csv"
    _write_text_atomic(csv_path, "\n".join(rows) + "\n")
    outputs = [csv_path]

    if args.trace:
        _, outcome = simulate_trial_outcome(configs[0], 0)
        trace_path = out_dir / "trace.txt"
        _write_text_atomic(trace_path, format_trace(outcome))
        outputs.append(trace_path)

    _write_manifest(out_dir / "manifest", configs, outputs, started, _utcnow())
    print(f"wrote {csv_path}")
    return 0


def _reproduce_configs(figure: str, trials: int, seed: int) -> list[ExperimentConfig]:
    if figure in ("fig-duration-m2", "fig-duration-m4"):
        m = 2 if figure == "fig-duration-m2" else 4
        return [
            ExperimentConfig(
                n_intervals=int(DURATION_SWEEP_N[-1]),
                m_paths=m,
                algorithm=name,
                oracle=OracleSpec(kind="noiseless"),
                n_trials=trials,
                seed=seed,
                distinct_intervals=True,
                sweep=("N", DURATION_SWEEP_N),
            )
            for name in REPRODUCE_ALGORITHMS
        ]
    if figure == "fig-threshold":
        return [
            ExperimentConfig(
                n_intervals=64,
                m_paths=2,
                algorithm=name,
                oracle=OracleSpec(kind="energy", threshold_db=DEFAULT_THRESHOLD_GRID_DB[0]),
                n_trials=trials,
                seed=seed,
                distinct_intervals=False,
                sweep=("threshold_db", DEFAULT_THRESHOLD_GRID_DB),
            )
            for name in REPRODUCE_ALGORITHMS
        ]
    raise ConfigError(f"unknown figure id {figure!r}")


def _figure_spec(figure: str) -> dict:
    y_column = "mean_duration" if figure.startswith("fig-duration") else "mean_detected"
    return {
        "csv": f"{figure}.csv",
        "x": "param_value",
        "y": y_column,
        "group_by": "algorithm",
        "log_x": figure.startswith("fig-duration"),
        "out": f"{figure}.png",
        "title": figure,
    }


def cmd_reproduce(args: argparse.Namespace) -> int:
    configs = _reproduce_configs(args.figure, args.trials, args.seed)
    started = _utcnow()
    rows = [CSV_HEADER]
    for config in configs:
        rows.extend(_rows_for(config, args.workers))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{args.figure}.csv"
    _write_text_atomic(csv_path, "\n".join(rows) + "\n")
    spec_path = out_dir / f"{args.figure}.figspec.json"
    _write_text_atomic(spec_path, json.dumps(_figure_spec(args.figure), indent=2) + "\n")
    _write_manifest(
        out_dir / f"{args.figure}.manifest", configs, [csv_path, spec_path], started, _utcnow()
    )
    print(f"wrote {csv_path}")
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    try:
        mean = enumerate_exact(args.n, args.m, args.algorithm)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"n={args.n} m={args.m} algorithm={args.algorithm} mean_duration_slots={mean}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtba",
        description="Group-testing based beam alignment experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run the experiment described by a config file")
    run_parser.add_argument("config", help="path to the INI-style experiment config")
    run_parser.add_argument("--out", default="out", help="output directory (default: out)")
    run_parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_parser.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    run_parser.add_argument("--trace", action="store_true", help="dump the per-slot trace (n_trials=1)")
    run_parser.set_defaults(func=cmd_run)

    rep_parser = sub.add_parser("reproduce", help="run a canonical figure sweep")
    rep_parser.add_argument("figure", choices=FIGURE_IDS)
    rep_parser.add_argument("--out", default="out", help="output directory (default: out)")
    rep_parser.add_argument(
        "--trials", type=int, default=DEFAULT_REPRODUCE_TRIALS,
        help=f"trials per point (default: {DEFAULT_REPRODUCE_TRIALS})",
    )
    rep_parser.add_argument("--seed", type=int, default=DEFAULT_REPRODUCE_SEED)
    rep_parser.add_argument("--workers", type=int, default=1)
    rep_parser.set_defaults(func=cmd_reproduce)

    enum_parser = sub.add_parser("enumerate", help="exact noiseless mean duration by enumeration")
    enum_parser.add_argument("--n", type=int, required=True, help="number of angular intervals")
    enum_parser.add_argument("--m", type=int, required=True, help="number of paths")
    enum_parser.add_argument("--algorithm", required=True, choices=ALGORITHM_NAMES)
    enum_parser.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
