"""Command-line entry point: ``peskin <subcommand> [flags]``.

Settings are merged in the order built-in defaults, then ``--config`` (INI
with sections ``[experiment]``, ``[sim]`` and ``[initial]``), then flags.
``PESKIN_OUTPUT_DIR`` replaces the output directory from the config file but
not an explicit ``--output-dir``.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
from pathlib import Path

from .dynamics import SimConfig
from .errors import ConfigError, DegeneracyError
from .experiments import (
    EXIT_CONFIG,
    EXIT_DEGENERATE,
    ExperimentSpec,
    InitialCondition,
    run_experiment,
)

SUBCOMMANDS = {
    "simulate": "simulate",
    "check-operators": "operator-checks",
    "check-stationarity": "stationarity",
    "check-equivalence": "equivalence",
    "fit-decay": "decay",
    "check-smoothing": "smoothing",
    "check-stability": "stability",
    "toy": "toy-scaling",
    "norms": "norms",
}

# per-kind defaults that differ from SimConfig's
KIND_DEFAULTS = {
    "decay": {"t_final": 10.0, "diag_every": 10, "save_every": 10},
    "stability": {"n": 64},
    "toy-scaling": {"n": 64, "dt": 0.01},
    "operator-checks": {"n": 64},
}
SIM_FIELDS = {
    "n": int, "m": int, "dt": float, "t_final": float, "integrator": str, "eps_prime": float,
    "seed": int, "save_every": int, "diag_every": int,
}


def parse_floats(text: str, count: int | None = None) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc
    if count is not None and len(vals) != count:
        raise ConfigError(f"expected {count} numbers, got {text!r}")
    return vals


def parse_modes(text: str) -> list:
    """``"n:axc,axs,ayc,ays; ..."`` into mode tuples."""
    modes = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        head, sep, tail = chunk.partition(":")
        if not sep:
            raise ConfigError(f"mode entry {chunk!r} lacks 'n:'")
        try:
            k = int(head)
        except ValueError as exc:
            raise ConfigError(f"bad mode number in {chunk!r}") from exc
        modes.append((k, *parse_floats(tail, 4)))
    return modes


def read_config(path) -> dict:
    """Flatten an INI file into ``{"sim": {...}, "initial": {...}, "experiment": {...}}``."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    unknown = set(parser.sections()) - {"experiment", "sim", "initial"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    out = {name: dict(parser[name]) if parser.has_section(name) else {} for name in ("experiment", "sim", "initial")}
    bad = set(out["sim"]) - set(SIM_FIELDS)
    if bad:
        raise ConfigError(f"unknown [sim] keys: {sorted(bad)}")
    return out


def build_spec(kind: str, args: argparse.Namespace, environ=os.environ) -> ExperimentSpec:
    cfg = read_config(args.config) if args.config else {"experiment": {}, "sim": {}, "initial": {}}
    sim = dict(KIND_DEFAULTS.get(kind, {}))
    for key, value in cfg["sim"].items():
        try:
            sim[key] = SIM_FIELDS[key](value)
        except ValueError as exc:
            raise ConfigError(f"[sim] {key}: {exc}") from exc
    for key in SIM_FIELDS:
        flag = getattr(args, key, None)
        if flag is not None:
            sim[key] = flag
    config = SimConfig(**sim)

    ini = cfg["initial"]
    circle = args.circle or ini.get("circle")
    modes = args.modes if args.modes is not None else ini.get("modes")
    field_file = args.field_file or ini.get("field_file")
    initial = InitialCondition(
        circle=parse_floats(circle, 4) if circle else (1.0, 0.0, 0.0, 0.0),
        modes=parse_modes(modes) if modes else [],
        field_file=field_file,
    )
    if kind == "decay" and not initial.modes and not field_file:
        initial.modes = [(2, 0.05, 0.0, 0.0, 0.05)]

    output = args.output_dir or environ.get("PESKIN_OUTPUT_DIR") or cfg["experiment"].get("output_dir") or "peskin_out"
    window = args.window or cfg["experiment"].get("window")
    return ExperimentSpec(kind, config, initial, Path(output), parse_floats(window, 2) if window else (2.0, 8.0))


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="peskin", description="Peskin-problem experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=f"run the {kind} experiment")
        p.add_argument("--config", help="INI file with [experiment], [sim], [initial] sections")
        p.add_argument("--output-dir")
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int, help="alpha quadrature nodes (default 2n)")
        p.add_argument("--dt", type=float)
        p.add_argument("--t-final", type=float)
        p.add_argument("--integrator", choices=("etd1", "etdrk2", "imex-be"))
        p.add_argument("--eps-prime", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--save-every", type=int)
        p.add_argument("--diag-every", type=int)
        p.add_argument("--circle", help="A,B,C1,C2")
        p.add_argument("--modes", help="'n:axc,axs,ayc,ays;...'")
        p.add_argument("--field-file")
        p.add_argument("--window", help="t0,t1 decay-fit window")
    return parser


def main(argv=None, environ=os.environ) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    kind = SUBCOMMANDS[args.command]
    try:
        spec = build_spec(kind, args, environ)
        spec.initial.render(spec.config.n)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code, summary = run_experiment(spec)
    except DegeneracyError as exc:
        print(f"degenerate curve: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    for a in summary["assertions"]:
        tag = "PASS" if a["passed"] else "FAIL"
        print(f"[{tag}] {a['name']}: {a['measured']:.6g} ({a['relation']} {a['tolerance']:.6g})")
    print(f"artifacts in {spec.output_dir}")
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
