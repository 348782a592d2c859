"""Command-line entry point.

    simulate timetrace|power-sweep|atom-sweep|beta-fit|custom
        [--config FILE] [--seed U64] [--out DIR] [--samples INT]
        [--dt NS] [--format csv|json]

Exit codes: 0 success, 2 configuration error, 3 numerical-invariant
violation. The JSON config document mirrors ScenarioConfig; unknown keys are
rejected. Command-line options override the config file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, NumericalInvariantError
from .experiments import SCENARIOS, ScenarioConfig, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Propagate probe pulses through a waveguide-coupled atom chain",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", type=Path, help="JSON scenario configuration")
        p.add_argument("--seed", type=int, help="override the random seed (unsigned 64-bit)")
        p.add_argument("--out", type=Path, help="override the output directory")
        p.add_argument("--samples", type=int, help="override the Monte Carlo sample count")
        p.add_argument("--dt", type=float, help="override the grid step in ns")
        p.add_argument("--format", choices=("csv", "json"), help="output file format")
    return parser


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    doc: dict = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {args.config}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON ({exc})") from None
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.out is not None:
        doc["out_dir"] = str(args.out)
    if args.samples is not None:
        doc["n_samples"] = args.samples
    if args.dt is not None:
        grid = dict(doc.get("grid", {}))
        grid["dt"] = args.dt
        doc["grid"] = grid
    if args.format is not None:
        doc["format"] = args.format
    return ScenarioConfig.from_dict(doc, scenario=args.scenario)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        run_scenario(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalInvariantError as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    print(f"wrote {cfg.scenario} outputs to {cfg.out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
