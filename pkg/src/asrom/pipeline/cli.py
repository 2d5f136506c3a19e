"""Command-line entry point.

    asrom mesh|morph|train-as|train-rom|evaluate --config PATH [options]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys

from ..errors import ConfigError, NumericalError
from . import stages
from .config import load_config


def _parse_mu(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse --mu value {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="asrom",
        description=(
            "Parameter-space reduction plus reduced-order flow modeling "
            "on a morphable bifurcation channel"
        ),
    )
    parser.add_argument(
        "stage",
        choices=["mesh", "morph", "train-as", "train-rom", "evaluate"],
    )
    parser.add_argument("--config", required=True, help="JSON study config")
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument(
        "--variant",
        choices=["rom", "rom_as"],
        default="rom",
        help="training variant for train-rom",
    )
    parser.add_argument(
        "--synthetic-qoi",
        default=None,
        metavar="NAME",
        help="replace the flow solver with an analytic response (train-as)",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="override the stage's primary seed"
    )
    parser.add_argument(
        "--mu",
        default=None,
        help="comma-separated parameter vector for a single morph",
    )
    return parser


_STAGE_SEED_KEY = {
    "morph": "as_train",
    "train-as": "as_train",
    "evaluate": "test",
}


def run(argv=None):
    args = build_parser().parse_args(argv)
    config = load_config(args.config)
    outdir = args.out or config.output_dir
    if args.seed is not None:
        if args.stage == "train-rom":
            key = "rom_full" if args.variant == "rom" else "rom_active"
        else:
            key = _STAGE_SEED_KEY.get(args.stage)
        if key is not None:
            config.seeds[key] = args.seed

    if args.stage == "mesh":
        outputs = stages.cmd_mesh(config, outdir)
    elif args.stage == "morph":
        mu = _parse_mu(args.mu) if args.mu is not None else None
        outputs = stages.cmd_morph(config, outdir, mu=mu)
    elif args.stage == "train-as":
        outputs = stages.cmd_train_as(config, outdir, synthetic=args.synthetic_qoi)
    elif args.stage == "train-rom":
        outputs = stages.cmd_train_rom(config, outdir, variant=args.variant)
    else:
        outputs = stages.cmd_evaluate(config, outdir)
    for p in outputs:
        print(p)
    return 0


def main(argv=None):
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
