#!/usr/bin/env python3
"""
zitterdyn command line.

    zitterdyn <simulate|spectrum|energy|render|verify|sweep> [--config FILE] [flags]

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure
(the error is written to stderr as JSON).
"""

import argparse
import json
import sys
from dataclasses import replace

from . import __version__
from .app import configure_logging, run
from .utils.config import SEED_FAMILIES, load_config, parse_float_list
from .utils.errors import ConfigError, ZitterdynError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text):
    try:
        return parse_float_list(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(e.message) from None


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="config file with [model], [simulate], ... sections")
    common.add_argument("--out", help="primary output path")
    common.add_argument("--threads", type=int, help="worker threads (default: ZITTERDYN_THREADS)")
    common.add_argument("--unit-mode", choices=("dimensionless", "SI"))
    common.add_argument("--d", type=float, help="charge separation (SI mode)")
    common.add_argument("--debug", action="store_true", help="debug logging")

    parser = _Parser(prog="zitterdyn", description="Two-point-charge electron model lab")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", parents=[common], help="propagate a seed history")
    sim.add_argument("--beta", type=float)
    sim.add_argument("--seed-family", choices=SEED_FAMILIES)
    sim.add_argument("--amplitude", type=float, help="perturbation amplitude in units of d")
    sim.add_argument("--width", type=float, help="pulse width in delay intervals")
    sim.add_argument("--seed-delays", type=float, help="seed length in delay intervals")
    sim.add_argument("--delays", type=float, help="propagated length in delay intervals")
    sim.add_argument("--grid-step", type=float, help="grid step in delay intervals")
    sim.add_argument("--mode-index", type=int)
    sim.add_argument("--seed-file", help="seed trajectory CSV (t, x, v, a columns)")
    sim.add_argument("--seed", type=int, help="random seed for the mode phase")

    spectrum = sub.add_parser("spectrum", parents=[common], help="certified characteristic roots")
    spectrum.add_argument("--beta", type=_float_list, help="one velocity or a comma-separated list")
    spectrum.add_argument("--box", help="re_min,re_max,im_min,im_max")
    spectrum.add_argument("--grid-density", type=int)

    energy = sub.add_parser("energy", parents=[common], help="energy decomposition table")
    energy.add_argument("--beta", type=_float_list)
    energy.add_argument("--bdot", type=_float_list)
    energy.add_argument("--n-terms", type=int)

    render = sub.add_parser("render", parents=[common], help="domain-coloring image (PPM)")
    render.add_argument("--beta", type=float)
    render.add_argument("--box", help="re_min,re_max,im_min,im_max")
    render.add_argument("--res", type=int, help="image width in pixels")
    render.add_argument("--roots", help="root JSON written by spectrum or sweep")

    sweep = sub.add_parser("sweep", parents=[common], help="root sets over several velocities")
    sweep.add_argument("--beta", type=_float_list)
    sweep.add_argument("--box", help="search box")
    sweep.add_argument("--grid-density", type=int)
    sweep.add_argument("--render-box", help="box of the composite image")
    sweep.add_argument("--res", type=int)

    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return parser


def config_from_args(args):
    """File configuration overridden by the command-line flags."""
    config = load_config(args.config)
    config = config.with_group("model", d=args.d, unit_mode=args.unit_mode)
    config = config.with_group("output", out=args.out, threads=args.threads)

    if args.command == "simulate":
        config = config.with_group("simulate", beta=args.beta, seed_family=args.seed_family,
                                   amplitude=args.amplitude, width=args.width,
                                   seed_delays=args.seed_delays, delays=args.delays,
                                   grid_step=args.grid_step, mode_index=args.mode_index,
                                   seed_file=args.seed_file)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
    elif args.command in ("spectrum", "sweep"):
        config = config.with_group("spectrum", betas=args.beta, box=args.box, grid_density=args.grid_density)
        if args.command == "sweep":
            config = config.with_group("render", box=args.render_box, resolution=args.res)
    elif args.command == "energy":
        config = config.with_group("energy", betas=args.beta, bdots=args.bdot, n_terms=args.n_terms)
    elif args.command == "render":
        config = config.with_group("render", beta=args.beta, box=args.box, resolution=args.res, roots=args.roots)
    return config.validate()


# flags whose values may start with a minus sign ("--box -15,15,-15,15")
VALUE_FLAGS = ("--box", "--render-box", "--beta", "--bdot", "--amplitude")


def _join_signed_values(argv):
    joined = []
    k = 0
    while k < len(argv):
        token = argv[k]
        following = argv[k + 1] if k + 1 < len(argv) else None
        if (token in VALUE_FLAGS and following is not None and following.startswith("-")
                and following[1:2] in tuple("0123456789.")):
            joined.append(f"{token}={following}")
            k += 2
            continue
        joined.append(token)
        k += 1
    return joined


def _report(error, stream):
    stream.write(json.dumps(error.to_dict(), sort_keys=True) + "\n")


def cli_main(argv=None):
    """
    Parse argv, run the subcommand and map the outcome to an exit code.
    """
    argv = _join_signed_values(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"{parser.prog}: error: {e}\n")
        return EXIT_USAGE

    configure_logging(args.debug)
    try:
        config = config_from_args(args)
    except ConfigError as e:
        _report(e, sys.stderr)
        return EXIT_USAGE

    try:
        result = run(args.command, config)
    except ConfigError as e:
        _report(e, sys.stderr)
        return EXIT_USAGE
    except ZitterdynError as e:
        _report(e, sys.stderr)
        return EXIT_NUMERICAL

    if args.command == "verify":
        passed, table = result
        sys.stdout.write(table + "\n")
        return EXIT_OK if passed else EXIT_NUMERICAL
    return EXIT_OK


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
