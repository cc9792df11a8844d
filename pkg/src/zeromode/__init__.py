import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn, cast

from pydantic import ValidationError

from . import config
from .commands import COMMANDS, Parameters, RunConfig, Subcommand, run
from .config import OutputFormat
from .errors import InvalidArgumentError, InvariantViolationError, ZeromodeError


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise InvalidArgumentError(f"{self.prog}: {message}")


# parameter name -> (flag, add_argument options)
FLAGS: dict[str, tuple[str, dict[str, Any]]] = {
    "R": ("--R", {"type": float, "help": "theta modulus, tau = iR (inf for the limit)"}),
    "R_scan": ("--R-scan", {"metavar": "MIN:MAX:STEPS[:log]"}),
    "level": ("--level", {"type": float}),
    "rank": ("--rank", {"type": int, "help": "rank of the type A root system"}),
    "lam": ("--lambda", {"type": float, "nargs": "+", "metavar": "LAMBDA0"}),
    "x": ("--x", {"type": float}),
    "x0": ("--x0", {"type": float}),
    "p": ("--p", {"type": float}),
    "n": ("--n", {"type": int, "help": "index of the product factor"}),
    "alpha": ("--alpha", {"type": float}),
    "r": ("--r", {"type": float, "nargs": "+"}),
    "r_max": ("--r-max", {"type": float}),
    "grid_points": ("--grid-points", {"type": int}),
    "tol": ("--tol", {"type": float}),
    "max_terms": ("--max-terms", {"type": int}),
    "parity": ("--parity", {"choices": ["odd", "even"]}),
    "suite": (
        "--suite",
        {
            "choices": [
                "theta",
                "lemmas",
                "transforms",
                "densities",
                "positivity",
                "geometry",
                "spectrum",
                "all",
            ]
        },
    ),
    "metric": ("--metric", {"choices": ["identity", "harish-chandra", "stenzel"]}),
    "k": ("--k", {"type": float, "nargs": "+"}),
    "depth": ("--depth", {"type": float, "help": "well depth V0 = s(s + 1)"}),
}

# names the subcommands are also known by
ALIASES: dict[Subcommand, list[str]] = {
    "fourier-reciprocal": ["lemma411"],
    "fourier-kernel": ["lemma421"],
}

common = ArgumentParser(add_help=False)
common.add_argument("--output", choices=["csv", "json"])
common.add_argument("--out", type=Path)
common.add_argument("-v", "--verbose", action="count", default=0)

parser = ArgumentParser(prog="zeromode")
subparsers = parser.add_subparsers(dest="subcommand", required=True)
for name, command in COMMANDS.items():
    subparser = subparsers.add_parser(
        name, aliases=ALIASES.get(name, []), parents=[common], help=command.help
    )
    subparser.set_defaults(subcommand=name)
    for parameter in sorted(command.parameters, key=list(FLAGS).index):
        flag, options = FLAGS[parameter]
        subparser.add_argument(flag, dest=parameter, **options)
subparsers.add_parser("schema", parents=[common], help="JSON schema of the report format")


def _log_level(verbosity: int) -> int:
    match verbosity:
        case 0:
            return logging.WARNING
        case 1:
            return logging.INFO
        case _:
            return logging.DEBUG


def _run_config(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    given = {
        name: value
        for name in Parameters.model_fields
        if (value := values.get(name)) is not None
    }
    output = cast(OutputFormat | None, args.output)
    return RunConfig(
        subcommand=cast(Subcommand, args.subcommand),
        parameters=Parameters.model_validate(given),
        output_format=output if output is not None else config.get_config().output.format,
        output_path=cast(Path | None, args.out),
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parser.parse_args(argv)
        verbosity = cast(int, args.verbose)
        logging.basicConfig(
            level=_log_level(verbosity),
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
        return run(_run_config(args))
    except ValidationError as e:
        print(f"zeromode: invalid arguments\n{e}", file=sys.stderr)
        return 1
    except InvariantViolationError as e:
        witness = ", ".join(f"{key}={value:.6g}" for key, value in e.witness.items())
        print(f"zeromode: {e} ({witness})", file=sys.stderr)
        return e.exit_code
    except ZeromodeError as e:
        print(f"zeromode: {e}", file=sys.stderr)
        return e.exit_code

