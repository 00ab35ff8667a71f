"""
Command-line front end.

Each subcommand is a :class:`Command` subclass registered by its
:class:`CommandName`; ``main`` builds one argparse subparser per registered
command and writes the result through the writer registered for ``--out``.

Exit codes: 0 on success, 1 for bad input (malformed JSON, discontinuous
pieces, invalid spline data, unknown flags), 2 for internal contract
violations.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import ClassVar

from metaclass_registry import AutoRegisterMeta

from . import __version__
from .codec import (
    components_document,
    dump_piecewise,
    dump_samples,
    level_document,
    level_rows,
    majorant_rows,
    mesh_document,
    parse_piecewise,
    parse_samples,
    partition_document,
    read_document,
)
from .config import CLI_DEFAULTS, CommandOutput, OutputConfig
from .constants import LEVEL_CSV_HEADER, MAJORANT_CSV_HEADER, CommandName, OutputFormat
from .datasets import example1, example2_problem
from .exceptions import ContractViolation, InputFormatError
from .hull import compare
from .majorant import TraceSink, least_concave_majorant
from .partition import global_max, refine
from .poly import check_continuity
from .spline import certify, clamped_spline, mesh_for_tolerance, mesh_norm

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the input-error code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _load_piecewise(path: str):
    pw = parse_piecewise(read_document(path))
    check_continuity(pw)
    return pw


class Command(ABC, metaclass=AutoRegisterMeta):
    """One CLI subcommand."""

    __registry_key__ = "command"
    __skip_if_no_key__ = True
    __registry__: ClassVar[dict[CommandName, type[Command]]] = {}

    command: ClassVar[CommandName | None] = None
    summary: ClassVar[str] = ""

    @classmethod
    def configure(cls, parser: argparse.ArgumentParser) -> None:
        """Add command-specific arguments."""

    @abstractmethod
    def run(self, args: argparse.Namespace, trace: TraceSink | None) -> CommandOutput:
        """Execute the command and return its output."""


class ComponentsCommand(Command):
    command = CommandName.COMPONENTS
    summary = "component intervals of the least concave majorant"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("input", help="piecewise cubic JSON document")

    def run(self, args, trace):
        result = least_concave_majorant(_load_piecewise(args.input), trace=trace)
        return CommandOutput(
            document=components_document(result),
            header=("alpha", "beta"),
            rows=tuple(result.components),
        )


class MajorantCommand(Command):
    command = CommandName.MAJORANT
    summary = "assembled majorant, or sampled x,F,Fhat,level rows with --out csv"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("input", help="piecewise cubic JSON document")
        parser.add_argument("--samples", type=_positive_int, default=CLI_DEFAULTS.samples)

    def run(self, args, trace):
        result = least_concave_majorant(_load_piecewise(args.input), trace=trace)
        document = {
            "components": [list(c) for c in result.components],
            **dump_piecewise(result.majorant),
        }
        return CommandOutput(
            document=document,
            header=MAJORANT_CSV_HEADER,
            rows=majorant_rows(result, args.samples),
        )


class LevelCommand(Command):
    command = CommandName.LEVEL
    summary = "level function (derivative of the majorant)"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("input", help="piecewise cubic JSON document")
        parser.add_argument("--samples", type=_positive_int, default=CLI_DEFAULTS.samples)

    def run(self, args, trace):
        result = least_concave_majorant(_load_piecewise(args.input), trace=trace)
        return CommandOutput(
            document=level_document(result),
            header=LEVEL_CSV_HEADER,
            rows=level_rows(result, args.samples),
        )


class PartitionCommand(Command):
    command = CommandName.PARTITION
    summary = "refined cells with monotonicity and curvature classes"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("input", help="piecewise cubic JSON document")

    def run(self, args, trace):
        pw = _load_piecewise(args.input)
        return CommandOutput(document=partition_document(refine(pw, pw.domain), global_max(pw)))


class SplineCommand(Command):
    command = CommandName.SPLINE
    summary = "clamped cubic spline through a samples document"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("input", help='samples JSON document {"nodes": [...], "values": [...]}')
        parser.add_argument("--clamp-left", type=float, default=None)
        parser.add_argument("--clamp-right", type=float, default=None)
        parser.add_argument("--g4", type=float, default=None, help="bound on |G''''|")

    def run(self, args, trace):
        prob = parse_samples(read_document(args.input), args.clamp_left, args.clamp_right, args.g4)
        document = dump_piecewise(clamped_spline(prob))
        if prob.m4_bound > 0:
            norm_h = mesh_norm(prob.nodes)
            cert = certify(prob, norm_h)
            document["certificate"] = {"norm_h": norm_h, "deriv_bound": cert.deriv_bound}
        return CommandOutput(document=document)


class BoundCommand(Command):
    command = CommandName.BOUND
    summary = "mesh norm and cell count for a target slope accuracy"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("--eps", type=float, required=True)
        parser.add_argument("--g4", type=float, required=True)
        parser.add_argument("--length", type=float, required=True)

    def run(self, args, trace):
        plan = mesh_for_tolerance(args.eps, args.g4, args.length)
        return CommandOutput(
            document=mesh_document(plan),
            header=("norm_h", "count"),
            rows=((plan.norm_h, plan.count),),
        )


class CompareCommand(Command):
    command = CommandName.COMPARE
    summary = "compare the exact majorant with a dense grid hull"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("input", help="piecewise cubic JSON document")
        parser.add_argument("--grid", type=_positive_int, default=CLI_DEFAULTS.grid)

    def run(self, args, trace):
        result = least_concave_majorant(_load_piecewise(args.input), trace=trace)
        metrics = compare(result, grid_n=args.grid, threads=args.threads)
        return CommandOutput(document=metrics.as_dict())


class DemoCommand(Command):
    command = CommandName.DEMO
    summary = "print a built-in fixture as JSON"

    @classmethod
    def configure(cls, parser):
        parser.add_argument("fixture", choices=["example1", "example2"])

    def run(self, args, trace):
        if args.fixture == "example1":
            return CommandOutput(document=dump_piecewise(example1()))
        return CommandOutput(document=dump_samples(example2_problem()))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out",
        choices=[fmt.value for fmt in OutputFormat],
        default=CLI_DEFAULTS.output.value,
        help="output format (default: json)",
    )
    common.add_argument("--threads", type=_positive_int, default=CLI_DEFAULTS.threads)
    common.add_argument("--trace", action="store_true", help="JSON-lines march trace on stderr")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="polymajorant", description="Least concave majorants of piecewise cubics")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, cls in Command.__registry__.items():
        cls.configure(sub.add_parser(name.value, parents=[common], help=cls.summary))
    return parser


def _trace_to_stderr(event: dict) -> None:
    sys.stderr.write(json.dumps(event, allow_nan=False) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )

    command = Command.__registry__[CommandName(args.command)]()
    writer = OutputConfig(OutputFormat(args.out)).writer
    trace = _trace_to_stderr if args.trace else None
    try:
        output = command.run(args, trace)
        buffer = io.StringIO()
        writer.write(output, buffer)
    except (InputFormatError, OSError, ValueError) as exc:
        # ContinuityError, DomainError, SplineInputError and JSON decoding errors are ValueErrors
        print(f"polymajorant: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ContractViolation, RuntimeError, ArithmeticError) as exc:
        logger.debug("Internal failure", exc_info=True)
        print(f"polymajorant: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(buffer.getvalue())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
