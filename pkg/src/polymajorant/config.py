"""Configuration owners for polymajorant: tolerances, CLI defaults, output writers."""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, ClassVar, TextIO

from metaclass_registry import AutoRegisterMeta

from .constants import CSV_FLOAT_FORMAT, TOL_SCALE_ENV, OutputFormat
from .exceptions import InputFormatError

logger = logging.getLogger(__name__)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={raw!r}, using {default}")
        return default
    if not math.isfinite(value) or value <= 0:
        logger.warning(f"Ignoring non-positive {name}={raw!r}, using {default}")
        return default
    return value


@dataclass(frozen=True)
class Tolerances:
    """Relative numeric tolerances used across the package.

    Every base value is multiplied by ``scale``, which defaults to the
    ``LCM_TOL_SCALE`` environment variable (1 when unset). The accessor
    methods turn a base value into the absolute threshold for a given
    magnitude.
    """

    root: float = 1e-12
    cont: float = 1e-7
    maximum: float = 1e-9
    tan: float = 1e-8
    gap: float = 1e-10
    linear: float = 1e-12
    merge: float = 1e-12
    degree: float = 1e-9
    scale: float = field(default_factory=lambda: _env_float(TOL_SCALE_ENV, 1.0))

    def __post_init__(self) -> None:
        for name in ("root", "cont", "maximum", "tan", "gap", "linear", "merge", "degree", "scale"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"tolerance {name} must be positive and finite, got {value!r}")

    def tol_root(self, x: float = 0.0) -> float:
        """Abscissa accuracy for root polishing near ``x``."""
        return self.scale * self.root * (1.0 + abs(x))

    def tol_cont(self, magnitude: float) -> float:
        return self.scale * self.cont * (1.0 + abs(magnitude))

    def tol_max(self, level: float) -> float:
        """Membership threshold for the maximum set at level ``level``."""
        return self.scale * self.maximum * (1.0 + abs(level))

    def tol_tan(self, slope: float, width: float) -> float:
        return self.scale * self.tan * (1.0 + abs(slope)) * (1.0 + abs(width))

    def tol_gap(self, level: float) -> float:
        """Strictness margin for a chord lying above the graph."""
        return self.scale * self.gap * (1.0 + abs(level))

    def tol_merge(self, x: float) -> float:
        return self.scale * self.merge * (1.0 + abs(x))


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class CliDefaults:
    """Default values of CLI flags."""

    samples: int = 1001
    grid: int = 10001
    threads: int = 1
    output: OutputFormat = OutputFormat.JSON


CLI_DEFAULTS = CliDefaults()


@dataclass(frozen=True)
class CommandOutput:
    """Result of a CLI command, ready for any registered writer.

    ``document`` is always present; ``header`` and ``rows`` are filled by
    commands that have a tabular form.
    """

    document: Mapping[str, Any]
    header: tuple[str, ...] = ()
    rows: tuple[tuple[float, ...], ...] = ()

    @property
    def tabular(self) -> bool:
        return bool(self.header)


class OutputWriter(ABC, metaclass=AutoRegisterMeta):
    """Nominal strategy owner for CLI output serialisation."""

    __registry_key__ = "output_format"
    __skip_if_no_key__ = True
    __registry__: ClassVar[dict[OutputFormat, type[OutputWriter]]] = {}

    output_format: ClassVar[OutputFormat | None] = None

    @abstractmethod
    def write(self, output: CommandOutput, stream: TextIO) -> None:
        """Serialise ``output`` onto ``stream``."""


class JsonOutputWriter(OutputWriter):
    """Writes the command document as indented JSON."""

    output_format = OutputFormat.JSON

    def write(self, output: CommandOutput, stream: TextIO) -> None:
        stream.write(json.dumps(output.document, indent=2, allow_nan=False))
        stream.write("\n")


class CsvOutputWriter(OutputWriter):
    """Writes the tabular form of a command result as CSV."""

    output_format = OutputFormat.CSV

    def write(self, output: CommandOutput, stream: TextIO) -> None:
        if not output.tabular:
            raise InputFormatError("out", "csv output is not available for this command")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(output.header)
        for row in output.rows:
            writer.writerow([format(value, CSV_FLOAT_FORMAT) for value in row])


@dataclass(frozen=True)
class OutputConfig:
    """Output selection for one CLI invocation."""

    output_format: OutputFormat = CLI_DEFAULTS.output

    @property
    def writer(self) -> OutputWriter:
        """Return the registered writer for the selected format."""
        return OutputWriter.__registry__[self.output_format]()
