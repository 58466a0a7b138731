"""
The ``feilab`` command line.

Result documents go to standard output (or ``--output``); logs and error
lines go to standard error. Exit codes: 0 success, 1 capacity or domain
error, 2 argument error.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from contextlib import redirect_stderr
from dataclasses import dataclass
from pathlib import Path
from typing import Any, TextIO

from feilab.__about__ import __version__
from feilab.config import configure_logging, override_settings
from feilab.enums import FamilyKind, LoggingLevel, OutputFormat, Subcommand
from feilab.errors import DomainError, FeiError
from feilab.experiments import (
    chebyshev_bound,
    exhaustive_stats,
    family_scan,
    fourth_moment_table,
    fraction_bound,
    monte_carlo,
)
from feilab.families import FamilySpec, named_function
from feilab.measures import fei_report
from feilab.spectrum import TruthTable

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
LARGE_EXHAUSTIVE_CAP = 5


@dataclass(frozen=True, slots=True)
class CliConfig:
    """Validated arguments of one invocation."""

    subcommand: Subcommand
    n: int | None = None
    seed: int | None = None
    trials: int | None = None
    epsilon: float | None = None
    delta: float | None = None
    family: str | None = None
    function: str | None = None
    c: float = 2.0
    format: OutputFormat = OutputFormat.JSON
    output: Path | None = None
    arity_cap: int | None = None
    workers: int | None = None
    allow_large: bool = False
    timing: bool = False
    log_level: str = LoggingLevel.WARNING.name
    log_file: str | None = None

    @classmethod
    def from_namespace(cls, namespace: argparse.Namespace) -> "CliConfig":
        values = vars(namespace)
        return cls(
            subcommand=Subcommand(values["subcommand"]),
            n=values.get("n"),
            seed=values.get("seed"),
            trials=values.get("trials"),
            epsilon=values.get("epsilon"),
            delta=values.get("delta"),
            family=values.get("family"),
            function=values.get("fn"),
            c=values.get("c", 2.0),
            format=OutputFormat(values["format"]),
            output=values["output"],
            arity_cap=values["arity_cap"],
            workers=values["workers"],
            allow_large=values.get("allow_large", False),
            timing=values["timing"],
            log_level=values["log_level"],
            log_file=values["log_file"],
        )

    def settings_changes(self) -> dict[str, int]:
        changes = {}
        if self.arity_cap is not None:
            changes["arity_cap"] = self.arity_cap
        if self.workers is not None:
            changes["workers"] = self.workers
        if self.allow_large:
            changes["exhaustive_cap"] = LARGE_EXHAUSTIVE_CAP
        return changes


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=[item.value for item in OutputFormat],
        default=OutputFormat.JSON.value,
    )
    common.add_argument("--output", type=Path, default=None)
    common.add_argument("--arity-cap", type=positive_int, default=None)
    common.add_argument("--workers", type=positive_int, default=None)
    common.add_argument(
        "--timing",
        action="store_true",
        help="fill runtime_ms in experiment records",
    )
    common.add_argument(
        "--log-level",
        choices=list(LoggingLevel.__members__),
        default=LoggingLevel.WARNING.name,
    )
    common.add_argument("--log-file", default=None)

    parser = argparse.ArgumentParser(
        prog="feilab",
        description="Fourier entropy and influence of boolean functions.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="subcommand", required=True)

    analyze = commands.add_parser(
        Subcommand.ANALYZE.value,
        parents=[common],
        help="entropy, influence and ratio of one function",
    )
    analyze.add_argument(
        "--fn",
        required=True,
        help='"named:majority,n=3" or a truth table "n=2:8"',
    )
    analyze.add_argument("--c", type=float, default=2.0)

    montecarlo = commands.add_parser(
        Subcommand.MONTECARLO.value,
        parents=[common],
        help="sampled moments of random functions",
    )
    montecarlo.add_argument("--n", type=positive_int, required=True)
    montecarlo.add_argument("--trials", type=positive_int, required=True)
    montecarlo.add_argument("--seed", type=int, required=True)
    montecarlo.add_argument("--epsilon", type=float, default=1.0)

    exhaustive = commands.add_parser(
        Subcommand.EXHAUSTIVE.value,
        parents=[common],
        help="exact moments over all functions of small arity",
    )
    exhaustive.add_argument("--n", type=positive_int, required=True)
    exhaustive.add_argument("--epsilon", type=float, default=1.0)
    exhaustive.add_argument("--allow-large", action="store_true")

    moments = commands.add_parser(
        Subcommand.MOMENTS.value,
        parents=[common],
        help="fourth moments of Fourier coefficients",
    )
    moments.add_argument("--n", type=positive_int, required=True)
    moments.add_argument("--allow-large", action="store_true")

    scan = commands.add_parser(
        Subcommand.SCAN.value,
        parents=[common],
        help="extremal ratio over a family",
    )
    scan.add_argument(
        "--family",
        required=True,
        help='e.g. "symmetric:n=8", "cyclic:p=5", "random:n=10,seed=42"',
    )
    scan.add_argument("--c", type=float, default=2.0)

    bound = commands.add_parser(
        Subcommand.BOUND.value,
        parents=[common],
        help="Chebyshev tail bound and satisfying fraction",
    )
    bound.add_argument("--n", type=positive_int, required=True)
    choice = bound.add_mutually_exclusive_group(required=True)
    choice.add_argument("--epsilon", type=float)
    choice.add_argument("--delta", type=float)
    return parser


def parse_config(
    parser: argparse.ArgumentParser, argv: Sequence[str]
) -> CliConfig:
    config = CliConfig.from_namespace(parser.parse_args(argv))
    if (
        config.format is OutputFormat.CSV
        and config.subcommand is not Subcommand.SCAN
    ):
        parser.error("--format csv is only offered for scan histograms")
    return config


def load_function(text: str) -> TruthTable:
    """A hex truth-table literal or a named family string."""
    if text.startswith("n="):
        return TruthTable.from_hex(text)
    spec = FamilySpec.parse(text)
    if spec.kind is not FamilyKind.NAMED:
        raise DomainError(f"--fn needs a single named function, got {text!r}")
    return named_function(spec)


def bound_document(n: int, epsilon: float) -> dict[str, Any]:
    tail = chebyshev_bound(n, epsilon)
    return {
        "n": n,
        "epsilon": epsilon,
        "delta": 2.0 * epsilon,
        "chebyshev_bound": tail,
        "fraction_bound": fraction_bound(n, 2.0 * epsilon),
        "fei_probability_bound": 1.0 - tail,
    }


def _dump(document: dict[str, Any]) -> str:
    return json.dumps(document, indent=2) + "\n"


def execute(config: CliConfig) -> str:
    """
    Run one subcommand.

    Returns:
        str: The serialised result document.

    Raises:
        FeiError: On capacity or domain errors.
    """
    command = config.subcommand
    if command is Subcommand.ANALYZE:
        report = fei_report(load_function(config.function), config.c)
        return _dump(report.to_dict())
    if command is Subcommand.BOUND:
        epsilon = config.epsilon
        if epsilon is None:
            if not config.delta > 0:
                raise DomainError(f"delta must be positive: {config.delta}")
            epsilon = config.delta / 2.0
        return _dump(bound_document(config.n, epsilon))
    if command is Subcommand.MOMENTS:
        return fourth_moment_table(config.n).to_json()
    if command is Subcommand.EXHAUSTIVE:
        record = exhaustive_stats(config.n, config.epsilon)
    elif command is Subcommand.MONTECARLO:
        record = monte_carlo(
            config.n, config.trials, config.seed, config.epsilon
        )
    else:
        record = family_scan(config.family, config.c)
        if config.format is OutputFormat.CSV:
            return record.histogram_csv()
    return record.to_json(timing=config.timing)


def run(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """
    Parse ``argv``, run the subcommand and write its document.

    Returns:
        int: The process exit code.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with redirect_stderr(stderr):
            config = parse_config(
                parser, sys.argv[1:] if argv is None else list(argv)
            )
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        configure_logging(config.log_level, config.log_file)
        with override_settings(**config.settings_changes()):
            document = execute(config)
    except FeiError as exc:
        logger.debug("%s failed", config.subcommand.value, exc_info=True)
        error = {"error": type(exc).__name__, "message": exc.message}
        stderr.write(json.dumps(error) + "\n")
        return EXIT_FAILURE
    if config.output is None:
        stdout.write(document)
        return EXIT_OK
    try:
        config.output.write_text(document, encoding="utf-8")
    except OSError as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
        stderr.write(json.dumps(error) + "\n")
        return EXIT_FAILURE
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())
