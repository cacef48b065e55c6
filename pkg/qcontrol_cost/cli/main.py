"""
CLI entry point for qcontrol-cost

Global options are shared by every subcommand; the subcommands themselves
live in `cli.commands` and are collected through the registry.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler

from .. import __version__
from ..config import get_global_config, load_config, print_config_info, set_global_config
from ..core.types import DivergentResultError, InvalidInputError, NumericalError, QccError
from .commands import CliContext  # importing commands registers the subcommands
from .registry import get_registry

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_DIVERGENT = 4

logger = logging.getLogger(__name__)


def classify_error(exc: BaseException) -> int:
    """Exit code for an exception raised by a subcommand"""
    if isinstance(exc, DivergentResultError):
        return EXIT_DIVERGENT
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, (InvalidInputError, ValueError)):
        return EXIT_INPUT
    if isinstance(exc, QccError):
        return EXIT_NUMERICAL
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcc",
        description="Minimum work rate needed to hold open quantum systems in non-equilibrium states",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Steady state and control cost of a bundled model
  qcc examples thermal_qubit > thermal_qubit.json
  qcc steady thermal_qubit.json
  qcc cost thermal_qubit.json --target gibbs:0.5

  # Sideband cooling sweep for the electromechanical preset (Hz)
  qcc sideband --teufel --sweep g:1e3:1e7:50:log --format csv --output teufel.csv

  # Qubit cooling with and without a gap-shifting auxiliary qubit
  qcc qubit-cool --E 1 --T 1 --Tc 0.5 --gamma 0.1 --strong 0.5

  # Free-energy cost of gate noise
  qcc qc-cost --gamma 2 --beta 1 --tau 1e-6 --E 50 --T 1 --M 1000
        """
    )
    parser.add_argument("--version", action="version", version=f"qcontrol-cost {__version__}")
    parser.add_argument("--si", action="store_true",
                        help="Command-line frequencies in Hz and temperatures in kelvin")
    parser.add_argument("--format", choices=("table", "csv"), default="table",
                        help="Output format (default: table)")
    parser.add_argument("--output", "-o", default=None,
                        help="Write CSV to this file (relative to the output directory)")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose logging")
    parser.add_argument("--log-level", default=None,
                        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"))
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for sweeps")
    parser.add_argument("--eig-method", choices=("lapack", "jacobi"), default=None,
                        help="Hermitian eigensolver")
    parser.add_argument("--show-config", action="store_true",
                        help="Print the resolved configuration and exit")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    get_registry().build_parsers(subparsers)
    return parser


def setup_logging(level: str, console: Console) -> None:
    root = logging.getLogger("qcontrol_cost")
    root.handlers.clear()
    handler = RichHandler(console=console, show_time=False, show_path=False)
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)

    config = load_config(
        verbose=args.verbose or None,
        log_level="INFO" if args.verbose and args.log_level is None else args.log_level,
        threads=args.threads,
        eig_method=args.eig_method,
    )
    set_global_config(config)

    console = Console(stderr=True, no_color=not config.colorize)
    setup_logging(config.log_level, console)

    if args.show_config:
        print_config_info(get_global_config())
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_INPUT

    # tables go to stdout; diagnostics stay on stderr
    args.ctx = CliContext(
        console=Console(no_color=not config.colorize),
        config=config,
        argv=argv,
        output_format=args.format,
        output=Path(args.output) if args.output else None,
    )
    try:
        return get_registry().execute(args)
    except Exception as exc:
        code = classify_error(exc)
        if code == 1:
            raise
        logger.debug("Subcommand %s failed", args.command, exc_info=True)
        console.print(f"❌ Error: {exc}", markup=False, highlight=False)
        return code


def cli_main():
    """Main CLI entry point"""
    sys.exit(main())


if __name__ == "__main__":
    cli_main()
