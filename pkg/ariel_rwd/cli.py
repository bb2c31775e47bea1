"""
Command-line argument parsing for ariel-rwd.
"""

import argparse
import sys
from typing import Any, NamedTuple

from ariel_rwd import __version__

COMMAND_NAMES = (
    "compile",
    "simulate",
    "gspn-solve",
    "gspn-invariants",
    "gspn-query",
    "rwd-sweep",
    "rwd-validate",
)


class UsageError(Exception):
    """Invalid combination of command-line arguments."""


class Args(NamedTuple):
    """
    Parsed command-line arguments.
    """
    command: str
    options: dict[str, Any]
    config_file: str | None = None
    log_level: str | None = None


class _Parser(argparse.ArgumentParser):
    """Exits with status 1 on usage errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: '{text}'") from None


def _name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _add_net_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("net", nargs="?", help="Net file (TOML)")
    parser.add_argument("--rwd", metavar="POLICY", help="Use the built-in redundant-watchdog model for POLICY instead")
    parser.add_argument("--timeout-rate", type=float, help="Timeout rate of the --rwd model")
    parser.add_argument("--n-replicas", type=int, help="Watchdog replicas of the --rwd model")
    parser.add_argument("--state-cap", type=int, help="Maximum number of reachable markings")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ariel-rwd",
        description="Ariel recovery-language compiler, redundant-watchdog simulator and GSPN analyser",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config-file", help="Path to a TOML configuration file (default: built-in settings)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (overrides the configuration)")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("compile", help="Compile Ariel sources into r-code and a deployment file")
    p.add_argument("sources", nargs="+", help="Ariel source files, merged in order")
    p.add_argument("--defs", help="Definitions file (NAME=INTEGER lines)")
    p.add_argument("--out-dir", required=True, help="Output folder")
    p.add_argument("--name", help="Base name of the outputs (default: stem of the first source)")

    p = sub.add_parser("simulate", help="Run a fault-injection scenario")
    p.add_argument("scenario", help="Scenario file (TOML)")
    p.add_argument("--seed", type=int, help="Seed of the first replication (default: the scenario's)")
    p.add_argument("--policy", help="Replace the recovery r-code with AND, OR or a k-out-of-n voting clause")
    p.add_argument("--replications", type=int, default=1, help="Independently seeded runs (default: 1)")
    p.add_argument("--workers", type=int, help="Worker processes")
    p.add_argument("--out", help="Metrics CSV (default: standard output)")
    p.add_argument("--trace", help="Event trace of the first replication")

    p = sub.add_parser("gspn-solve", help="Steady-state probabilities and throughputs of a net")
    _add_net_source(p)
    p.add_argument("--tolerance", type=float, help="Solver residual tolerance")
    p.add_argument("--out", help="Throughput CSV (default: standard output)")
    p.add_argument("--states", help="Steady-state probability CSV")

    p = sub.add_parser("gspn-invariants", help="Minimal P-invariants of a net")
    _add_net_source(p)
    p.add_argument("--out", help="Output text file (default: standard output)")

    p = sub.add_parser("gspn-query", help="Reachability queries")
    _add_net_source(p)
    q = p.add_mutually_exclusive_group(required=True)
    q.add_argument("--always-zero", metavar="PLACE", help="Does PLACE stay empty in every state of the class?")
    q.add_argument("--exists-enabled", metavar="T1,T2", type=_name_list, help="Is one of the transitions enabled ...")
    p.add_argument("--state-class", choices=("tangible", "vanishing", "all"), default="tangible")
    p.add_argument("--place", help="... while this place holds ...")
    p.add_argument("--at-least", type=int, default=1, help="... at least this many tokens")

    p = sub.add_parser("rwd-sweep", help="Throughputs of the redundant-watchdog models over timeout rates")
    p.add_argument("--policies", type=_name_list, help="Comma-separated policies, e.g. AND,OR,2oo3")
    p.add_argument("--rates", type=_float_list, help="Comma-separated timeout rates")
    p.add_argument("--n-replicas", type=int, help="Watchdog replicas")
    p.add_argument("--workers", type=int, help="Worker processes")
    p.add_argument("--out", help="Sweep CSV (default: standard output)")
    p.add_argument("--gnuplot", help="Also write gnuplot data blocks, one per policy")
    p.add_argument("--nets-dir", help="Also write every built net as a net file")
    p.add_argument("--render-dir", help="Also write a Markdown description of each policy's model")

    p = sub.add_parser("rwd-validate", help="Analytic versus Monte Carlo throughputs")
    p.add_argument("--policies", type=_name_list, help="Comma-separated policies")
    p.add_argument("--rate", type=float, default=1.0, help="Timeout rate (default: 1.0)")
    p.add_argument("--n-replicas", type=int, help="Watchdog replicas")
    p.add_argument("--horizon", type=float, help="Simulated time per replication")
    p.add_argument("--warmup", type=float, help="Simulated time discarded at the start of each replication")
    p.add_argument("--replications", type=int, help="Monte Carlo replications")
    p.add_argument("--seed", type=int, default=0, help="Seed of the first replication (default: 0)")
    p.add_argument("--workers", type=int, help="Worker processes")
    p.add_argument("--out", help="Comparison CSV")

    return parser


def parse_args(argv: list[str] | None = None) -> Args:
    """
    Parse command-line arguments.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Args: Parsed command-line arguments

    Raises:
        SystemExit: With status 1 on usage errors, 0 for --help/--version
    """
    namespace = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(namespace).items() if k not in ("command", "config_file", "log_level")}
    return Args(
        command=namespace.command,
        options=options,
        config_file=namespace.config_file,
        log_level=namespace.log_level,
    )
