"""
Main entry point for ariel-rwd.
"""

import logging
import sys

from ariel_rwd.cli import parse_args
from ariel_rwd.config import Config
from ariel_rwd.core.commands import EXIT_INPUT, handle_command
from ariel_rwd.logger import parse_level, setup_logging, shutdown_logging
from ariel_rwd.ui.console import print_error


def main(argv: list[str] | None = None) -> int:
    """
    Main entry point for the application.

    Parses the command line, loads the configuration, sets up logging and
    runs one command.

    Returns:
        The process exit code
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = Config(args.config_file)
    except (FileNotFoundError, ValueError) as e:
        print_error(str(e))
        return EXIT_INPUT

    level = parse_level(args.log_level or config.get("logging.level", "INFO"))
    log_dir = config.get("logging.log_dir", "log")
    setup_logging(level, log_dir=str(log_dir) if log_dir else None, keep=int(config.get("logging.keep", 7)))

    try:
        logging.info(f"Starting ariel-rwd {args.command}")
        logging.debug(f"Options: {args.options}")
        code = handle_command(args.command, args.options, config)
    except Exception as e:
        logging.error(f"Error during command execution: {e}", exc_info=True)
        print_error(f"unexpected error: {e}")
        code = EXIT_INPUT
    finally:
        logging.debug("Shutting down logging")
        shutdown_logging()

    return code


if __name__ == "__main__":
    sys.exit(main())
