"""
Definitions tables: the integer values bound to `{NAME}` macros.

An `INCLUDE "watchdogs.h"` only binds macro names to integers, so
instead of a preprocessor the caller supplies a file of `NAME=INTEGER` lines.
"""

import logging
import re
from pathlib import Path

from ariel_rwd.ariel.errors import DefinitionsError

_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(-?\d+)$")


def parse_definitions(text: str, source_name: str = "<definitions>") -> dict[str, int]:
    """
    Parse definitions text.

    Args:
        text: One `NAME=INTEGER` per line; `#` starts a comment
        source_name: Name used in diagnostics

    Returns:
        Mapping from macro name to its non-negative integer value

    Raises:
        DefinitionsError: On malformed lines, negative values or redefinitions
    """
    table: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        match = _LINE.match(line)
        if not match:
            raise DefinitionsError(f"expected NAME=INTEGER, got '{line}'", lineno, 1, source_name)

        name, value = match.group(1), int(match.group(2))
        if value < 0:
            raise DefinitionsError(f"macro '{name}' must be non-negative, got {value}", lineno, 1, source_name)
        if name in table and table[name] != value:
            raise DefinitionsError(f"macro '{name}' redefined ({table[name]} then {value})", lineno, 1, source_name)
        table[name] = value

    logging.debug(f"Parsed {len(table)} definitions from {source_name}")
    return table


def load_definitions(path: str | Path) -> dict[str, int]:
    """Read and parse a definitions file."""
    path = Path(path)
    logging.info(f"Loading definitions from {path}")
    return parse_definitions(path.read_text(encoding="utf-8"), source_name=str(path))
