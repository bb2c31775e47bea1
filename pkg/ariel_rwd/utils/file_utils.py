"""
File utility functions for ariel-rwd: result files, CSV tables, number formatting.
"""

import csv
import io
import logging
import os
from collections.abc import Iterable, Sequence
from pathlib import Path


def format_number(value: float | int | None) -> str:
    """
    Render a number for result files.

    Integers are written as is, floats with 12 significant digits so
    that output bytes are stable across platforms; None becomes "".
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".12g")


def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """
    Build a CSV document with a mandatory header row.

    Cells that are numbers go through `format_number`; everything else is
    written with `str`. Quoting follows the csv module defaults.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([c if isinstance(c, str) else format_number(c) for c in row])
    return buffer.getvalue()


def create_folder(folder_path: str | Path) -> bool:
    """
    Create a folder if it doesn't exist.

    Args:
        folder_path: Path to the folder to create

    Returns:
        True if the folder was created or already exists, False otherwise
    """
    try:
        if not os.path.exists(folder_path):
            os.makedirs(folder_path, exist_ok=True)
            logging.info(f"Created folder: {folder_path}")
        return True
    except OSError as e:
        logging.error(f"Error creating folder {folder_path}: {e}", exc_info=True)
        return False


def write_text(path: str | Path, text: str) -> Path:
    """
    Write `text` to `path` with "\\n" line endings, creating parent folders.

    Returns:
        The written path
    """
    path = Path(path)
    if path.parent and str(path.parent) not in ("", "."):
        create_folder(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logging.info(f"Wrote {path} ({len(text)} bytes)")
    return path


def read_text(path: str | Path) -> str:
    """
    Read a UTF-8 text file.

    Raises:
        FileNotFoundError: If the file doesn't exist
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    return path.read_text(encoding="utf-8")
