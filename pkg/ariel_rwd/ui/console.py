"""
Terminal output for the command handlers.

Summaries, tables and diagnostics go to standard error through rich; result
data (CSV, invariants, query answers) is written verbatim to standard output
so that it can be piped and compared byte for byte.
"""

import sys

from rich.console import Console
from rich.table import Table

from ariel_rwd.utils.file_utils import format_number

console = Console(stderr=True, highlight=False)


def write_data(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def print_error(message: str) -> None:
    console.print(f"[bold red]error:[/bold red] {message}", markup=True, soft_wrap=True)


def print_info(message: str) -> None:
    console.print(message, style="green", markup=False, soft_wrap=True)


def print_table(title: str, header: tuple[str, ...] | list[str], rows: list[list[object]], key_style: str = "bold cyan") -> None:
    """Show rows as a rich table; numbers use the result-file formatting."""
    table = Table(title=title, show_header=True)
    for i, name in enumerate(header):
        table.add_column(str(name), style=key_style if i == 0 else None, justify="left" if i == 0 else "right")
    for row in rows:
        table.add_row(*[c if isinstance(c, str) else format_number(c) for c in row])
    console.print(table)