"""Terminal output helpers for the command-line front end.

Human-readable lines go to stderr through these helpers; stdout is reserved
for graph files and JSON-lines reports.
"""

import sys
from typing import Any, List, Optional, TextIO

from colorama import Fore, init

init(autoreset=True)


def _stream(stream: Optional[TextIO]) -> TextIO:
    return stream if stream is not None else sys.stderr


def print_header(title: str, stream: Optional[TextIO] = None) -> None:
    """Print a formatted header with the given title."""
    out = _stream(stream)
    width = 50
    print(Fore.CYAN + "=" * width, file=out)
    print(Fore.CYAN + f"{title.center(width)}", file=out)
    print(Fore.CYAN + "=" * width, file=out)


def print_success(message: str, stream: Optional[TextIO] = None) -> None:
    print(Fore.GREEN + f"✓ {message}", file=_stream(stream))


def print_error(message: str, stream: Optional[TextIO] = None) -> None:
    print(Fore.RED + f"✗ {message}", file=_stream(stream))


def print_warning(message: str, stream: Optional[TextIO] = None) -> None:
    print(Fore.YELLOW + f"! {message}", file=_stream(stream))


def print_table(headers: List[str], rows: List[List[Any]], stream: Optional[TextIO] = None) -> None:
    """Print data in a formatted table with headers."""
    out = _stream(stream)
    widths = [len(header) for header in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))

    header_row = " | ".join(h.ljust(widths[i]) for i, h in enumerate(headers))
    print(Fore.CYAN + header_row, file=out)
    print(Fore.CYAN + "-" * len(header_row), file=out)

    for row in rows:
        formatted_row = " | ".join(str(cell).ljust(widths[i]) for i, cell in enumerate(row))
        print(Fore.WHITE + formatted_row, file=out)
