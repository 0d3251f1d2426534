# cli/cli_utils.py
import sys
from typing import Dict, List, Optional, Sequence

# Try to import optional packages with fallbacks
try:
    from tabulate import tabulate
    TABULATE_AVAILABLE = True
except ImportError:
    TABULATE_AVAILABLE = False
    print("Warning: tabulate not installed. Using basic table formatting.", file=sys.stderr)

try:
    from colorama import init, Fore, Style
    init()
    COLORAMA_AVAILABLE = True
except ImportError:
    COLORAMA_AVAILABLE = False
    print("Warning: colorama not installed. Using plain text output.", file=sys.stderr)

def _echo(text: str = ""):
    # stdout is reserved for command data
    print(text, file=sys.stderr)

def _colored(color_name: str, text: str) -> str:
    if not COLORAMA_AVAILABLE:
        return text
    return f"{getattr(Fore, color_name)}{text}{Style.RESET_ALL}"

def _status_line(color_name: str, symbol: str, label: str, message: str):
    if COLORAMA_AVAILABLE:
        _echo(_colored(color_name, f"{symbol} {message}"))
    else:
        _echo(f"{label}: {message}")

class CLIUtils:
    @staticmethod
    def print_success(message: str):
        _status_line('GREEN', "✓", "SUCCESS", message)

    @staticmethod
    def print_error(message: str):
        _status_line('RED', "✗", "ERROR", message)

    @staticmethod
    def print_warning(message: str):
        _status_line('YELLOW', "⚠", "WARNING", message)

    @staticmethod
    def print_info(message: str):
        _status_line('BLUE', "ℹ", "INFO", message)

    @staticmethod
    def format_table(data: Sequence[Sequence], headers: List[str]) -> str:
        """Grid table via tabulate, or aligned plain columns without it"""
        if TABULATE_AVAILABLE:
            return tabulate(data, headers=headers, tablefmt="grid")

        widths = [len(str(h)) for h in headers]
        for row in data:
            for i, cell in enumerate(row[:len(widths)]):
                widths[i] = max(widths[i], len(str(cell)))

        def line(cells: Sequence) -> str:
            padded = list(cells) + [""] * (len(widths) - len(cells))
            return " | ".join(str(cell).ljust(width) for cell, width in zip(padded, widths))

        header = line(headers)
        return "\n".join([header, "-" * len(header)] + [line(row) for row in data])

    @staticmethod
    def print_table(data: Sequence[Sequence], headers: List[str], title: Optional[str] = None):
        if title:
            _echo("\n" + _colored('CYAN', title))
        if not data:
            CLIUtils.print_warning("No data to display")
            return
        _echo(CLIUtils.format_table(data, headers))

    @staticmethod
    def print_outcome_counts(counts: Dict[str, int], title: str):
        """Node status table, nonzero outcomes only"""
        rows = [[outcome, count] for outcome, count in counts.items() if count]
        CLIUtils.print_table(rows, ["Status", "Nodes"], title)

    @staticmethod
    def print_summary(summary: dict):
        """Verification summary: one table row per check, then the totals"""
        results = summary['results']
        with_notes = any(result.message for result in results)
        rows = []
        for result in results:
            if result.skipped:
                verdict = "skip"
            else:
                verdict = "pass" if result.passed else "FAIL"
            row = [result.name, f"({result.point[0]:g}, {result.point[1]:g})",
                   f"{result.magnitude:.3e}", f"{result.tolerance:.0e}", verdict]
            if with_notes:
                row.append(result.message)
            rows.append(row)

        headers = ["Check", "Point", "Magnitude", "Tolerance", "Result"] + (["Note"] if with_notes else [])
        CLIUtils.print_table(rows, headers, f"{summary['suite']} suite for {summary['seed']}")

        totals = f"{summary['passed']} passed, {summary['failed']} failed, {summary['skipped']} skipped"
        if summary['failed']:
            CLIUtils.print_error(totals)
        else:
            CLIUtils.print_success(totals)
