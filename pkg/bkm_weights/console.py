from typing import Dict, List, Optional

from rich import print
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .helper import format_rational


def print_startup_info(command: str, style: str = "#7CD9FF", **kwargs):
    """
    Prints the run settings of a batch command.
    """
    table = Table(title="", box=None, width=61)
    table.add_column("", justify='left', width=14)
    table.add_column("", justify='left')
    table.add_row("command", command, style=style)
    for key, value in kwargs.items():
        if value is not None and value != "":
            table.add_row(key, str(value), style=style)
    print(
        Panel(
            table,
            title=f"bkm-weights (v{__version__})",
            expand=False,
        )
    )


def character_table(character, title: Optional[str] = None) -> Table:
    """
    Coefficients of a formal character, grades sorted by (height, lex).
    """
    top = ", ".join(format_rational(x) for x in character.top.pairings)
    table = Table(title=title or f"e^λ, λ = ({top}), cutoff {character.cutoff}")
    table.add_column("height", justify='right')
    table.add_column("β = λ − μ", justify='left')
    table.add_column("c(μ)", justify='right')
    for grade, c in character.rows():
        style = "red" if isinstance(c, int) and c < 0 else None
        table.add_row(str(sum(grade)), str(list(grade)), format_rational(c), style=style)
    return table


def verify_table(suite: str, results: List[Dict]) -> Table:
    table = Table(title=f"verify {suite}")
    table.add_column("bundle", justify='left')
    table.add_column("assertion", justify='left')
    table.add_column("result", justify='left')
    for row in results:
        ok = row["passed"]
        table.add_row(
            row["bundle"],
            row["name"],
            "pass" if ok else "FAIL",
            style="#62E883" if ok else "red",
        )
    return table


def records_table(title: str, records: List[Dict]) -> Table:
    """A generic table over a list of flat dicts, one column per key."""
    table = Table(title=title)
    if not records:
        return table
    keys = list(records[0])
    for key in keys:
        table.add_column(str(key))
    for rec in records:
        table.add_row(*[_cell(rec.get(k)) for k in keys])
    return table


def _cell(value) -> str:
    if isinstance(value, (list, tuple)):
        return str([_cell(v) for v in value]).replace("'", "")
    try:
        return format_rational(value)
    except (TypeError, ValueError):
        return str(value)
