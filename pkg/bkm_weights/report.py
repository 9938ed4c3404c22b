"""
Serialized run results with provenance.
"""
import io
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.table import Table

from . import __version__
from .cartan import BkmCartanMatrix
from .characters.series import FormalCharacter
from .config.interface import RunConfig
from .console import records_table, verify_table
from .helper import json_dumps


def provenance(command: str, run_config: Optional[RunConfig] = None, matrix: Optional[BkmCartanMatrix] = None) -> Dict:
    return {
        "command": command,
        "cutoff": run_config.cutoff if run_config is not None else None,
        "matrix_hash": matrix.matrix_hash() if matrix is not None else None,
        "version": __version__,
    }


def _renderable(results: Any, command: str):
    if isinstance(results, FormalCharacter):
        return results.to_table()
    if isinstance(results, dict) and isinstance(results.get("character"), FormalCharacter):
        return results["character"].to_table(title=f"{command}: {results.get('source', '')}")
    if isinstance(results, list) and results and isinstance(results[0], dict):
        if {"bundle", "name", "passed"} <= set(results[0]):
            return verify_table(command, results)
        return records_table(command, results)
    if isinstance(results, dict):
        return records_table(command, [{"key": k, "value": v} for k, v in sorted(results.items())])
    return records_table(command, [{"value": results}])


def render_text(renderables: List, width: int = 120) -> str:
    buffer = io.StringIO()
    console = Console(file=buffer, width=width, color_system=None, force_terminal=False)
    for r in renderables:
        console.print(r)
    return buffer.getvalue()


def emit_report(
    results: Any,
    command: str,
    run_config: Optional[RunConfig] = None,
    matrix: Optional[BkmCartanMatrix] = None,
    fmt: Optional[str] = None,
) -> bytes:
    """
    Renders a result as JSON (sorted keys, canonical rationals) or as a plain
    rich table. Identical inputs give identical bytes.
    """
    fmt = fmt or (run_config.format if run_config is not None else "json")
    prov = provenance(command, run_config, matrix)
    if fmt == "json":
        return json_dumps({"provenance": prov, "result": results}) + b"\n"
    footer = Table(title="provenance", box=None)
    footer.add_column("key")
    footer.add_column("value")
    for k, v in sorted(prov.items()):
        footer.add_row(k, "" if v is None else str(v))
    return render_text([_renderable(results, command), footer]).encode()
