"""Deterministic report serialization.

JSON documents use sorted keys and render every rational as ``num/den``
(``3/1``, never ``3.0``), so identical inputs give byte-identical files.
Text reports (families, lemma reports, identity reports) come from the
objects' own ``to_text``.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import sys
from fractions import Fraction
from pathlib import Path


def rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def to_plain(obj):
    """Convert a report value into JSON-ready data."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else "-".join(map(str, k)): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_plain(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render(report) -> str:
    if isinstance(report, str):
        return report if report.endswith("\n") else report + "\n"
    if hasattr(report, "to_text") and not hasattr(report, "to_dict"):
        return report.to_text()
    return json.dumps(to_plain(report), sort_keys=True, indent=2) + "\n"


def emit_report(report, path: str | Path | None = None) -> None:
    """Write ``report`` to ``path``, or to stdout when no path is given.

    Raises ``OSError`` when the file cannot be written.
    """
    text = render(report)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
