"""Reading and writing problem files (JSON and CSV).

JSON::

    {"alternatives": ["a", "b"], "matrix": [[1, 2], [0.5, 1]], "reference": {"b": 3}}

``null`` marks a Missing comparison; an optional ``"notes"`` string is kept
verbatim.  CSV has a header row of names followed by one row per
alternative; cells are decimals, fractions such as ``1/4``, or ``?``.  Lines
starting with ``#`` are comments.  Reference weights for CSV come from a
sidecar ``name,weight`` file or from the command line.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import TextIO

from .errors import ParseError, SchemaError
from .pcm import HreProblem, PCMatrix

_JSON_KEYS = ("alternatives", "matrix", "reference", "notes")


@dataclass
class ProblemFile:
    alternatives: list[str]
    matrix: list[list[float | None]]
    reference: dict[str, float] = field(default_factory=dict)
    notes: str | None = None

    def __post_init__(self):
        names = self.alternatives
        if len(set(names)) != len(names):
            raise SchemaError("alternatives", "names must be unique")
        if len(self.matrix) != len(names) or any(len(row) != len(names) for row in self.matrix):
            raise SchemaError("matrix", f"must be {len(names)}x{len(names)} to match the alternatives")
        for name, w in self.reference.items():
            if name not in names:
                raise SchemaError("reference", f"{name!r} is not an alternative")
            if not (isinstance(w, (int, float)) and not isinstance(w, bool) and math.isfinite(w) and w > 0):
                raise SchemaError("reference", f"weight of {name!r} must be a positive number")

    def pc_matrix(self) -> PCMatrix:
        return PCMatrix(self.matrix, tuple(self.alternatives))

    def problem(self, unknowns: list[str] | None = None,
                reference: dict[str, float] | None = None) -> HreProblem:
        """Build an HRE problem.

        Without an explicit ``unknowns`` list the unknowns are the
        alternatives absent from the reference map, in file order.
        """
        ref = dict(self.reference if reference is None else reference)
        return HreProblem.from_labels(self.pc_matrix(), ref, unknowns)


def _parse_number(text: str, line: int, column: int) -> float | None:
    cell = text.strip()
    if cell == "?":
        return None
    try:
        return float(Fraction(cell))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot read {cell!r} as a number, fraction or '?'", line, column) from None


def _json_cell(value, i: int, j: int) -> float | None:
    if value is None or value == "?":
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError("matrix", f"cell [{i}][{j}] must be a number or null, got {value!r}")
    return float(value)


def parse_json(text: str) -> ProblemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise SchemaError("<root>", "expected a JSON object")
    for key in data:
        if key not in _JSON_KEYS:
            raise SchemaError(key, "unexpected field")
    for key in ("alternatives", "matrix"):
        if key not in data:
            raise SchemaError(key, "required field is missing")
    names = data["alternatives"]
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise SchemaError("alternatives", "must be a list of strings")
    rows = data["matrix"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError("matrix", "must be a list of rows")
    matrix = [[_json_cell(v, i, j) for j, v in enumerate(row)] for i, row in enumerate(rows)]
    reference = data.get("reference", {})
    if not isinstance(reference, dict):
        raise SchemaError("reference", "must be an object mapping names to weights")
    reference = {name: (float(w) if isinstance(w, int) and not isinstance(w, bool) else w)
                 for name, w in reference.items()}
    notes = data.get("notes")
    if notes is not None and not isinstance(notes, str):
        raise SchemaError("notes", "must be a string")
    return ProblemFile(names, matrix, reference, notes)


def _csv_rows(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        yield lineno, next(csv.reader([raw]))


def parse_csv(text: str, reference_text: str | None = None) -> ProblemFile:
    rows = list(_csv_rows(text))
    if not rows:
        raise ParseError("empty CSV input", 1)
    _, header = rows[0]
    names = [h.strip() for h in header]
    matrix = []
    for lineno, cells in rows[1:]:
        if len(cells) != len(names):
            raise ParseError(f"expected {len(names)} cells, found {len(cells)}", lineno)
        matrix.append([_parse_number(cell, lineno, col) for col, cell in enumerate(cells, start=1)])
    reference = parse_reference_csv(reference_text) if reference_text else {}
    return ProblemFile(names, matrix, reference)


def parse_reference_csv(text: str) -> dict[str, float]:
    out = {}
    for lineno, cells in _csv_rows(text):
        if len(cells) != 2:
            raise ParseError("expected 'name,weight'", lineno)
        name, value = cells[0].strip(), _parse_number(cells[1], lineno, 2)
        if value is None:
            raise ParseError("reference weight cannot be '?'", lineno, 2)
        out[name] = value
    return out


def detect_format(path: str | Path) -> str:
    return "csv" if str(path).lower().endswith(".csv") else "json"


def parse_problem(source: str | Path | TextIO, format: str | None = None,
                  reference_path: str | Path | None = None) -> ProblemFile:
    """Read a problem from a path or an open text stream."""
    if hasattr(source, "read"):
        text = source.read()
        format = format or "json"
    else:
        text = Path(source).read_text(encoding="utf-8")
        format = format or detect_format(source)
    if format == "json":
        if reference_path is not None:
            raise SchemaError("reference", "JSON problems carry their own reference map")
        return parse_json(text)
    if format == "csv":
        ref_text = Path(reference_path).read_text(encoding="utf-8") if reference_path else None
        return parse_csv(text, ref_text)
    raise ValueError(f"unknown format {format!r}")


def dump_json(pf: ProblemFile) -> str:
    data = {"alternatives": pf.alternatives, "matrix": pf.matrix, "reference": pf.reference}
    if pf.notes is not None:
        data["notes"] = pf.notes
    return json.dumps(data, indent=2) + "\n"


def dump_csv(pf: ProblemFile) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(pf.alternatives)
    for row in pf.matrix:
        writer.writerow(["?" if v is None else repr(v) for v in row])
    return buf.getvalue()


def dump_reference_csv(reference: dict[str, float]) -> str:
    return "".join(f"{name},{w!r}\n" for name, w in reference.items())
