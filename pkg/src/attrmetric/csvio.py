"""Matrix files, tables and report documents.

A matrix file is comma-separated text: a header row of attribute names, then
one row per exemplar with entries in {-1, +1} (or {0, 1} when read with
``zero_one=True``).  Every writer goes through :func:`atomic_write`, so a
failed run never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import AttributeMatrix, MeaningfulnessError, from_zero_one, to_zero_one


class MatrixFileError(MeaningfulnessError):
    pass


def fmt(x) -> str:
    """12 significant digits; floats always keep a decimal point or exponent."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return repr(x)
    s = f"{x:.12g}"
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_matrix(path, zero_one: bool = False) -> AttributeMatrix:
    allowed = ("0", "1") if zero_one else ("-1", "1", "+1")
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"{path}: cannot read ({exc.strerror})") from None
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise MatrixFileError(f"{path}:1: missing header row of attribute names")
    header = [h.strip() for h in rows[0]]
    seen = {}
    for c, name in enumerate(header, start=1):
        if not name:
            raise MatrixFileError(f"{path}:1, column {c}: empty attribute name")
        if name in seen:
            raise MatrixFileError(
                f"{path}:1, column {c}: duplicate attribute name {name!r} (first in column {seen[name]})"
            )
        seen[name] = c
    data = []
    for line, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise MatrixFileError(
                f"{path}:{line}: expected {len(header)} entries, found {len(row)}"
            )
        values = []
        for c, cell in enumerate(row, start=1):
            cell = cell.strip()
            if cell not in allowed:
                want = "{0, 1}" if zero_one else "{-1, +1}"
                raise MatrixFileError(f"{path}:{line}, column {c}: entry {cell!r} is not in {want}")
            values.append(int(cell))
        data.append(values)
    if not data:
        raise MatrixFileError(f"{path}: no exemplar rows")
    arr = np.array(data, dtype=np.int8)
    if zero_one:
        return from_zero_one(arr, header)
    return AttributeMatrix(arr, tuple(header))


def matrix_text(matrix: AttributeMatrix, zero_one: bool = False) -> str:
    values = to_zero_one(matrix) if zero_one else matrix.values
    lines = [",".join(matrix.column_names())]
    lines += [",".join(str(int(v)) for v in row) for row in values]
    return "\n".join(lines) + "\n"


def write_matrix(path, matrix: AttributeMatrix, zero_one: bool = False) -> None:
    atomic_write(path, matrix_text(matrix, zero_one))


def table_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def read_names(path) -> list[str]:
    """One attribute name per line; blank lines and ``#`` comments are skipped."""
    names = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            names.append(line)
    return names


def _round(obj):
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return float(f"{x:.12g}")
        return None
    return obj


def json_text(obj) -> str:
    return json.dumps(_round(obj), indent=2) + "\n"
