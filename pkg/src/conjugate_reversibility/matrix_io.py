"""
Matrix file formats.

json:      {"n": 2, "entries": [[re, im], ...]} with n*n entries in row-major order
csv-pairs: n lines of 2n comma-separated reals, real and imaginary parts interleaved
"""

import csv
import io
import json
import logging
import math
import os
from typing import IO, Any, List, Optional, Union

import numpy as np

from .exceptions import MatrixParseError
from .numerics import ComplexMatrix, complex_pair, require_special_linear
from .utils import validate_input_file

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv-pairs")

_EXTENSIONS = {".json": "json", ".csv": "csv-pairs"}

Source = Union[str, bytes, IO[str], IO[bytes]]


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        data: Any = source
    elif isinstance(source, str):
        return source
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MatrixParseError(f"input is not UTF-8: {e}")
    return data


def _real(value: Any, row: int, column: int) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MatrixParseError(f"expected a real number, got {value!r}", row, column)
    if not math.isfinite(value):
        raise MatrixParseError("entry is not finite", row, column)
    return float(value)


def _parse_json(text: str) -> ComplexMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixParseError(f"invalid JSON: {e.msg} at line {e.lineno}, column {e.colno}")
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise MatrixParseError('JSON matrix must be an object with keys "n" and "entries"')

    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MatrixParseError(f'"n" must be a positive integer, got {n!r}')
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != n * n:
        count = len(entries) if isinstance(entries, list) else "no"
        raise MatrixParseError(f'"entries" must hold n*n = {n * n} pairs, got {count}')

    M = np.empty((n, n), dtype=np.complex128)
    for k, pair in enumerate(entries):
        row, column = divmod(k, n)
        if not isinstance(pair, list) or len(pair) != 2:
            raise MatrixParseError(f"entry must be [re, im], got {pair!r}", row + 1, column + 1)
        M[row, column] = complex(_real(pair[0], row + 1, column + 1), _real(pair[1], row + 1, column + 1))
    return M


def _parse_csv_pairs(text: str) -> ComplexMatrix:
    rows: List[List[str]] = [r for r in csv.reader(io.StringIO(text)) if any(f.strip() for f in r)]
    if not rows:
        raise MatrixParseError("empty csv-pairs input")

    n = len(rows)
    M = np.empty((n, n), dtype=np.complex128)
    for i, fields in enumerate(rows):
        if len(fields) != 2 * n:
            raise MatrixParseError(f"expected {2 * n} fields (n = {n} rows), got {len(fields)}", i + 1)
        values = []
        for j, field in enumerate(fields):
            try:
                value = float(field)
            except ValueError:
                raise MatrixParseError(f"not a real number: {field.strip()!r}", i + 1, j // 2 + 1)
            if not math.isfinite(value):
                raise MatrixParseError("entry is not finite", i + 1, j // 2 + 1)
            values.append(value)
        M[i] = np.array(values[0::2]) + 1j * np.array(values[1::2])
    return M


def parse_matrix(
    source: Source,
    fmt: str = "json",
    det_tol: Optional[float] = None,
    sl_check: bool = True,
) -> ComplexMatrix:
    """Parse a matrix and, unless disabled, check that it lies in SL(n, C).

    Args:
        source: Text, bytes or a readable stream
        fmt: "json" or "csv-pairs"
        det_tol: Allowed |det - 1|
        sl_check: Validate the determinant

    Raises:
        MatrixParseError: If the input is malformed (row/column given where known)
        NotSpecialLinearError: If the determinant check fails
    """
    if fmt not in FORMATS:
        raise MatrixParseError(f"Unknown matrix format '{fmt}'. Available: {', '.join(FORMATS)}")
    text = _read_text(source)
    M = _parse_json(text) if fmt == "json" else _parse_csv_pairs(text)
    logger.debug("parsed %dx%d matrix (%s)", M.shape[0], M.shape[1], fmt)
    if sl_check:
        require_special_linear(M, det_tol)
    return M


def detect_format(path: str) -> str:
    """Matrix format from the file extension, json by default."""
    return _EXTENSIONS.get(os.path.splitext(path)[1].lower(), "json")


def load_matrix(
    path: str, fmt: Optional[str] = None, det_tol: Optional[float] = None, sl_check: bool = True
) -> ComplexMatrix:
    validate_input_file(path)
    with open(path, "rb") as f:
        return parse_matrix(f, fmt or detect_format(path), det_tol, sl_check)


def matrix_to_json(M: ComplexMatrix) -> str:
    """Serialize in the json matrix format."""
    M = np.asarray(M)
    entries = [complex_pair(z) for z in M.reshape(-1)]
    return json.dumps({"n": int(M.shape[0]), "entries": entries})
