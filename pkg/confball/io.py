import json
import math
import sys
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from confball.errors import DimensionError, DomainError, ParseError

FORMATS = ("csv", "json")
#: printf style format of floats in reports
FLOAT_FORMAT = "%.6g"


def _parse_cell(value: Any, row: int, column: int) -> float:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        raise ParseError("Missing value", row, column)
    text = str(value).strip()
    try:
        number = float(text)
    except ValueError:
        raise ParseError(f"Can't read {text!r} as a number",
                         row, column) from None
    if not math.isfinite(number):
        raise ParseError(f"Non-finite value {text!r}", row, column)
    return number


def _is_number(value: Any) -> bool:
    try:
        float(str(value).strip())
    except ValueError:
        return False
    return True


def load_matrix_csv(path: str) -> np.ndarray:
    """Reads a UTF-8 CSV file of decimal numbers into a two
    dimensional array, one row per line. The first line is skipped if
    it is a header, i.e. if one of its cells is not a number.

    :param path: Path of the file.
    :type path: str
    :rtype: np.ndarray
    :raises: ParseError with the 1-based row and column of the first
        cell that is missing, not a number or not finite
    """
    try:
        frame = pd.read_csv(path, header=None, dtype=str, encoding="utf-8",
                            skip_blank_lines=False, keep_default_na=False,
                            na_values=[""])
    except pd.errors.EmptyDataError:
        raise ParseError(f"{path!r} contains no data") from None
    except pd.errors.ParserError as error:
        raise ParseError(f"{path!r} is not a valid CSV file: {error}") \
            from None
    values = frame.to_numpy(dtype=object)
    # 1-based line numbers of the non-blank lines
    lines = [int(i) + 1 for i in np.flatnonzero(~frame.isna().all(axis=1))]
    if lines and not all(
        _is_number(cell) for cell in values[lines[0] - 1]
        if not (isinstance(cell, float) and math.isnan(cell))
    ):
        lines = lines[1:]
    if not lines:
        raise ParseError(f"{path!r} contains no data")
    matrix = np.empty((len(lines), values.shape[1]), dtype=np.float64)
    for i, line in enumerate(lines):
        for j in range(values.shape[1]):
            matrix[i, j] = _parse_cell(values[line - 1, j], line, j + 1)
    return matrix


def load_vector_csv(path: str) -> np.ndarray:
    """Reads a CSV file with a single column of numbers (and an
    optional header) into a vector. See :meth:`load_matrix_csv`.

    :type path: str
    :rtype: np.ndarray
    :raises: DimensionError if the file has more than one column
    """
    matrix = load_matrix_csv(path)
    if matrix.shape[1] != 1:
        raise DimensionError(f"Expected a single column in {path!r}, got "
                             f"{matrix.shape[1]}")
    return matrix[:, 0].copy()


def _round(value: float) -> float:
    return float(FLOAT_FORMAT % value)


def normalize(obj: Any) -> Any:
    """Converts a report into plain JSON types, rounding floats to six
    significant digits.
    """
    if isinstance(obj, pd.DataFrame):
        return [normalize(row) for row in obj.to_dict(orient="records")]
    if isinstance(obj, dict):
        return {str(key): normalize(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return None
        return _round(float(obj))
    return obj


def to_frame(report: Union[pd.DataFrame, dict[str, Any]]) -> pd.DataFrame:
    """Returns the table of a report: the report itself if it is a
    frame, its entry ``"table"`` if present and a two column
    ``key, value`` frame of its scalar entries otherwise.

    :rtype: pd.DataFrame
    """
    if isinstance(report, pd.DataFrame):
        return report
    table = report.get("table")
    if isinstance(table, pd.DataFrame):
        return table
    if isinstance(table, list):
        return pd.DataFrame(table)
    scalars = {key: value for key, value in sorted(report.items())
               if not isinstance(value, (dict, list, tuple, np.ndarray,
                                         pd.DataFrame))}
    return pd.DataFrame({"key": list(scalars),
                         "value": list(scalars.values())})


def render(
    report: Union[pd.DataFrame, dict[str, Any]],
    fmt: str = "json",
) -> str:
    """Renders a report as CSV or JSON text. The output only depends
    on the content of the report: JSON keys are sorted and floats are
    written with six significant digits in both formats.

    :type report: pd.DataFrame | dict[str, Any]
    :param fmt: ``"csv"`` or ``"json"``., defaults to "json"
    :type fmt: str, optional
    :rtype: str
    """
    if fmt == "json":
        return json.dumps(normalize(report), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return to_frame(report).to_csv(index=False,
                                       float_format=FLOAT_FORMAT,
                                       lineterminator="\n")
    raise DomainError(f"Unknown format {fmt!r}, expected one of {FORMATS}")


def emit(
    report: Union[pd.DataFrame, dict[str, Any]],
    fmt: str = "json",
    path: Optional[str] = None,
) -> None:
    """Writes a report rendered by :meth:`render` to ``path`` or to
    standard output if ``path`` is ``None``.

    :raises: OSError if the file can't be written
    """
    text = render(report, fmt)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as file:
        file.write(text)


def write_vector_csv(vector: np.ndarray, path: str,
                     header: str = "value") -> None:
    """Writes a vector with full precision, one value per line."""
    frame = pd.DataFrame({header: np.asarray(vector, dtype=np.float64)})
    frame.to_csv(path, index=False, float_format="%.17g",
                 lineterminator="\n")
