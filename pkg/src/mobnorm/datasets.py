"""Reading and writing paired income data as CSV.

Files are UTF-8, comma-separated, ``.`` decimal point.  Columns are picked
by header name or 0-based index; extra columns are ignored.  Errors point
at the offending cell: rows are numbered from 1 counting the header line,
so they match what an editor shows.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np

from .errors import (
    CsvParseError,
    InsufficientDataError,
    InvalidParamsError,
    MissingColumnError,
    NonPositiveIncomeError,
)
from .estimate import AnySample, IncomeSample, LogIncomeSample

__all__ = [
    "IncomeScale",
    "DatasetSpec",
    "load_csv",
    "sample_csv_bytes",
    "write_sample_csv",
]


class IncomeScale(str, Enum):
    """Whether a file holds money amounts or natural-log incomes."""

    RAW_MONEY = "raw_money"
    ALREADY_LOG = "already_log"


@dataclass(frozen=True)
class DatasetSpec:
    """Where a dataset lives and how to interpret it.

    ``parent_column``/``child_column`` accept a header name (str) or a
    0-based position (int).  Names require ``has_header=True``.
    """

    path: Path
    parent_column: Union[int, str] = "parent"
    child_column: Union[int, str] = "child"
    has_header: bool = True
    income_scale: IncomeScale = IncomeScale.RAW_MONEY

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", Path(self.path))
        object.__setattr__(self, "income_scale", IncomeScale(self.income_scale))
        for name in ("parent_column", "child_column"):
            col = getattr(self, name)
            if isinstance(col, bool) or not isinstance(col, (int, str)):
                raise InvalidParamsError(f"{name} must be a header name or 0-based index, got {col!r}")
            if isinstance(col, int) and col < 0:
                raise InvalidParamsError(f"{name} must be >= 0, got {col}")
            if isinstance(col, str) and not self.has_header:
                raise InvalidParamsError(
                    f"{name}={col!r} selects by name, but the file is declared header-less; "
                    "use a 0-based index"
                )
        if self.parent_column == self.child_column:
            raise InvalidParamsError(
                f"parent and child must come from different columns, both are {self.parent_column!r}"
            )


def _resolve_column(col: Union[int, str], header: list[str], path: Path) -> int:
    if isinstance(col, int):
        return col
    stripped = [h.strip() for h in header]
    try:
        return stripped.index(col)
    except ValueError:
        raise MissingColumnError(
            f"{path}: no column named {col!r} in header {stripped!r}"
        ) from None


def _cell(row: list[str], idx: int, row_no: int, label: Union[int, str], path: Path) -> float:
    if idx >= len(row):
        raise CsvParseError(
            f"{path}: row {row_no} has {len(row)} cells, column {label!r} needs index {idx}",
            row=row_no,
            column=label,
        )
    text = row[idx].strip()
    try:
        value = float(text)
    except ValueError:
        raise CsvParseError(
            f"{path}: row {row_no}, column {label!r}: {text!r} is not a number",
            row=row_no,
            column=label,
        ) from None
    if not np.isfinite(value):
        raise CsvParseError(
            f"{path}: row {row_no}, column {label!r}: {text!r} is not finite",
            row=row_no,
            column=label,
        )
    return value


def load_csv(spec: DatasetSpec) -> AnySample:
    """Load the pairs a DatasetSpec points at.

    Returns IncomeSample for RAW_MONEY files (rejecting values <= 0 with
    the file row in the error) and LogIncomeSample for ALREADY_LOG files.
    Blank lines are skipped; a file with no data rows raises
    InsufficientDataError.
    """
    raw = spec.income_scale is IncomeScale.RAW_MONEY
    parents: list[float] = []
    children: list[float] = []
    with open(spec.path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        row_no = 0
        if spec.has_header:
            try:
                header = next(reader)
            except StopIteration:
                raise InsufficientDataError(f"{spec.path}: file is empty") from None
            row_no = 1
            p_idx = _resolve_column(spec.parent_column, header, spec.path)
            c_idx = _resolve_column(spec.child_column, header, spec.path)
        else:
            p_idx = int(spec.parent_column)
            c_idx = int(spec.child_column)
        for row in reader:
            row_no += 1
            if not row or all(not cell.strip() for cell in row):
                continue
            p = _cell(row, p_idx, row_no, spec.parent_column, spec.path)
            c = _cell(row, c_idx, row_no, spec.child_column, spec.path)
            if raw:
                if p <= 0.0:
                    raise NonPositiveIncomeError(
                        f"{spec.path}: row {row_no}: parent income {p!r} is not strictly positive",
                        row=row_no,
                    )
                if c <= 0.0:
                    raise NonPositiveIncomeError(
                        f"{spec.path}: row {row_no}: child income {c!r} is not strictly positive",
                        row=row_no,
                    )
            parents.append(p)
            children.append(c)
    if not parents:
        raise InsufficientDataError(f"{spec.path}: no data rows")
    cls = IncomeSample if raw else LogIncomeSample
    return cls(parent=np.array(parents), child=np.array(children))


def sample_csv_bytes(
    sample: AnySample,
    parent_name: str = "parent",
    child_name: str = "child",
) -> bytes:
    """Serialize a sample as CSV with 17 significant digits per value,
    enough to reproduce every float bit-for-bit on reload."""
    buf = io.StringIO()
    buf.write(f"{parent_name},{child_name}\n")
    for p, c in zip(sample.parent.tolist(), sample.child.tolist()):
        buf.write(f"{p:.17g},{c:.17g}\n")
    return buf.getvalue().encode("utf-8")


def write_sample_csv(
    sample: AnySample,
    path: Union[str, Path],
    parent_name: str = "parent",
    child_name: str = "child",
) -> None:
    """Write :func:`sample_csv_bytes` output to a file."""
    Path(path).write_bytes(sample_csv_bytes(sample, parent_name, child_name))
