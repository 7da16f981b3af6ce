"""Typed access to the experiment CSV/JSON contract.

The simulator writes long-format CSVs with a header row and 12-significant-
digit floats, plus one metadata sidecar JSON per experiment.  Reading is the
only interaction this package has with the simulator: every number in a
figure comes out of these files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class TableError(ValueError):
    """A CSV that violates the experiment contract."""


class HeaderMismatch(TableError):
    """Columns differ from what the recipe expects."""


@dataclass(frozen=True)
class Table:
    """One CSV: column name -> numpy array (float) or tuple of str.

    Numeric columns parse to float arrays with empty cells as NaN; columns
    with any non-numeric cell stay as strings.
    """

    path: Path
    columns: tuple
    data: dict

    def __getitem__(self, name: str):
        try:
            return self.data[name]
        except KeyError:
            raise TableError(f"{self.path.name} has no column {name!r}") from None

    def __len__(self) -> int:
        return len(self.data[self.columns[0]])

    def unique(self, name: str) -> list:
        values = self[name]
        seen = []
        for value in values:
            if value not in seen:
                seen.append(value)
        return seen

    def where(self, name: str, value) -> "Table":
        column = self[name]
        if isinstance(column, np.ndarray):
            mask = column == value
        else:
            mask = np.array([cell == value for cell in column])
        data = {
            key: (col[mask] if isinstance(col, np.ndarray)
                  else tuple(c for c, keep in zip(col, mask) if keep))
            for key, col in self.data.items()
        }
        return Table(self.path, self.columns, data)


def _parse_column(cells: list):
    values = np.empty(len(cells))
    for i, cell in enumerate(cells):
        if cell == "":
            values[i] = np.nan
            continue
        try:
            values[i] = float(cell)
        except ValueError:
            return tuple(cells)
    return values


def read_table(path, expect_columns=None) -> Table:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise TableError(f"{path.name} is empty") from None
            rows = list(reader)
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    if expect_columns is not None and tuple(header) != tuple(expect_columns):
        raise HeaderMismatch(
            f"{path.name}: columns {header} do not match expected "
            f"{list(expect_columns)}"
        )
    if not rows:
        raise TableError(f"{path.name} has no data rows")
    if any(len(row) != len(header) for row in rows):
        raise TableError(f"{path.name} has ragged rows")
    data = {
        name: _parse_column([row[j] for row in rows])
        for j, name in enumerate(header)
    }
    return Table(path, tuple(header), data)


def read_metadata(path) -> dict:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            meta = json.load(fh)
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise TableError(f"{path.name} is not valid JSON: {exc}") from exc
    if not isinstance(meta, dict) or "files" not in meta:
        raise TableError(f"{path.name} is not an experiment metadata sidecar")
    return meta
