"""CSV-backed subscriber-profile store."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_TABLE = "SUBSCRIBER_PROFILE"
PROFILE_COLUMNS = ("subscriber_name", "imei", "sim", "la", "mobile", "bill_payment")


class StoreError(ValueError):
    pass


class UnknownColumnError(StoreError):
    pass


def canonical_column(name: str) -> str:
    """Column lookup key: case-insensitive, trailing ``#`` ignored (``imei#`` is ``imei``)."""
    return name.rstrip("#").lower()


def parse_number(raw: str) -> float | None:
    raw = raw.strip()
    if not raw:
        return None
    try:
        v = float(raw)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


@dataclass
class SubscriberStore:
    """Rows are kept as strings; row id is the 0-based data-line index."""

    columns: list[str]
    rows: list[dict[str, str]]
    table: str = DEFAULT_TABLE
    _numeric: dict[str, bool] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(set(map(canonical_column, self.columns))) != len(self.columns):
            raise StoreError("duplicate column names")
        self._lookup = {canonical_column(c): c for c in self.columns}

    def __len__(self):
        return len(self.rows)

    def resolve(self, name: str) -> str:
        try:
            return self._lookup[canonical_column(name)]
        except KeyError:
            raise UnknownColumnError(
                f"unknown column {name!r} (columns: {', '.join(self.columns)})"
            ) from None

    def is_numeric(self, column: str) -> bool:
        column = self.resolve(column)
        if column not in self._numeric:
            values = [r.get(column, "") for r in self.rows]
            nonempty = [v for v in values if v.strip()]
            self._numeric[column] = bool(nonempty) and all(
                parse_number(v) is not None for v in nonempty
            )
        return self._numeric[column]

    def numeric_columns(self) -> list[str]:
        return [c for c in self.columns if self.is_numeric(c)]

    def value(self, row_id: int, column: str) -> str:
        return self.rows[row_id].get(self.resolve(column), "")

    def number(self, row_id: int, column: str) -> float | None:
        return parse_number(self.value(row_id, column))

    def matches_table(self, name: str) -> bool:
        return name.lower() == self.table.lower()

    @classmethod
    def from_csv_text(cls, text: str, table: str = DEFAULT_TABLE) -> SubscriberStore:
        if not text.strip():
            raise StoreError("missing header")
        reader = csv.reader(io.StringIO(text, newline=""))
        try:
            header = next(reader)
        except StopIteration:
            raise StoreError("missing header") from None
        header = [h.strip() for h in header]
        if not header or not all(header):
            raise StoreError("line 1: malformed header")
        rows = []
        for values in reader:
            if not values or values == [""]:
                continue
            if len(values) != len(header):
                raise StoreError(
                    f"line {reader.line_num}: expected {len(header)} fields, got {len(values)}"
                )
            rows.append(dict(zip(header, values)))
        return cls(header, rows, table)

    @classmethod
    def from_csv(cls, path: str | Path, table: str = DEFAULT_TABLE) -> SubscriberStore:
        return cls.from_csv_text(Path(path).read_text(encoding="utf-8"), table)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows)
        return buf.getvalue()
