"""Fuzzification catalog: the per-column linguistic variables layered over a store."""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from ..fuzzy_core import LinguisticVariable, fuzzify
from .store import StoreError, SubscriberStore, canonical_column

CATALOG_VERSION = 1


class NonNumericColumnError(StoreError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    table: str
    column: str
    variable: LinguisticVariable
    materialized: dict[int, dict[str, float]] | None = None

    def degrees(self, value: float) -> dict[str, float]:
        return fuzzify(self.variable, value).as_dict()

    def to_dict(self) -> dict:
        doc = {"table": self.table, "column": self.column, "variable": self.variable.to_dict()}
        if self.materialized is not None:
            doc["materialized"] = {str(k): v for k, v in sorted(self.materialized.items())}
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> CatalogEntry:
        mat = doc.get("materialized")
        if mat is not None:
            mat = {int(k): {t: float(d) for t, d in v.items()} for k, v in mat.items()}
        return cls(doc["table"], doc["column"], LinguisticVariable.from_dict(doc["variable"]), mat)


def _key(table: str, column: str) -> tuple[str, str]:
    return (table.lower(), canonical_column(column))


class FuzzificationCatalog:
    """Keyed by (table, column), both matched case-insensitively.

    Readers take snapshots via :meth:`get`; :meth:`put` and
    :meth:`fuzzify_column` serialize writers with a lock.
    """

    def __init__(self, entries=()):
        self._entries: dict[tuple[str, str], CatalogEntry] = {}
        self._lock = threading.Lock()
        for e in entries:
            self._entries[_key(e.table, e.column)] = e

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(sorted(self._entries.values(), key=lambda e: _key(e.table, e.column)))

    def get(self, table: str, column: str) -> CatalogEntry | None:
        return self._entries.get(_key(table, column))

    def put(self, entry: CatalogEntry) -> None:
        with self._lock:
            self._entries[_key(entry.table, entry.column)] = entry

    def to_json(self) -> str:
        return json.dumps(
            {"version": CATALOG_VERSION, "entries": [e.to_dict() for e in self]}, indent=2
        )

    @classmethod
    def from_json(cls, text: str) -> FuzzificationCatalog:
        doc = json.loads(text)
        return cls(CatalogEntry.from_dict(e) for e in doc.get("entries", []))

    @classmethod
    def load(cls, path: str | Path) -> FuzzificationCatalog:
        path = Path(path)
        if not path.exists():
            return cls()
        return cls.from_json(path.read_text(encoding="utf-8"))


def fuzzify_column(
    store: SubscriberStore,
    catalog: FuzzificationCatalog,
    column: str,
    variable: LinguisticVariable,
    table: str | None = None,
    materialize: bool = False,
) -> CatalogEntry:
    """Bind ``variable`` to a numeric column, replacing any earlier entry."""
    table = table or store.table
    if not store.matches_table(table):
        raise StoreError(f"unknown table {table!r}")
    column = store.resolve(column)
    if not store.is_numeric(column):
        raise NonNumericColumnError(f"column {column!r} is not numeric")
    materialized = None
    if materialize:
        materialized = {}
        for row_id in range(len(store)):
            v = store.number(row_id, column)
            if v is not None:
                materialized[row_id] = fuzzify(variable, v).as_dict()
    entry = CatalogEntry(store.table, column, variable, materialized)
    catalog.put(entry)
    return entry
