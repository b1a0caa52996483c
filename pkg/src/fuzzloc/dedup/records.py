"""Subscriber records and their normalization."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from typing import Mapping

# logical field -> CSV columns that may carry it, first match wins
FIELD_ALIASES = {
    "name": ("subscriber_name", "name"),
    "email": ("email",),
    "phone": ("phone", "mobile"),
    "company": ("company",),
    "street": ("street", "address"),
    "la": ("la",),
}

_DROP = re.compile(r"['.]")
_SEPARATE = re.compile(r"[^0-9a-z\s]+")
_SPACES = re.compile(r"\s+")


@dataclass(frozen=True)
class Tables:
    nicknames: tuple[frozenset[str], ...]
    company: dict[str, str]
    street: dict[str, str]
    version: str

    def nickname_groups(self, first: str) -> frozenset[int]:
        return frozenset(i for i, g in enumerate(self.nicknames) if first in g)


def _invert(doc: Mapping[str, list[str]]) -> dict[str, str]:
    return {variant: canon for canon, variants in doc.items() for variant in variants}


@lru_cache(maxsize=None)
def default_tables() -> Tables:
    pkg = resources.files("fuzzloc.data").joinpath("dedup")
    nick = json.loads(pkg.joinpath("nicknames.json").read_text(encoding="utf-8"))
    suff = json.loads(pkg.joinpath("suffixes.json").read_text(encoding="utf-8"))
    return Tables(
        nicknames=tuple(frozenset(g) for g in nick["groups"]),
        company=_invert(suff["company"]),
        street=_invert(suff["street"]),
        version=f"nicknames {nick['version']}, suffixes {suff['version']}",
    )


@dataclass(frozen=True)
class SubscriberRecord:
    """One store row. ``fields`` keeps every CSV column in order."""

    row_id: int
    fields: dict[str, str] = field(default_factory=dict)

    def get(self, logical: str) -> str:
        for col in FIELD_ALIASES.get(logical, (logical,)):
            if col in self.fields:
                return self.fields[col]
        return ""

    def column_for(self, logical: str) -> str | None:
        for col in FIELD_ALIASES.get(logical, (logical,)):
            if col in self.fields:
                return col
        return None

    @property
    def name(self) -> str:
        return self.get("name")

    @property
    def email(self) -> str:
        return self.get("email")

    @property
    def phone(self) -> str:
        return self.get("phone")

    @property
    def company(self) -> str:
        return self.get("company")

    @property
    def street(self) -> str:
        return self.get("street")

    @property
    def la(self) -> str:
        return self.get("la")

    def is_empty(self) -> bool:
        return not any(v.strip() for v in self.fields.values())

    def with_field(self, logical: str, value: str) -> SubscriberRecord:
        col = self.column_for(logical)
        if col is None:
            return self
        return replace(self, fields={**self.fields, col: value})


def records_from_rows(rows) -> list[SubscriberRecord]:
    return [SubscriberRecord(i, dict(r)) for i, r in enumerate(rows)]


def clean_text(s: str) -> str:
    s = _DROP.sub("", s.lower())
    s = _SEPARATE.sub(" ", s)
    return _SPACES.sub(" ", s).strip()


def _canon_last(s: str, table: Mapping[str, str]) -> str:
    tokens = clean_text(s).split()
    if tokens:
        tokens[-1] = table.get(tokens[-1], tokens[-1])
    return " ".join(tokens)


def normalize_phone(s: str) -> str:
    digits = "".join(c for c in s if c.isdigit())
    if len(digits) == 11 and digits.startswith("1"):
        digits = digits[1:]
    return digits


def normalize_company(s: str, tables: Tables | None = None) -> str:
    return _canon_last(s, (tables or default_tables()).company)


def normalize_street(s: str, tables: Tables | None = None) -> str:
    return _canon_last(s, (tables or default_tables()).street)


def normalize(r: SubscriberRecord, tables: Tables | None = None) -> SubscriberRecord:
    tables = tables or default_tables()
    out = r
    for logical, fn in (
        ("name", clean_text),
        ("email", lambda s: s.strip().lower()),
        ("phone", normalize_phone),
        ("company", lambda s: normalize_company(s, tables)),
        ("street", lambda s: normalize_street(s, tables)),
        ("la", lambda s: s.strip().lstrip("0") or ("0" if s.strip() else "")),
    ):
        out = out.with_field(logical, fn(r.get(logical)))
    return out
