"""Blocking, single-link grouping and merging of duplicate records."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .records import SubscriberRecord, Tables, default_tables, normalize
from .scoring import similarity
from .strings import soundex

DEFAULT_THRESHOLD = 0.85
# below this many records every pair is scored regardless of blocking
DEFAULT_BRUTE_FORCE_BELOW = 50


@dataclass(frozen=True)
class DuplicateGroup:
    members: tuple[int, ...]
    min_score: float
    primary: int
    edges: tuple[tuple[int, int, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "members": list(self.members),
            "primary": self.primary,
            "min_score": self.min_score,
            "edges": [{"a": a, "b": b, "score": s} for a, b, s in self.edges],
        }


@dataclass(frozen=True)
class HistoryEntry:
    field: str
    source_row_id: int
    old_value: str
    new_value: str
    action: str  # "adopted": filled an empty primary field; "discarded": losing value

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "source_row_id": self.source_row_id,
            "old_value": self.old_value,
            "new_value": self.new_value,
            "action": self.action,
        }


@dataclass(frozen=True)
class MergeResult:
    record: SubscriberRecord
    members: tuple[int, ...]
    history: tuple[HistoryEntry, ...] = field(default_factory=tuple)

    def source_of(self, column: str) -> int:
        for h in self.history:
            if h.field == column and h.action == "adopted":
                return h.source_row_id
        return self.record.row_id

    def to_dict(self) -> dict:
        return {
            "primary": self.record.row_id,
            "members": list(self.members),
            "record": self.record.fields,
            "history": [h.to_dict() for h in self.history],
        }


def blocking_keys(r: SubscriberRecord) -> set[tuple[str, str]]:
    """Soundex of each outer name token (covers first/last swaps), the phone
    and the email local part."""
    keys = set()
    tokens = r.name.split()
    for t in {tokens[0], tokens[-1]} if tokens else ():
        code = soundex(t)
        if code:
            keys.add(("soundex", code))
    if r.phone:
        keys.add(("phone", r.phone))
    if r.email:
        keys.add(("email", r.email.split("@")[0]))
    return keys


def candidate_pairs(records: Sequence[SubscriberRecord]) -> list[tuple[int, int]]:
    """Index pairs that share at least one blocking key, sorted.

    A record without any key is paired with every other record.
    """
    blocks = defaultdict(list)
    keyless = []
    for i, r in enumerate(records):
        keys = blocking_keys(r)
        if not keys:
            keyless.append(i)
        for k in keys:
            blocks[k].append(i)
    pairs = set()
    for members in blocks.values():
        pairs.update(combinations(members, 2))
    for i in keyless:
        pairs.update((min(i, j), max(i, j)) for j in range(len(records)) if j != i)
    return sorted(pairs)


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            self.parent[hi] = lo


def find_duplicate_groups(
    records: Sequence[SubscriberRecord],
    threshold: float = DEFAULT_THRESHOLD,
    weights: Mapping[str, float] | None = None,
    blocking: bool = True,
    brute_force_below: int = DEFAULT_BRUTE_FORCE_BELOW,
    tables: Tables | None = None,
) -> list[DuplicateGroup]:
    """Connected components of the ``score >= threshold`` graph.

    With ``blocking`` only pairs sharing a blocking key are scored, unless
    there are fewer than ``brute_force_below`` records. Groups are ordered by
    their smallest row id.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside (0, 1]")
    tables = tables or default_tables()
    norm = [normalize(r, tables) for r in records]
    ids = [r.row_id for r in records]
    if len(set(ids)) != len(ids):
        raise ValueError("row ids must be unique")

    if blocking and len(norm) >= brute_force_below:
        pairs = candidate_pairs(norm)
    else:
        pairs = list(combinations(range(len(norm)), 2))

    def score(i, j):
        return similarity(norm[i], norm[j], weights, tables).combined

    uf = _UnionFind(range(len(norm)))
    edges = []
    for i, j in pairs:
        if norm[i].is_empty() and norm[j].is_empty():
            continue
        s = score(i, j)
        if s >= threshold:
            uf.union(i, j)
            edges.append((i, j, s))

    comps = defaultdict(list)
    for i in range(len(norm)):
        comps[uf.find(i)].append(i)
    groups = []
    for members in comps.values():
        if len(members) < 2:
            continue
        members.sort(key=lambda i: ids[i])
        min_score = min(score(i, j) for i, j in combinations(members, 2))
        member_set = set(members)
        g_edges = sorted(
            (min(ids[i], ids[j]), max(ids[i], ids[j]), s)
            for i, j, s in edges
            if i in member_set
        )
        row_ids = tuple(ids[i] for i in members)
        groups.append(DuplicateGroup(row_ids, min_score, min(row_ids), tuple(g_edges)))
    groups.sort(key=lambda g: g.members[0])
    return groups


def merge_group(group: DuplicateGroup, records: Iterable[SubscriberRecord]) -> MergeResult:
    """Primary (lowest row id) wins; its empty fields are filled from the
    first nonempty member in row-id order. Every adoption and every
    conflicting value that lost is recorded."""
    by_id = {r.row_id: r for r in records}
    members = sorted(group.members)
    primary = by_id[members[0]]
    columns = list(primary.fields)
    for rid in members[1:]:
        columns += [c for c in by_id[rid].fields if c not in columns]

    merged = {}
    history = []
    for col in columns:
        value = primary.fields.get(col, "")
        if not value.strip():
            for rid in members[1:]:
                candidate = by_id[rid].fields.get(col, "")
                if candidate.strip():
                    history.append(HistoryEntry(col, rid, value, candidate, "adopted"))
                    value = candidate
                    break
        merged[col] = value
        for rid in members[1:]:
            other = by_id[rid].fields.get(col, "")
            if other.strip() and other != value:
                history.append(HistoryEntry(col, rid, other, value, "discarded"))
    return MergeResult(SubscriberRecord(primary.row_id, merged), tuple(members), tuple(history))


def merge_all(
    records: Sequence[SubscriberRecord], groups: Sequence[DuplicateGroup]
) -> tuple[list[SubscriberRecord], list[MergeResult]]:
    """Collapse every group into its merged record; other records pass through."""
    results = [merge_group(g, records) for g in groups]
    absorbed = {rid for g in groups for rid in g.members}
    out = [r for r in records if r.row_id not in absorbed]
    out += [m.record for m in results]
    out.sort(key=lambda r: r.row_id)
    return out, results
