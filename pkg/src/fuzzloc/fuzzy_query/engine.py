"""Query execution over a store and its fuzzification catalog."""
from __future__ import annotations

import operator
from dataclasses import dataclass

from .catalog import CatalogEntry, FuzzificationCatalog
from .parser import And, Comparison, Expr, FuzzyPredicate, Not, Or, Query, format_expr, predicates
from .store import SubscriberStore, UnknownColumnError, parse_number

DEFAULT_ALPHA = 0.5

_OPS = {
    "=": operator.eq,
    "<>": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


class QuerySemanticError(ValueError):
    pass


@dataclass(frozen=True)
class RankedRow:
    row_id: int
    values: dict[str, str]
    degree: float

    def to_dict(self) -> dict:
        return {"row_id": self.row_id, "degree": self.degree, "values": self.values}


def _resolve_term(entry: CatalogEntry, term: str) -> str:
    labels = entry.variable.labels
    if term in labels:
        return term
    folded = [t for t in labels if t.lower() == term.lower()]
    if len(folded) == 1:
        return folded[0]
    raise QuerySemanticError(
        f"unknown term {term!r} for {entry.column} (available: {', '.join(labels)})"
    )


class _Evaluator:
    def __init__(self, store: SubscriberStore, catalog: FuzzificationCatalog):
        self.store = store
        self.catalog = catalog
        self.bound: dict[int, tuple[str, CatalogEntry | None, str | None]] = {}

    def bind(self, expr: Expr | None) -> None:
        """Resolve columns, catalog entries and terms before touching any row."""
        for p in predicates(expr):
            try:
                column = self.store.resolve(p.column)
            except UnknownColumnError as exc:
                raise QuerySemanticError(str(exc)) from None
            if isinstance(p, FuzzyPredicate):
                entry = self.catalog.get(self.store.table, column)
                if entry is None:
                    raise QuerySemanticError(
                        f"column {column!r} has no fuzzification entry; fuzzify it first"
                    )
                self.bound[id(p)] = (column, entry, _resolve_term(entry, p.term))
            else:
                self.bound[id(p)] = (column, None, None)

    def degree(self, expr: Expr, row_id: int) -> float:
        if isinstance(expr, And):
            return min(self.degree(expr.left, row_id), self.degree(expr.right, row_id))
        if isinstance(expr, Or):
            return max(self.degree(expr.left, row_id), self.degree(expr.right, row_id))
        if isinstance(expr, Not):
            inner = expr.operand
            if isinstance(inner, Not):
                # exact involution; 1 - (1 - d) can round
                return self.degree(inner.operand, row_id)
            return 1.0 - self.degree(inner, row_id)
        column, entry, term = self.bound[id(expr)]
        raw = self.store.value(row_id, column)
        if isinstance(expr, FuzzyPredicate):
            v = parse_number(raw)
            if v is None:
                return 0.0
            if entry.materialized is not None and row_id in entry.materialized:
                return entry.materialized[row_id][term]
            return entry.degrees(v)[term]
        return 1.0 if _crisp(raw, expr.op, expr.value) else 0.0


def _crisp(raw: str, op: str, literal) -> bool:
    if isinstance(literal, str):
        return _OPS[op](raw.strip(), literal)
    v = parse_number(raw)
    if v is None:
        return False
    return _OPS[op](v, float(literal))


def row_degrees(q: Query, store: SubscriberStore, catalog: FuzzificationCatalog) -> list[float]:
    """Match degree of every row, before the alpha cut."""
    if not store.matches_table(q.table):
        raise QuerySemanticError(f"unknown table {q.table!r} (store holds {store.table})")
    ev = _Evaluator(store, catalog)
    ev.bind(q.where)
    if q.where is None:
        return [1.0] * len(store)
    return [ev.degree(q.where, i) for i in range(len(store))]


def execute(
    q: Query,
    store: SubscriberStore,
    catalog: FuzzificationCatalog,
    alpha: float = DEFAULT_ALPHA,
) -> list[RankedRow]:
    """Rows with degree >= alpha (and > 0), best first, ties by row id."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    degrees = row_degrees(q, store, catalog)
    if q.columns == ("*",):
        cols = list(store.columns)
    else:
        try:
            cols = [store.resolve(c) for c in q.columns]
        except UnknownColumnError as exc:
            raise QuerySemanticError(str(exc)) from None
    hits = [(d, i) for i, d in enumerate(degrees) if d > 0.0 and d >= alpha]
    hits.sort(key=lambda h: (-h[0], h[1]))
    return [RankedRow(i, {c: store.rows[i].get(c, "") for c in cols}, d) for d, i in hits]


def explain(q: Query, catalog: FuzzificationCatalog) -> str:
    """Plan text: one line per predicate, marking crisp/fuzzy and catalog bindings."""
    lines = [f"scan {q.table}"]
    if q.where is None:
        lines.append("  no predicates (every row, degree 1.0)")
    else:
        lines.append(f"  filter: {format_expr(q.where)}")
        if isinstance(q.where, Or):
            lines.append("  combine: OR branches by max")
        for n, p in enumerate(predicates(q.where), start=1):
            if isinstance(p, Comparison):
                lines.append(f"  [{n}] CRISP {format_expr(p)} -> degree 0/1")
                continue
            entry = catalog.get(q.table, p.column)
            if entry is None:
                binding = "MISSING"
            else:
                binding = (
                    f"{entry.table}.{entry.column} "
                    f"({entry.variable.name}: {', '.join(entry.variable.labels)}; "
                    f"{'materialized' if entry.materialized is not None else 'recompute'})"
                )
            lines.append(f"  [{n}] FUZZY {format_expr(p)} -> catalog {binding}")
    bindings = sum(
        1 for p in predicates(q.where)
        if isinstance(p, FuzzyPredicate) and catalog.get(q.table, p.column) is not None
    )
    lines.append(f"catalog bindings: {bindings}")
    lines.append("rank: degree desc, row id asc")
    return "\n".join(lines)
