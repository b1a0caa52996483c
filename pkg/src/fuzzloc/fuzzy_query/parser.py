"""Recursive-descent parser for the fuzzy-SQL dialect.

    query      := SELECT cols FROM ident [WHERE expr]
    cols       := '*' | ident (',' ident)*
    expr       := expr OR term | term
    term       := term AND factor | factor
    factor     := NOT factor | '(' expr ')' | predicate
    predicate  := ident IS ident              -- fuzzy
                | ident op literal            -- crisp
                | op literal                  -- crisp, column carried over
    op         := '=' | '<' | '<=' | '>' | '>=' | '<>' | '!='
                | MORE THAN | LESS THAN

The elliptical ``op literal`` form reuses the column of the predicate just
before it, so ``bill_payment is HIGH or more than 3000`` reads as
``bill_payment IS HIGH OR bill_payment > 3000``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

KEYWORDS = {"SELECT", "FROM", "WHERE", "AND", "OR", "NOT", "IS", "MORE", "LESS", "THAN"}
COMPARISON_OPS = ("=", "<", "<=", ">", ">=", "<>")


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.message = message
        self.position = position


# -- AST ------------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    column: str
    op: str
    value: Union[float, int, str]


@dataclass(frozen=True)
class FuzzyPredicate:
    column: str
    term: str


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


Expr = Union[Comparison, FuzzyPredicate, And, Or, Not]


@dataclass(frozen=True)
class Query:
    columns: tuple[str, ...]  # ("*",) selects everything
    table: str
    where: Expr | None = None

    def __str__(self):
        return format_query(self)


def predicates(expr: Expr | None) -> list[Comparison | FuzzyPredicate]:
    """Leaf predicates in left-to-right order."""
    if expr is None:
        return []
    if isinstance(expr, (Comparison, FuzzyPredicate)):
        return [expr]
    if isinstance(expr, Not):
        return predicates(expr.operand)
    return predicates(expr.left) + predicates(expr.right)


# -- lexer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<string>'(?:[^']|'')*')
  | (?P<quoted>"(?:[^"]|"")+")
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*\#*)
  | (?P<op><=|>=|<>|!=|=|<|>)
  | (?P<punct>[(),*])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # kw, ident, number, string, op, punct, eof
    value: object
    pos: int


def tokenize(text: str) -> list[Token]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind, raw = m.lastgroup, m.group()
        if kind == "number":
            value = float(raw) if any(c in raw for c in ".eE") else int(raw)
            toks.append(Token("number", value, pos))
        elif kind == "string":
            toks.append(Token("string", raw[1:-1].replace("''", "'"), pos))
        elif kind == "quoted":
            toks.append(Token("ident", raw[1:-1].replace('""', '"'), pos))
        elif kind == "word":
            if raw.upper() in KEYWORDS:
                toks.append(Token("kw", raw.upper(), pos))
            else:
                toks.append(Token("ident", raw, pos))
        elif kind == "op":
            toks.append(Token("op", "<>" if raw == "!=" else raw, pos))
        elif kind == "punct":
            toks.append(Token("punct", raw, pos))
        pos = m.end()
    toks.append(Token("eof", None, len(text)))
    return toks


# -- parser ---------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.last_column: str | None = None

    def peek(self, offset: int = 0) -> Token:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise QuerySyntaxError(f"expected {expected}, found {found}", tok.pos)

    def at_kw(self, *kws: str) -> bool:
        tok = self.peek()
        return tok.kind == "kw" and tok.value in kws

    def expect_kw(self, kw: str):
        if not self.at_kw(kw):
            self.fail(kw)
        self.advance()

    def expect_punct(self, p: str):
        tok = self.peek()
        if tok.kind != "punct" or tok.value != p:
            self.fail(repr(p))
        self.advance()

    def ident(self, what: str) -> str:
        if self.peek().kind != "ident":
            self.fail(what)
        return self.advance().value

    def query(self) -> Query:
        self.expect_kw("SELECT")
        columns = self.select_list()
        self.expect_kw("FROM")
        table = self.ident("table name")
        where = None
        if self.at_kw("WHERE"):
            self.advance()
            where = self.expr()
        if self.peek().kind != "eof":
            self.fail("end of query")
        return Query(columns, table, where)

    def select_list(self) -> tuple[str, ...]:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "*":
            self.advance()
            return ("*",)
        cols = [self.ident("column name")]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.advance()
            cols.append(self.ident("column name"))
        return tuple(cols)

    def expr(self) -> Expr:
        node = self.term()
        while self.at_kw("OR"):
            self.advance()
            node = Or(node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at_kw("AND"):
            self.advance()
            node = And(node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.at_kw("NOT"):
            self.advance()
            return Not(self.factor())
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "(":
            self.advance()
            node = self.expr()
            self.expect_punct(")")
            return node
        return self.predicate()

    def operator(self) -> str | None:
        tok = self.peek()
        if tok.kind == "op":
            self.advance()
            return tok.value
        if self.at_kw("MORE", "LESS"):
            word = self.advance().value
            self.expect_kw("THAN")
            return ">" if word == "MORE" else "<"
        return None

    def literal(self):
        tok = self.peek()
        if tok.kind in ("number", "string"):
            self.advance()
            return tok.value
        self.fail("literal value")

    def predicate(self) -> Expr:
        tok = self.peek()
        if tok.kind == "ident":
            column = self.advance().value
            self.last_column = column
            if self.at_kw("IS"):
                self.advance()
                return FuzzyPredicate(column, self.ident("term label"))
            op = self.operator()
            if op is None:
                self.fail("IS or comparison operator")
            return Comparison(column, op, self.literal())
        op = self.operator()
        if op is not None:
            if self.last_column is None:
                raise QuerySyntaxError("comparison has no column to refer to", tok.pos)
            return Comparison(self.last_column, op, self.literal())
        self.fail("predicate")


def parse_query(text: str) -> Query:
    return Parser(text).query()


# -- printer --------------------------------------------------------------

_BARE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*#*\Z")


def quote_ident(name: str) -> str:
    if _BARE_RE.match(name) and name.upper() not in KEYWORDS:
        return name
    return '"' + name.replace('"', '""') + '"'


def format_literal(value) -> str:
    if isinstance(value, str):
        return "'" + value.replace("'", "''") + "'"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _prec(e: Expr) -> int:
    return {Or: 1, And: 2, Not: 3}.get(type(e), 4)


def format_expr(e: Expr) -> str:
    if isinstance(e, Comparison):
        return f"{quote_ident(e.column)} {e.op} {format_literal(e.value)}"
    if isinstance(e, FuzzyPredicate):
        return f"{quote_ident(e.column)} IS {quote_ident(e.term)}"
    if isinstance(e, Not):
        inner = format_expr(e.operand)
        return f"NOT {inner}" if _prec(e.operand) >= 3 else f"NOT ({inner})"
    op = "OR" if isinstance(e, Or) else "AND"
    p = _prec(e)
    left = format_expr(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = format_expr(e.right)
    # left-associative: a right child of equal precedence needs parentheses
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {op} {right}"


def format_query(q: Query) -> str:
    cols = "*" if q.columns == ("*",) else ", ".join(quote_ident(c) for c in q.columns)
    text = f"SELECT {cols} FROM {quote_ident(q.table)}"
    if q.where is not None:
        text += f" WHERE {format_expr(q.where)}"
    return text
