"""IF-THEN rule language.

    rule  := IF atom ((AND | OR) atom)* THEN atom
    atom  := ident (IS | ARE) ident
    ident := [A-Za-z_][A-Za-z0-9_#]* | "quoted text"

Keywords are case-insensitive and ARE reads as IS. Antecedents fold left to right with no
precedence between AND and OR.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

KEYWORDS = {"IF", "IS", "ARE", "AND", "OR", "THEN"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<word>[A-Za-z_][A-Za-z0-9_#]*)
    """,
    re.VERBOSE,
)
_BARE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_#]*\Z")


class RuleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Atom:
    variable: str
    term: str


@dataclass(frozen=True)
class Rule:
    """``atoms[0] conn[0] atoms[1] conn[1] ...`` -> ``consequent``."""

    atoms: tuple[Atom, ...]
    connectives: tuple[str, ...]
    consequent: Atom
    id: str = ""
    kind: str = field(default="ground", compare=False)

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("rule antecedent must be nonempty")
        if len(self.connectives) != len(self.atoms) - 1:
            raise ValueError("need exactly one connective between consecutive atoms")
        if any(c not in ("AND", "OR") for c in self.connectives):
            raise ValueError(f"bad connective in {self.connectives}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(a.variable for a in self.atoms)

    def __str__(self):
        return format_rule(self)


@dataclass
class _Tok:
    kind: str  # "kw", "ident", "eof"
    value: str
    col: int


def _tokenize(text: str, line: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RuleSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        if m.lastgroup == "quoted":
            body = m.group()[1:-1]
            body = re.sub(r"\\(.)", r"\1", body)
            if not body:
                raise RuleSyntaxError("empty quoted identifier", line, pos + 1)
            toks.append(_Tok("ident", body, pos + 1))
        elif m.lastgroup == "word":
            word = m.group()
            upper = word.upper()
            if upper in KEYWORDS:
                toks.append(_Tok("kw", "IS" if upper == "ARE" else upper, pos + 1))
            else:
                toks.append(_Tok("ident", word, pos + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text) + 1))
    return toks


class _RuleParser:
    def __init__(self, text: str, line: int):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.line = line

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: str):
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise RuleSyntaxError(f"expected {expected}, found {found}", self.line, tok.col)

    def keyword(self, kw: str):
        tok = self.peek()
        if tok.kind != "kw" or tok.value != kw:
            self.error(kw)
        self.i += 1

    def ident(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            self.error(what)
        self.i += 1
        return tok.value

    def atom(self) -> Atom:
        var = self.ident("variable name")
        self.keyword("IS")
        return Atom(var, self.ident("term label"))

    def rule(self, rule_id: str) -> Rule:
        self.keyword("IF")
        atoms = [self.atom()]
        conns = []
        while self.peek().kind == "kw" and self.peek().value in ("AND", "OR"):
            conns.append(self.peek().value)
            self.i += 1
            atoms.append(self.atom())
        self.keyword("THEN")
        consequent = self.atom()
        if self.peek().kind != "eof":
            self.error("end of rule")
        return Rule(tuple(atoms), tuple(conns), consequent, rule_id)


def parse_rule(text: str, rule_id: str = "", line: int = 1) -> Rule:
    return _RuleParser(text, line).rule(rule_id)


def quote_ident(name: str) -> str:
    if _BARE_RE.match(name) and name.upper() not in KEYWORDS:
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_rule(rule: Rule) -> str:
    def atom(a: Atom) -> str:
        return f"{quote_ident(a.variable)} IS {quote_ident(a.term)}"

    parts = [atom(rule.atoms[0])]
    for conn, a in zip(rule.connectives, rule.atoms[1:]):
        parts.append(f"{conn} {atom(a)}")
    return f"IF {' '.join(parts)} THEN {atom(rule.consequent)}"


def parse_rules(text: str, prefix: str = "R") -> list[Rule]:
    """Parse a rule file: one rule per line, ``#`` starts a comment.

    Rules are numbered ``R1, R2, ...`` in file order.
    """
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        rules.append(parse_rule(line, f"{prefix}{len(rules) + 1}", line=lineno))
    return rules


def _strip_comment(line: str) -> str:
    in_quote = False
    escaped = False
    for i, ch in enumerate(line):
        if escaped:
            escaped = False
        elif ch == "\\" and in_quote:
            escaped = True
        elif ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            # '#' is also an identifier character; a comment starts only at
            # the beginning of a token.
            if i == 0 or line[i - 1].isspace():
                return line[:i]
    return line


def load_rules(path: str | Path, prefix: str = "R") -> list[Rule]:
    return parse_rules(Path(path).read_text(encoding="utf-8"), prefix)
