"""Multi-signal record similarity."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .records import SubscriberRecord, Tables, default_tables
from .strings import edit_similarity, soundex

COMPONENTS = (
    "name_edit",
    "name_phonetic",
    "nickname",
    "email_local",
    "phone",
    "company",
    "street",
    "location",
)

# uniform over the named signals; location is reported but unweighted
DEFAULT_WEIGHTS = {c: 1.0 for c in COMPONENTS} | {"location": 0.0}


class NoComparableFieldsError(ValueError):
    def __init__(self):
        super().__init__("no comparable fields")


@dataclass(frozen=True)
class SimilarityScore:
    components: dict[str, float | None]  # None: a side lacks the field
    combined: float

    def present(self) -> dict[str, float]:
        return {k: v for k, v in self.components.items() if v is not None}


def _swaps(tokens: list[str]) -> list[list[str]]:
    """The name as written, plus last-name-first when there are two or more tokens."""
    if len(tokens) < 2:
        return [tokens]
    return [tokens, [tokens[-1]] + tokens[:-1]]


def _phonetic(ta: list[str], tb: list[str]) -> float:
    # aligned first/last tokens; single-token names compare their only token
    def aligned(x, y):
        if len(x) == 1 or len(y) == 1:
            return [(x[0], y[0])] if len(x) == len(y) else [(x[0], y[0]), (x[-1], y[-1])]
        return [(x[0], y[0]), (x[-1], y[-1])]

    best = 0.0
    for x in _swaps(ta):
        for y in _swaps(tb):
            pairs = aligned(x, y)
            hits = sum(soundex(p) == soundex(q) for p, q in pairs)
            best = max(best, hits / len(pairs))
    return best


def _nickname(ta: list[str], tb: list[str], tables: Tables) -> float | None:
    # evidence-only: 1 when first names are the same person's and the rest agrees
    if ta[1:] != tb[1:]:
        return None
    if ta[0] == tb[0] or tables.nickname_groups(ta[0]) & tables.nickname_groups(tb[0]):
        return 1.0
    return None


def _containment(name_tokens: list[str], local: str) -> float:
    tokens = [t for t in name_tokens if len(t) >= 2]
    if not tokens:
        return 0.0
    return sum(t in local for t in tokens) / len(tokens)


def _raw_agreement(a: SubscriberRecord, b: SubscriberRecord) -> float:
    # no scored signal on both sides: fall back to exact agreement of shared columns
    shared = [c for c in a.fields if a.fields[c].strip() and b.fields.get(c, "").strip()]
    if not shared:
        return 0.0
    return sum(a.fields[c].strip() == b.fields[c].strip() for c in shared) / len(shared)


def similarity(
    a: SubscriberRecord,
    b: SubscriberRecord,
    weights: Mapping[str, float] | None = None,
    tables: Tables | None = None,
) -> SimilarityScore:
    """Score two normalized records; see COMPONENTS for the signals."""
    if a.is_empty() and b.is_empty():
        raise NoComparableFieldsError()
    tables = tables or default_tables()
    weights = DEFAULT_WEIGHTS if weights is None else {**DEFAULT_WEIGHTS, **weights}
    comp: dict[str, float | None] = dict.fromkeys(COMPONENTS)

    ta, tb = a.name.split(), b.name.split()
    if ta and tb:
        comp["name_edit"] = max(
            edit_similarity(" ".join(x), " ".join(y)) for x in _swaps(ta) for y in _swaps(tb)
        )
        comp["name_phonetic"] = _phonetic(ta, tb)
        comp["nickname"] = _nickname(ta, tb, tables)

    if a.email and b.email:
        la, lb = a.email.split("@")[0], b.email.split("@")[0]
        if la == lb:
            comp["email_local"] = 1.0
        else:
            comp["email_local"] = max(
                edit_similarity(la, lb), _containment(ta, lb), _containment(tb, la)
            )
    if a.phone and b.phone:
        comp["phone"] = 1.0 if a.phone == b.phone else 0.0
    if a.company and b.company:
        comp["company"] = edit_similarity(a.company, b.company)
    if a.street and b.street:
        comp["street"] = edit_similarity(a.street, b.street)
    if a.la and b.la:
        comp["location"] = 1.0 if a.la == b.la else 0.0

    num = den = 0.0
    for k, v in comp.items():
        w = weights.get(k, 0.0)
        if v is not None and w > 0:
            num += w * v
            den += w
    combined = num / den if den > 0 else _raw_agreement(a, b)
    return SimilarityScore(comp, min(1.0, max(0.0, combined)))
