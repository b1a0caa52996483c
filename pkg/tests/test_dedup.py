import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fuzzloc.dedup import (
    DuplicateGroup,
    NoComparableFieldsError,
    SubscriberRecord,
    default_tables,
    edit_similarity,
    find_duplicate_groups,
    levenshtein,
    merge_all,
    merge_group,
    normalize,
    normalize_company,
    normalize_phone,
    normalize_street,
    records_from_rows,
    similarity,
    soundex,
)
from fuzzloc.fuzzy_query import SubscriberStore
from fuzzloc.workbench.config import shipped


def rec(row_id, **fields):
    base = {"subscriber_name": "", "email": "", "mobile": "", "company": "", "street": ""}
    return SubscriberRecord(row_id, base | {("subscriber_name" if k == "name" else k): v for k, v in fields.items()})


def score(a, b):
    return similarity(normalize(a), normalize(b))


# -- strings and normalization ------------------------------------------------


@pytest.mark.parametrize(
    "word, code",
    [("Robert", "R163"), ("Rupert", "R163"), ("Ashcraft", "A261"), ("Tymczak", "T522"), ("Pfister", "P236"), ("Lee", "L000")],
)
def test_soundex_published_examples(word, code):
    assert soundex(word) == code


@given(st.text("abcdxyz ", max_size=12), st.text("abcdxyz ", max_size=12))
def test_levenshtein_matches_matrix_oracle(a, b):
    assert levenshtein(a, b) == oracles.levenshtein(a, b)
    assert levenshtein(a, b) == levenshtein(b, a)


def test_normalization_examples():
    assert normalize_company("Acme, Inc.") == "acme inc"
    assert normalize_company("ACME Incorporated") == "acme inc"
    assert normalize_phone("(408) 555-0101") == "4085550101"
    assert normalize_phone("+1 408 555 0101") == "4085550101"
    assert normalize_street("123 Main St.") == normalize_street("123 Main Street")


def test_tables_are_versioned_data():
    t = default_tables()
    assert "nicknames" in t.version and "suffixes" in t.version
    assert t.nickname_groups("bob") & t.nickname_groups("robert")


# -- similarity ---------------------------------------------------------------


def test_identical_records_score_one():
    r = rec(0, name="Ravi Kumar", email="ravi.kumar@example.com", mobile="9848012345", company="Acme Inc")
    assert score(r, r).combined == 1.0


def test_name_edit_example():
    s = score(rec(0, name="Jon Smith"), rec(1, name="John Smith"))
    assert s.components["name_edit"] == pytest.approx(1 - 1 / 10)
    assert edit_similarity("jon smith", "john smith") == pytest.approx(0.9)


def test_nickname_example():
    s = score(rec(0, name="Bob Jones"), rec(1, name="Robert Jones"))
    assert s.components["nickname"] == 1.0


def test_nickname_is_evidence_only():
    s = score(rec(0, name="Bob Jones"), rec(1, name="Alice Jones"))
    assert s.components["nickname"] is None


def test_field_swap_keeps_max():
    s = score(rec(0, name="Kumar Ravi"), rec(1, name="Ravi Kumar"))
    assert s.components["name_edit"] == 1.0 and s.components["name_phonetic"] == 1.0


def test_email_matches_name_tokens():
    s = score(rec(0, name="Ravi Kumar", email="rk1987@mail.com"), rec(1, name="Ravi Kumar", email="ravi.kumar@x.org"))
    assert s.components["email_local"] == 1.0


def test_phone_exact_after_normalization():
    s = score(rec(0, mobile="(984) 801-2345"), rec(1, mobile="984.801.2345"))
    assert s.components["phone"] == 1.0


def test_absent_components_do_not_count():
    s = score(rec(0, name="Ravi Kumar", mobile="9848012345"), rec(1, name="Ravi Kumar"))
    assert s.components["phone"] is None and s.combined == 1.0


def test_empty_records_rejected():
    with pytest.raises(NoComparableFieldsError, match="no comparable fields"):
        score(rec(0), rec(1))


FIRST = ["Robert", "Bob", "William", "Bill", "Elizabeth", "Liz", "Anita", "Priya", "Kiran"]
LAST = ["Jones", "Kumar", "Rao", "Smith", "Sharma"]
records = st.builds(
    lambda rid, f, l, e, p, c, s: rec(rid, name=f"{f} {l}", email=e, mobile=p, company=c, street=s),
    st.integers(0, 10**6),
    st.sampled_from(FIRST),
    st.sampled_from(LAST),
    st.sampled_from(["", "a@x.com", "robert.jones@x.com", "kumar@y.in"]),
    st.sampled_from(["", "9848012345", "(984) 801-2345", "4085550101"]),
    st.sampled_from(["", "Acme Inc", "Acme Incorporated", "Globex"]),
    st.sampled_from(["", "12 Main St", "12 Main Street", "9 Oak Rd"]),
)


@given(records, records)
def test_similarity_symmetric_and_bounded(a, b):
    ab, ba = score(a, b), score(b, a)
    assert ab.combined == ba.combined
    assert 0.0 <= ab.combined <= 1.0


@given(records)
def test_similarity_reflexive(a):
    assert score(a, a).combined == 1.0


def test_reflexive_on_unscored_fields():
    r = SubscriberRecord(0, {"imei": "356938035643809", "subscriber_name": ""})
    assert score(r, r).combined == 1.0


# -- grouping -------------------------------------------------------------------


def test_distinct_records_no_groups():
    rs = [rec(0, name="Ravi Kumar", mobile="1"), rec(1, name="Anita Rao", mobile="2"), rec(2, name="Priya Sharma", mobile="3")]
    assert find_duplicate_groups(rs) == []


def test_transitive_group_of_three():
    rs = [
        rec(0, name="Robert Jones", mobile="9848012345"),
        rec(1, name="Robert Jones", mobile="(984) 801-2345"),
        rec(2, name="Robert Jones", mobile="984-801-2345"),
        rec(3, name="Anita Rao"),
    ]
    (g,) = find_duplicate_groups(rs)
    assert g.members == (0, 1, 2) and g.primary == 0 and g.min_score == 1.0


def test_threshold_validated():
    with pytest.raises(ValueError):
        find_duplicate_groups([], threshold=0.0)


def renumber(rs):
    return [SubscriberRecord(i, r.fields) for i, r in enumerate(rs)]


@settings(max_examples=40)
@given(st.lists(records, min_size=2, max_size=20), st.floats(0.5, 0.95), st.floats(0.0, 0.05))
def test_threshold_monotone(rs, lo, bump):
    rs = renumber(rs)
    low = find_duplicate_groups(rs, lo, blocking=False)
    high = find_duplicate_groups(rs, min(1.0, lo + bump), blocking=False)
    for g in high:
        assert any(set(g.members) <= set(h.members) for h in low)


@settings(max_examples=40)
@given(st.lists(records, min_size=2, max_size=30))
def test_blocking_sound_at_default_threshold(rs):
    rs = renumber(rs)
    assert find_duplicate_groups(rs, brute_force_below=0) == find_duplicate_groups(rs, blocking=False)


# -- merging ----------------------------------------------------------------------


def test_merge_fills_empty_field():
    a = rec(0, name="Ravi Kumar", mobile="9848012345")
    b = rec(1, name="Ravi Kumar", mobile="9848012345", email="ravi@x.com")
    m = merge_group(DuplicateGroup((0, 1), 1.0, 0), [a, b])
    assert m.record.fields["email"] == "ravi@x.com"
    assert [(h.field, h.source_row_id, h.old_value, h.new_value) for h in m.history] == [("email", 1, "", "ravi@x.com")]
    assert m.source_of("email") == 1 and m.source_of("mobile") == 0


def test_merge_conflicting_phones_primary_wins():
    rs = [rec(i, name="Ravi Kumar", mobile=p) for i, p in enumerate(["111", "222", "333"])]
    m = merge_group(DuplicateGroup((0, 1, 2), 0.9, 0), rs)
    assert m.record.fields["mobile"] == "111"
    losers = [(h.source_row_id, h.old_value) for h in m.history if h.field == "mobile"]
    assert losers == [(1, "222"), (2, "333")]
    assert all(h.action == "discarded" for h in m.history)


@given(st.lists(records, min_size=2, max_size=6))
def test_merge_conservation(rs):
    rs = renumber(rs)
    m = merge_group(DuplicateGroup(tuple(range(len(rs))), 0.0, 0), rs)
    for col, value in m.record.fields.items():
        if value:
            assert any(r.fields.get(col) == value for r in rs)
            assert rs[m.source_of(col)].fields[col] == value


def corpus():
    store = SubscriberStore.from_csv(shipped("dedup/dedup_corpus.csv"))
    return records_from_rows(store.rows)


def test_merge_then_rededup_is_clean():
    rs = corpus()
    groups = find_duplicate_groups(rs)
    merged, results = merge_all(rs, groups)
    assert len(merged) == len(rs) - sum(len(g.members) - 1 for g in groups)
    assert find_duplicate_groups(merged) == []
    absorbed = {m for g in groups for m in g.members[1:]}
    assert absorbed.isdisjoint(r.row_id for r in merged)


def test_corpus_truth_file_consistent():
    truth = json.loads(shipped("dedup/dedup_truth.json").read_text())
    kinds = [d["kind"] for d in truth["duplicates"]]
    assert len(kinds) == 20 and set(kinds) == {"edit", "nickname", "phone"}
