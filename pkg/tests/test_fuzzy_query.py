import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import gen
import oracles
from fuzzloc.fuzzy_core import FuzzySet, LinguisticVariable, Trapezoidal, Triangular
from fuzzloc.fuzzy_query import (
    And,
    Comparison,
    FuzzificationCatalog,
    FuzzyPredicate,
    NonNumericColumnError,
    Not,
    Or,
    QuerySemanticError,
    QuerySyntaxError,
    StoreError,
    SubscriberStore,
    execute,
    explain,
    format_query,
    fuzzify_column,
    parse_query,
    row_degrees,
)
from fuzzloc.workbench.config import shipped

CRISP_SQL = """SELECT subscriber_name, imei#, sim#, La, mobile#,
bill_payment FROM SUBSCRIBER_PROFILE WHERE
bill_payment <=3000"""
HIGH_OR_SQL = """SELECT subscriber_name, imei#, sim#, La, mobile#,
bill_payment FROM SUBSCRIBER_PROFILE WHERE
bill_payment is HIGH or more than 3000"""


def tri_high():
    return LinguisticVariable(
        "bill_payment",
        (0, 5000),
        (FuzzySet("LOW", Triangular(0, 0, 3000)), FuzzySet("HIGH", Triangular(2000, 5000, 5000))),
    )


def store_of(values, table="SUBSCRIBER_PROFILE"):
    rows = [{"subscriber_name": f"s{i}", "bill_payment": str(v)} for i, v in enumerate(values)]
    return SubscriberStore(["subscriber_name", "bill_payment"], rows, table)


def catalog_for(store, var=None, materialize=False):
    cat = FuzzificationCatalog()
    fuzzify_column(store, cat, "bill_payment", var or tri_high(), materialize=materialize)
    return cat


# -- parsing ----------------------------------------------------------------


def test_parse_bill_crisp_query():
    q = parse_query(CRISP_SQL)
    assert q.columns == ("subscriber_name", "imei#", "sim#", "La", "mobile#", "bill_payment")
    assert q.table == "SUBSCRIBER_PROFILE"
    assert q.where == Comparison("bill_payment", "<=", 3000)


def test_parse_high_or_query_as_written():
    q = parse_query(HIGH_OR_SQL)
    assert q.where == Or(FuzzyPredicate("bill_payment", "HIGH"), Comparison("bill_payment", ">", 3000))
    explicit = "SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HIGH OR bill_payment > 3000"
    assert parse_query(explicit).where == q.where


def test_precedence_not_and_or():
    q = parse_query("SELECT * FROM t WHERE NOT a IS X OR b = 1 AND c < 2")
    assert q.where == Or(Not(FuzzyPredicate("a", "X")), And(Comparison("b", "=", 1), Comparison("c", "<", 2)))


def test_parentheses_override_precedence():
    q = parse_query("select * from t where (a = 1 or b = 2) and c <> 'x'")
    assert q.where == And(Or(Comparison("a", "=", 1), Comparison("b", "=", 2)), Comparison("c", "<>", "x"))


@pytest.mark.parametrize(
    "text", ["SELECT FROM t", "SELECT a FROM", "SELECT a FROM t WHERE", "SELECT a FROM t WHERE a IS", "SELECT a t"]
)
def test_syntax_errors(text):
    with pytest.raises(QuerySyntaxError):
        parse_query(text)


def test_syntax_error_position():
    with pytest.raises(QuerySyntaxError) as exc:
        parse_query("SELECT a FROM t WHERE a ~ 3")
    assert exc.value.position == 24


def test_round_trip_seeded():
    rng = random.Random(11)
    for _ in range(300):
        q = gen.any_query(rng)
        assert parse_query(format_query(q)) == q


# -- catalog ----------------------------------------------------------------


def test_fuzzify_shipped_bill_payment_two_terms():
    store = SubscriberStore.from_csv(shipped("store/subscribers.csv"))
    var = LinguisticVariable(
        "bill_payment",
        (0, 10000),
        (FuzzySet("LOW", Trapezoidal(0, 0, 2000, 4000)), FuzzySet("HIGH", Trapezoidal(2000, 4000, 10000, 10000))),
    )
    entry = fuzzify_column(store, FuzzificationCatalog(), "bill_payment", var)
    assert entry.variable.labels == ("LOW", "HIGH")
    assert entry.degrees(3000)["HIGH"] == 0.5


def test_refuzzify_replaces_and_drops_materialized():
    store = store_of([100, 4000])
    cat = catalog_for(store, materialize=True)
    assert cat.get("subscriber_profile", "BILL_PAYMENT#").materialized is not None
    fuzzify_column(store, cat, "bill_payment", tri_high())
    assert len(cat) == 1 and cat.get("SUBSCRIBER_PROFILE", "bill_payment").materialized is None


def test_fuzzify_non_numeric_column():
    store = store_of([1, 2])
    with pytest.raises(NonNumericColumnError):
        fuzzify_column(store, FuzzificationCatalog(), "subscriber_name", tri_high())


def test_catalog_json_round_trip(tmp_path):
    store = store_of([100, 4000, 2500])
    cat = catalog_for(store, materialize=True)
    path = tmp_path / "catalog.json"
    path.write_text(cat.to_json())
    back = FuzzificationCatalog.load(path)
    assert [e.to_dict() for e in back] == [e.to_dict() for e in cat]
    assert len(FuzzificationCatalog.load(tmp_path / "absent.json")) == 0


# -- execution ----------------------------------------------------------------


def test_fuzzy_predicate_example():
    store = store_of([3500])
    rows = execute(parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HIGH"), store, catalog_for(store), 0.4)
    assert [(r.row_id, r.degree) for r in rows] == [(0, 0.5)]


def test_or_query_crisp_branch_wins():
    store = store_of([3200])
    cat = catalog_for(store)
    assert cat.get("SUBSCRIBER_PROFILE", "bill_payment").degrees(3200)["HIGH"] == pytest.approx(0.4)
    assert row_degrees(parse_query(HIGH_OR_SQL), store, cat) == [1.0]


def test_crisp_query_degrees_are_one():
    store = SubscriberStore.from_csv(shipped("store/subscribers.csv"))
    rows = execute(parse_query(CRISP_SQL), store, FuzzificationCatalog())
    assert {r.degree for r in rows} == {1.0}
    assert [r.row_id for r in rows] == [i for i in range(len(store)) if float(store.rows[i]["bill_payment"]) <= 3000]
    assert list(rows[0].values) == ["subscriber_name", "imei", "sim", "la", "mobile", "bill_payment"]


def test_ordering_degree_then_row_id():
    store = store_of([3500, 5000, 3500, 2600])
    rows = execute(parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HIGH"), store, catalog_for(store), 0.0)
    assert [r.row_id for r in rows] == [1, 0, 2, 3]


def test_unfuzzified_column_named_in_error():
    store = store_of([1])
    with pytest.raises(QuerySemanticError, match="bill_payment"):
        execute(parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HIGH"), store, FuzzificationCatalog())


def test_unknown_term_lists_available():
    store = store_of([1])
    with pytest.raises(QuerySemanticError, match="LOW, HIGH"):
        execute(parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HUGE"), store, catalog_for(store))


def test_term_match_is_case_insensitive():
    store = store_of([5000])
    rows = execute(parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment is high"), store, catalog_for(store))
    assert rows[0].degree == 1.0


def test_unknown_column_and_table():
    store = store_of([1])
    with pytest.raises(QuerySemanticError, match="unknown column"):
        execute(parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE nope > 1"), store, FuzzificationCatalog())
    with pytest.raises(QuerySemanticError, match="unknown table"):
        execute(parse_query("SELECT * FROM other WHERE bill_payment > 1"), store, FuzzificationCatalog())


def test_explain_plans():
    cat = catalog_for(store_of([1]))
    crisp = explain(parse_query(CRISP_SQL), cat)
    assert "catalog bindings: 0" in crisp and "CRISP" in crisp
    two = explain(parse_query(HIGH_OR_SQL), cat)
    assert "OR branches" in two and "[1] FUZZY" in two and "[2] CRISP" in two
    assert "catalog bindings: 1" in two
    missing = explain(parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE mobile IS HIGH"), cat)
    assert "MISSING" in missing


# -- properties ---------------------------------------------------------------

values = st.lists(st.integers(0, 6000), min_size=1, max_size=40)


@given(values, st.sampled_from(["<", "<=", ">", ">=", "=", "<>"]), st.integers(0, 6000))
def test_crisp_embedding(vals, op, bound):
    store = store_of(vals)
    q = parse_query(f"SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment {op} {bound}")
    got = {r.row_id for r in execute(q, store, FuzzificationCatalog())}
    assert got == {i for i, v in enumerate(vals) if gen.OPS[op](v, bound)}


@given(values, st.lists(st.floats(0, 1), min_size=2, max_size=2))
def test_alpha_monotone(vals, alphas):
    store = store_of(vals)
    cat = catalog_for(store)
    q = parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HIGH OR bill_payment IS LOW")
    lo, hi = sorted(alphas)
    assert {r.row_id for r in execute(q, store, cat, hi)} <= {r.row_id for r in execute(q, store, cat, lo)}
    assert all(r.degree > 0 for r in execute(q, store, cat, 0.0))


@given(values)
def test_not_involution(vals):
    store = store_of(vals)
    cat = catalog_for(store)
    base = parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HIGH AND bill_payment > 2500")
    doubled = parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE NOT NOT (bill_payment IS HIGH AND bill_payment > 2500)")
    assert row_degrees(base, store, cat) == row_degrees(doubled, store, cat)


@given(values)
def test_materialized_degrees_coherent(vals):
    store = store_of(vals)
    q = parse_query("SELECT * FROM SUBSCRIBER_PROFILE WHERE bill_payment IS HIGH OR NOT bill_payment IS LOW")
    assert row_degrees(q, store, catalog_for(store, materialize=True)) == row_degrees(q, store, catalog_for(store))
    entry = catalog_for(store, materialize=True).get("SUBSCRIBER_PROFILE", "bill_payment")
    for i, v in enumerate(vals):
        assert entry.materialized[i]["HIGH"] == oracles.mf_value("triangular", (2000, 5000, 5000), min(v, 5000))


# -- store ------------------------------------------------------------------


def test_store_errors():
    with pytest.raises(StoreError, match="missing header"):
        SubscriberStore.from_csv_text("")
    with pytest.raises(StoreError, match="line 3"):
        SubscriberStore.from_csv_text("a,b\n1,2\n3\n")


def test_store_preserves_extra_columns():
    s = SubscriberStore.from_csv_text("subscriber_name,bill_payment,notes\nA,10,vip\n")
    assert s.columns == ["subscriber_name", "bill_payment", "notes"]
    assert SubscriberStore.from_csv_text(s.to_csv_text()).rows == s.rows
    assert s.resolve("BILL_PAYMENT#") == "bill_payment"
