import json
import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from fuzzloc.fuzzy_core import FuzzySet, LinguisticVariable, Trapezoidal, Triangular
from fuzzloc.knowledge_base import (
    Atom,
    KnowledgeBase,
    KnowledgeBaseError,
    MissingInputError,
    Rule,
    RuleSyntaxError,
    classify,
    evaluate_antecedent,
    format_rule,
    infer,
    load_kb,
    parse_rule,
    parse_rules,
    validate_kb,
)
from fuzzloc.workbench.config import shipped

SCHEDULE_KB = shipped("kb/schedule_risk/manifest.json")


def lmh(name, lo=0.0, hi=10.0):
    w = hi - lo
    return LinguisticVariable(
        name,
        (lo, hi),
        (
            FuzzySet("LOW", Trapezoidal(lo, lo, lo + 0.2 * w, lo + 0.5 * w)),
            FuzzySet("MEDIUM", Triangular(lo + 0.2 * w, lo + 0.5 * w, lo + 0.8 * w)),
            FuzzySet("HIGH", Trapezoidal(lo + 0.5 * w, lo + 0.8 * w, hi, hi)),
        ),
    )


def risk(name="Risk"):
    return LinguisticVariable(
        name,
        (0, 100),
        (
            FuzzySet("LOW", Trapezoidal(0, 0, 15, 40)),
            FuzzySet("STANDARD", Triangular(25, 50, 75)),
            FuzzySet("HIGH", Triangular(55, 75, 95)),
            FuzzySet("VERY_HIGH", Trapezoidal(80, 95, 100, 100)),
        ),
    )


# -- rule language -----------------------------------------------------------


def test_parse_product_metric_rule():
    r = parse_rule("IF Volatility_index IS HIGH AND Requirements_quality IS LOW THEN Schedule_Risk IS VERY_HIGH")
    assert r.atoms == (Atom("Volatility_index", "HIGH"), Atom("Requirements_quality", "LOW"))
    assert r.connectives == ("AND",)
    assert r.consequent == Atom("Schedule_Risk", "VERY_HIGH")


def test_parse_process_metric_rule():
    r = parse_rule("IF Manpower IS HIGH AND Design_approaches IS HIGH THEN Product_Service IS HIGH")
    assert len(r.atoms) == 2 and r.consequent.variable == "Product_Service"


def test_keywords_case_insensitive_and_quoted_identifiers():
    r = parse_rule('if "Effort deviation" is HIGH or x Is low then "Risk of schedule" IS "VERY HIGH"')
    assert r.atoms[0] == Atom("Effort deviation", "HIGH")
    assert r.connectives == ("OR",)
    assert r.consequent == Atom("Risk of schedule", "VERY HIGH")


def test_are_reads_as_is():
    assert parse_rule("IF a ARE X THEN b IS Y") == parse_rule("IF a IS X THEN b IS Y")


@pytest.mark.parametrize(
    "text, column",
    [("IF x IS", 8), ("x IS HIGH THEN y IS LOW", 1), ("IF x IS HIGH y IS LOW", 14), ('IF "" IS A THEN b IS C', 4)],
)
def test_syntax_errors_carry_position(text, column):
    with pytest.raises(RuleSyntaxError) as exc:
        parse_rule(text, line=3)
    assert exc.value.line == 3 and exc.value.column == column


def test_rule_file_ids_and_comments():
    rules = parse_rules("# header\nIF a IS X THEN b IS Y  # trailing\n\nIF a# IS X THEN b IS Z\n")
    assert [r.id for r in rules] == ["R1", "R2"]
    assert rules[1].atoms[0].variable == "a#"


def test_syntax_error_reports_file_line():
    with pytest.raises(RuleSyntaxError) as exc:
        parse_rules("IF a IS X THEN b IS Y\nIF a IS\n")
    assert exc.value.line == 2


ident = st.one_of(
    st.from_regex(r"[A-Za-z_][A-Za-z0-9_#]{0,8}", fullmatch=True),
    st.text(string.ascii_letters + ' "\\-', min_size=1, max_size=10),
)
atoms = st.builds(Atom, ident, ident)


@st.composite
def rules(draw):
    ants = draw(st.lists(atoms, min_size=1, max_size=5))
    conns = draw(st.lists(st.sampled_from(["AND", "OR"]), min_size=len(ants) - 1, max_size=len(ants) - 1))
    return Rule(tuple(ants), tuple(conns), draw(atoms))


@given(rules())
def test_rule_print_parse_fixed_point(rule):
    assert parse_rule(format_rule(rule)) == rule


# -- validation -------------------------------------------------------------


def schedule_kb():
    return load_kb(SCHEDULE_KB)


def test_schedule_kb_validates():
    kb = schedule_kb()
    assert validate_kb(kb) == []
    assert [r.id for r in kb.rules] == ["R1", "R2", "R3"]
    assert all(r.kind == "ground" for r in kb.rules)


def test_unknown_variable_and_term_diagnostics():
    kb = KnowledgeBase(
        (lmh("x"),),
        (risk(),),
        (parse_rule("IF y IS HIGH THEN Risk IS LOW", "R1"), parse_rule("IF x IS HUGE THEN Risk IS LOW", "R2")),
    )
    diags = validate_kb(kb)
    assert [d.rule_id for d in diags] == ["R1", "R2"]
    assert "unknown variable" in diags[0].reason
    assert "unknown term" in diags[1].reason and "LOW, MEDIUM, HIGH" in diags[1].reason


def test_consequent_must_be_output():
    kb = KnowledgeBase((lmh("x"), lmh("y")), (risk(),), (parse_rule("IF x IS HIGH THEN y IS LOW"),))
    assert "not an output" in validate_kb(kb)[0].reason


def test_meta_rule_cycle_detected():
    kb = KnowledgeBase(
        (lmh("x"),),
        (lmh("A", 0, 100), lmh("B", 0, 100)),
        (
            parse_rule("IF x IS HIGH THEN A IS HIGH"),
            parse_rule("IF A IS HIGH THEN B IS HIGH"),
            parse_rule("IF B IS LOW THEN A IS LOW"),
        ),
    )
    diags = validate_kb(kb)
    assert len(diags) == 1 and "cycle" in diags[0].reason and "'A', 'B'" in diags[0].reason
    with pytest.raises(KnowledgeBaseError):
        infer(kb, {"x": 9})


def test_rule_kinds_classified():
    kb = KnowledgeBase(
        (lmh("x"),),
        (lmh("A", 0, 100), risk()),
        (parse_rule("IF x IS HIGH THEN A IS HIGH"), parse_rule("IF A IS HIGH THEN Risk IS HIGH")),
        risk_variable="Risk",
    )
    assert [r.kind for r in kb.rules] == ["ground", "meta"]


# -- antecedents and classification ------------------------------------------


def test_antecedent_folds_left():
    r = parse_rule("IF a IS X OR b IS Y AND c IS Z THEN o IS W")
    fz = {"a": {"X": 0.2}, "b": {"Y": 0.9}, "c": {"Z": 0.5}}
    assert evaluate_antecedent(r, fz) == 0.5


@pytest.mark.parametrize("da, db, expected", [(1.0, 1.0, 1.0), (0.6, 0.3, 0.3)])
def test_antecedent_and(da, db, expected):
    r = parse_rule("IF a IS X AND b IS Y THEN o IS W")
    assert evaluate_antecedent(r, {"a": {"X": da}, "b": {"Y": db}}) == expected


def test_antecedent_missing_variable_named():
    with pytest.raises(MissingInputError, match="'?b'?"):
        evaluate_antecedent(parse_rule("IF a IS X AND b IS Y THEN o IS W"), {"a": {"X": 1.0}})


@pytest.mark.parametrize("score, level", [(33, "SR"), (-5, "LR"), (50, "SR"), (32.999, "LR"), (66, "HR")])
def test_classify(score, level):
    assert classify(score, (33, 66)) == level


# -- inference ----------------------------------------------------------------

ZERO = {
    "Volatility_index": 0,
    "Requirements_quality": 10,
    "Manpower": 0,
    "Design_approaches": 0,
    "Effort_deviation": 0,
    "Customer_involvement": 0,
}


def test_product_rule_full_membership_is_high_risk():
    ra = infer(schedule_kb(), ZERO | {"Volatility_index": 10, "Requirements_quality": 0})
    assert ra.rule_activations["R1"] == 1.0
    assert ra.activations["Schedule_Risk"]["VERY_HIGH"] == 1.0
    assert ra.level == "HR" and not ra.no_fire
    assert ra.fired == ("R1",)


def test_no_fire_policy():
    ra = infer(schedule_kb(), ZERO)
    assert ra.no_fire and ra.level == "SR" and ra.fired == ()


def test_missing_input_lists_required():
    with pytest.raises(MissingInputError) as exc:
        infer(schedule_kb(), {"Manpower": 3})
    assert "Volatility_index" in exc.value.missing
    assert len(exc.value.required) == 6


def test_clamped_inputs_flagged():
    ra = infer(schedule_kb(), ZERO | {"Manpower": 42})
    assert ra.clamped == ("Manpower",)


def test_risk_trio_matches_hand_oracle():
    manifest = shipped("kb/risk_trio/manifest.json")
    kb = load_kb(manifest)
    plain = oracles.load_kb_plain(manifest)
    inputs = {"Module_size": 5.0, "Effort_deviation": 6.0, "Productivity": 4.5}
    expected = oracles.mamdani(plain, inputs)
    ra = infer(kb, inputs)
    assert list(ra.rule_activations.values()) == pytest.approx(expected["activations"], abs=1e-9)
    assert ra.score == pytest.approx(expected["score"], abs=1e-3)
    assert ra.level == expected["level"]


inputs6 = st.fixed_dictionaries({k: st.floats(0, 10) for k in ZERO})


@given(inputs6)
def test_infer_deterministic(x):
    kb = schedule_kb()
    assert infer(kb, x) == infer(kb, x)


@given(inputs6, st.lists(st.floats(5, 10), min_size=2, max_size=2))
def test_score_monotone_in_rule_one_volatility(x, vols):
    kb = schedule_kb()
    v0, v1 = sorted(vols)  # HIGH degree is nondecreasing on [5, 10]
    s0 = infer(kb, x | {"Volatility_index": v0}).score
    s1 = infer(kb, x | {"Volatility_index": v1}).score
    # the no-fire fallback sits below every VERY_HIGH centroid, so it is covered too
    assert s1 >= s0 - 1e-9


@given(inputs6)
def test_never_firing_rule_changes_nothing(x):
    kb = schedule_kb()
    # LOW and HIGH do not overlap, so this conjunction is always 0
    dead = parse_rule("IF Volatility_index IS LOW AND Volatility_index IS HIGH THEN Schedule_Risk IS LOW", "R99")
    base = infer(kb, x)
    more = infer(kb.with_rules(kb.rules + (dead,)), x)
    assert more.score == base.score and more.level == base.level and more.fired == base.fired
    assert more.activations == base.activations


def chained_kb():
    return KnowledgeBase(
        (lmh("x"), lmh("y")),
        (lmh("A", 0, 100), lmh("C", 0, 100), risk()),
        (
            parse_rule("IF x IS HIGH THEN A IS HIGH"),
            parse_rule("IF x IS LOW THEN A IS LOW"),
            parse_rule("IF y IS MEDIUM THEN C IS HIGH"),
            parse_rule("IF A IS HIGH AND C IS HIGH THEN Risk IS VERY_HIGH"),
            parse_rule("IF A IS LOW OR C IS LOW THEN Risk IS LOW"),
            parse_rule("IF x IS MEDIUM THEN Risk IS STANDARD"),
        ),
        risk_variable="Risk",
    )


@given(st.floats(0, 10), st.floats(0, 10))
def test_meta_rule_order_independent(x, y):
    kb = chained_kb()
    a = infer(kb, {"x": x, "y": y}, order=["A", "C", "Risk"])
    b = infer(kb, {"x": x, "y": y}, order=["C", "A", "Risk"])
    assert a == b


def test_meta_rule_uses_output_term_activation():
    ra = infer(chained_kb(), {"x": 10, "y": 0})
    assert ra.activations["A"]["HIGH"] == 1.0 and ra.activations["C"]["HIGH"] == 0.0
    assert ra.rule_activations["R4"] == 0.0
    ra = infer(chained_kb(), {"x": 9, "y": 5})
    assert ra.rule_activations["R4"] == min(ra.activations["A"]["HIGH"], ra.activations["C"]["HIGH"])


def test_bad_order_rejected():
    with pytest.raises(ValueError):
        infer(chained_kb(), {"x": 1, "y": 1}, order=["Risk", "A", "C"])


def test_kb_manifest_paths_relative(tmp_path):
    (tmp_path / "v").mkdir()
    (tmp_path / "v" / "in.json").write_text(json.dumps(lmh("x").to_dict()))
    (tmp_path / "v" / "out.json").write_text(json.dumps(risk().to_dict()))
    (tmp_path / "r.txt").write_text("IF x IS HIGH THEN Risk IS HIGH\n")
    (tmp_path / "kb.json").write_text(
        json.dumps({"inputs": ["v/in.json"], "outputs": ["v/out.json"], "rules": ["r.txt"], "thresholds": [20, 80]})
    )
    kb = load_kb(tmp_path / "kb.json")
    assert kb.risk_variable == "Risk" and kb.thresholds == (20.0, 80.0)
    assert infer(kb, {"x": 10}).level == "SR"
