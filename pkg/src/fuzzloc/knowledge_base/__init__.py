from .inference import (
    LEVELS,
    MissingInputError,
    RiskAssessment,
    classify,
    evaluate_antecedent,
    infer,
)
from .kb import (
    DEFAULT_THRESHOLDS,
    Diagnostic,
    KnowledgeBase,
    KnowledgeBaseError,
    load_kb,
    meta_graph,
    topological_order,
    validate_kb,
)
from .rules import Atom, Rule, RuleSyntaxError, format_rule, load_rules, parse_rule, parse_rules

__all__ = [
    "Atom",
    "DEFAULT_THRESHOLDS",
    "Diagnostic",
    "KnowledgeBase",
    "KnowledgeBaseError",
    "LEVELS",
    "MissingInputError",
    "RiskAssessment",
    "Rule",
    "RuleSyntaxError",
    "classify",
    "evaluate_antecedent",
    "format_rule",
    "infer",
    "load_kb",
    "load_rules",
    "meta_graph",
    "parse_rule",
    "parse_rules",
    "topological_order",
    "validate_kb",
]
