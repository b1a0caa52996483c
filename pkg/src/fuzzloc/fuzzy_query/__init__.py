from .catalog import CatalogEntry, FuzzificationCatalog, NonNumericColumnError, fuzzify_column
from .engine import DEFAULT_ALPHA, QuerySemanticError, RankedRow, execute, explain, row_degrees
from .parser import (
    And,
    Comparison,
    FuzzyPredicate,
    Not,
    Or,
    Query,
    QuerySyntaxError,
    format_expr,
    format_query,
    parse_query,
    predicates,
)
from .store import DEFAULT_TABLE, PROFILE_COLUMNS, StoreError, SubscriberStore, UnknownColumnError

__all__ = [
    "And",
    "CatalogEntry",
    "Comparison",
    "DEFAULT_ALPHA",
    "DEFAULT_TABLE",
    "FuzzificationCatalog",
    "FuzzyPredicate",
    "NonNumericColumnError",
    "Not",
    "Or",
    "PROFILE_COLUMNS",
    "Query",
    "QuerySemanticError",
    "QuerySyntaxError",
    "RankedRow",
    "StoreError",
    "SubscriberStore",
    "UnknownColumnError",
    "execute",
    "explain",
    "format_expr",
    "format_query",
    "fuzzify_column",
    "parse_query",
    "predicates",
    "row_degrees",
]
