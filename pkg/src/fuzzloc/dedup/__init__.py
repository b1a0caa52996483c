from .grouping import (
    DEFAULT_BRUTE_FORCE_BELOW,
    DEFAULT_THRESHOLD,
    DuplicateGroup,
    HistoryEntry,
    MergeResult,
    blocking_keys,
    candidate_pairs,
    find_duplicate_groups,
    merge_all,
    merge_group,
)
from .records import (
    SubscriberRecord,
    Tables,
    clean_text,
    default_tables,
    normalize,
    normalize_company,
    normalize_phone,
    normalize_street,
    records_from_rows,
)
from .scoring import COMPONENTS, DEFAULT_WEIGHTS, NoComparableFieldsError, SimilarityScore, similarity
from .strings import edit_similarity, levenshtein, soundex
