"""Canonical feature registry: names, ordering, and group tags.

This module is the single source of truth for the feature-matrix column set.
Extractors must emit exactly these names; ``docs/feature_registry.md``
publishes the same list with definitions and formula constants. Trigram
columns are named by selection rank so the column set is fixed while the
selected trigrams vary with the training data.
"""

from __future__ import annotations

from .stylefeat import char_trigram_feature_names, pos_trigram_feature_names

DEFAULT_M = 50
DEFAULT_N = 50

LENGTH_FEATURES = [
    "character_count", "word_count", "sentence_count", "syllable_count",
]

STRUCTURE_FEATURES = [
    "section_count", "subsection_count", "paragraph_count",
    "mean_section_size", "mean_paragraph_size",
    "longest_section_size", "shortest_section_size",
    "longest_shortest_section_ratio", "section_size_stddev",
    "mean_subsections_per_section", "abstract_size",
    "abstract_size_article_length_ratio",
    "citation_count", "citations_per_section", "citations_per_text_length",
    "external_link_count", "external_links_per_section",
    "external_links_per_text_length",
    "image_count", "images_per_section", "images_per_text_length",
]

_COUNT_STEMS = [
    "modal_auxiliary", "passive_voice", "to_be_verb", "different_word",
    "noun", "different_noun", "verb", "different_verb",
    "pronoun", "different_pronoun", "adjective", "different_adjective",
    "adverb", "different_adverb",
    "coordinating_conjunction", "different_coordinating_conjunction",
    "subordinating_conjunction", "different_subordinating_conjunction",
]

_INITIAL_CATEGORIES = [
    "pronoun", "article", "coordinating_conjunction",
    "subordinating_conjunction", "determiner", "adjective", "noun", "adverb",
]

STYLE_SCALAR_FEATURES = (
    [
        "mean_sentence_size", "largest_sentence_size", "shortest_sentence_size",
        "large_sentence_rate", "short_sentence_rate",
        "question_count", "question_ratio",
        "exclamation_count", "exclamation_ratio",
    ]
    + [f"sentences_starting_with_{c}" for c in _INITIAL_CATEGORIES]
    + [f"sentences_starting_with_{c}_ratio" for c in _INITIAL_CATEGORIES]
    + [f"{stem}_count" for stem in _COUNT_STEMS]
    + [f"{stem}_per_sentence" for stem in _COUNT_STEMS]
    + [f"{stem}_per_word" for stem in _COUNT_STEMS]
    + [f"{stem}_per_verb" for stem in ("modal_auxiliary", "passive_voice", "to_be_verb")]
    + [
        f"different_{cat}_per_different_word"
        for cat in ("noun", "verb", "pronoun", "adjective", "adverb",
                    "coordinating_conjunction", "subordinating_conjunction")
    ]
    + ["mean_syllables_per_word", "mean_characters_per_word"]
)

READABILITY_FEATURES = [
    "automated_readability_index", "coleman_liau_index",
    "flesch_reading_ease", "flesch_kincaid_grade",
    "gunning_fog_index", "lix", "smog_grade", "dale_chall_score",
]

REVIEW_FEATURES = [
    "age_days", "age_per_review", "reviews_per_day", "reviews_per_user",
    "reviews_per_user_stddev", "discussion_count", "review_count", "user_count",
    "registered_user_count", "anonymous_user_count", "occasional_user_count",
    "registered_user_rate", "anonymous_user_rate", "occasional_user_rate",
    "registered_anonymous_user_ratio",
    "registered_review_count", "anonymous_review_count", "occasional_review_count",
    "registered_review_rate", "anonymous_review_rate", "occasional_review_rate",
    "registered_anonymous_review_ratio",
    "revert_count", "revert_review_ratio", "diversity", "modified_lines_rate",
    "last_3mo_review_count", "last_3mo_review_rate",
    "most_active_review_count", "most_active_review_rate",
    "prob_review",
]

NETWORK_FEATURES = [
    "pagerank", "in_degree", "out_degree",
    "assortativity_in_in", "assortativity_in_out",
    "assortativity_out_in", "assortativity_out_out",
    "local_clustering", "reciprocity", "link_count", "translation_count",
]

SCALAR_FEATURE_COUNT = (
    len(LENGTH_FEATURES) + len(STRUCTURE_FEATURES) + len(STYLE_SCALAR_FEATURES)
    + len(READABILITY_FEATURES) + len(REVIEW_FEATURES) + len(NETWORK_FEATURES)
)

GROUPS = ("Length", "Structure", "Style", "Readability", "Review", "Network")

# Experiment-2 groupings: text features subsume four registry groups.
EXPERIMENT_GROUPS = {
    "Text": ("Length", "Structure", "Style", "Readability"),
    "Review": ("Review",),
    "Network": ("Network",),
}


def style_feature_names(m: int = DEFAULT_M, n: int = DEFAULT_N) -> list[str]:
    return (
        list(STYLE_SCALAR_FEATURES)
        + char_trigram_feature_names(m)
        + pos_trigram_feature_names(n)
    )


def feature_names(m: int = DEFAULT_M, n: int = DEFAULT_N) -> list[str]:
    """All canonical column names in matrix order."""
    return (
        list(LENGTH_FEATURES)
        + list(STRUCTURE_FEATURES)
        + style_feature_names(m, n)
        + list(READABILITY_FEATURES)
        + list(REVIEW_FEATURES)
        + list(NETWORK_FEATURES)
    )


def feature_groups(m: int = DEFAULT_M, n: int = DEFAULT_N) -> dict[str, str]:
    """Mapping from canonical feature name to its group tag."""
    groups: dict[str, str] = {}
    for name in LENGTH_FEATURES:
        groups[name] = "Length"
    for name in STRUCTURE_FEATURES:
        groups[name] = "Structure"
    for name in style_feature_names(m, n):
        groups[name] = "Style"
    for name in READABILITY_FEATURES:
        groups[name] = "Readability"
    for name in REVIEW_FEATURES:
        groups[name] = "Review"
    for name in NETWORK_FEATURES:
        groups[name] = "Network"
    return groups


def experiment_group_columns(group: str, m: int = DEFAULT_M, n: int = DEFAULT_N) -> list[str]:
    """Columns belonging to one experiment group (Text, Review, Network)."""
    if group not in EXPERIMENT_GROUPS:
        raise ValueError(
            f"unknown feature group {group!r}; expected one of {sorted(EXPERIMENT_GROUPS)}"
        )
    member_tags = set(EXPERIMENT_GROUPS[group])
    tags = feature_groups(m, n)
    return [name for name in feature_names(m, n) if tags[name] in member_tags]
