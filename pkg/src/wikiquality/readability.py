"""The eight readability indices, computed from document counts.

Constants follow the published formulas of the cited primary sources (see
``docs/feature_registry.md`` for the transcription). A document without at
least one word and one sentence yields the 0.0 sentinel for all eight.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources

from .types import DocumentStructure, FeatureVector


def _load_familiar_words() -> frozenset[str]:
    text = resources.files("wikiquality.data").joinpath("familiar_words.txt").read_text()
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


FAMILIAR_WORDS = _load_familiar_words()

_SUFFIX_RULES = (("ies", "y"), ("ied", "y"), ("es", ""), ("ed", ""), ("ed", "e"), ("s", ""), ("d", ""))


def is_familiar(token: str, familiar: frozenset[str] = FAMILIAR_WORDS) -> bool:
    """Membership with simple plural/past-tense stripping."""
    w = token.casefold()
    if not any(c.isalpha() for c in w):
        return True  # numbers are not lexical difficulty
    if w in familiar:
        return True
    for suffix, repl in _SUFFIX_RULES:
        if w.endswith(suffix) and len(w) > len(suffix):
            if w[: -len(suffix)] + repl in familiar:
                return True
    return False


@dataclass(frozen=True)
class ReadabilityCounts:
    """Raw counts feeding the indices; characters are letters/digits only."""

    characters: int
    words: int
    sentences: int
    syllables: int
    complex_words: int  # >= 3 syllables
    long_words: int  # > 6 characters
    dale_chall_difficult_words: int  # not on the familiar-word list
    polysyllable_count: int  # >= 3 syllables (SMOG)

    def __post_init__(self):
        assert self.complex_words <= self.words
        assert self.long_words <= self.words
        assert self.dale_chall_difficult_words <= self.words

    @classmethod
    def from_document(cls, doc: DocumentStructure) -> "ReadabilityCounts":
        tokens = doc.tokens
        syllables = doc.syllable_counts
        poly = sum(1 for n in syllables if n >= 3)
        return cls(
            characters=sum(1 for t in tokens for c in t if c.isalnum()),
            words=len(tokens),
            sentences=len(doc.sentences),
            syllables=sum(syllables),
            complex_words=poly,
            long_words=sum(1 for t in tokens if len(t) > 6),
            dale_chall_difficult_words=sum(1 for t in tokens if not is_familiar(t)),
            polysyllable_count=poly,
        )


def readability_features(counts: ReadabilityCounts) -> FeatureVector:
    """All eight indices; the zero sentinel applies to degenerate inputs."""
    names = (
        "automated_readability_index",
        "coleman_liau_index",
        "flesch_reading_ease",
        "flesch_kincaid_grade",
        "gunning_fog_index",
        "lix",
        "smog_grade",
        "dale_chall_score",
    )
    if counts.words < 1 or counts.sentences < 1:
        return {name: 0.0 for name in names}

    chars_per_word = counts.characters / counts.words
    words_per_sentence = counts.words / counts.sentences
    syllables_per_word = counts.syllables / counts.words

    ari = 4.71 * chars_per_word + 0.5 * words_per_sentence - 21.43
    letters_per_100 = 100.0 * chars_per_word
    sentences_per_100 = 100.0 * counts.sentences / counts.words
    coleman_liau = 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8
    flesch = 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word
    fk_grade = 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59
    fog = 0.4 * (words_per_sentence + 100.0 * counts.complex_words / counts.words)
    lix = words_per_sentence + 100.0 * counts.long_words / counts.words
    smog = 1.0430 * math.sqrt(counts.polysyllable_count * 30.0 / counts.sentences) + 3.1291
    pct_difficult = 100.0 * counts.dale_chall_difficult_words / counts.words
    dale_chall = 0.1579 * pct_difficult + 0.0496 * words_per_sentence
    if pct_difficult > 5.0:
        dale_chall += 3.6365

    values = (ari, coleman_liau, flesch, fk_grade, fog, lix, smog, dale_chall)
    return dict(zip(names, values))
