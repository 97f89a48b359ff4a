"""Style features: sentence shape, grammatical category usage, trigrams.

The scalar block has 91 features. On top of it sit the corpus-fitted top-m
character trigrams and top-n POS trigrams, selected by the chi-square
dependence between trigram presence and quality class on training documents
only. Trigram feature columns are named by rank so the column set stays fixed
while the selected trigrams vary with the training fold.
"""

from __future__ import annotations

import json
import re
import warnings
from collections import Counter
from dataclasses import dataclass

from .postag import BE_FORMS, TaggedDocument
from .segmentation import count_syllables
from .types import FeatureVector, QualityClass

PRONOUN_TAGS = frozenset({"PRP", "PRP$", "WP", "WP$"})
NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
ADJECTIVE_TAGS = frozenset({"JJ", "JJR", "JJS"})
ADVERB_TAGS = frozenset({"RB", "RBR", "RBS"})
# Modal auxiliaries count as verbs, which keeps the per-verb ratios in [0, 1].
VERB_TAGS = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD"})
ARTICLE_WORDS = frozenset({"the", "a", "an"})

# A be-form followed by a past participle within this many tokens (only
# adverbs between) reads as a passive construction.
_PASSIVE_WINDOW = 4

# The category order of the paper's count block; "different" variants
# interleave after each countable category.
_CATEGORIES = (
    "noun", "verb", "pronoun", "adjective", "adverb",
    "coordinating_conjunction", "subordinating_conjunction",
)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def category_of(word: str, tag: str) -> list[str]:
    """All grammatical categories a token belongs to (they may overlap)."""
    cats = []
    if tag in NOUN_TAGS:
        cats.append("noun")
    if tag in VERB_TAGS:
        cats.append("verb")
    if tag in PRONOUN_TAGS:
        cats.append("pronoun")
    if tag in ADJECTIVE_TAGS:
        cats.append("adjective")
    if tag in ADVERB_TAGS:
        cats.append("adverb")
    if tag == "CC":
        cats.append("coordinating_conjunction")
    if tag == "IN":
        cats.append("subordinating_conjunction")
    return cats


def _initial_category(word: str, tag: str) -> str | None:
    """Disjoint sentence-initial classes; articles split out of DT."""
    if tag in PRONOUN_TAGS:
        return "pronoun"
    if tag == "DT":
        return "article" if word.lower() in ARTICLE_WORDS else "determiner"
    if tag == "CC":
        return "coordinating_conjunction"
    if tag == "IN":
        return "subordinating_conjunction"
    if tag in ADJECTIVE_TAGS:
        return "adjective"
    if tag in NOUN_TAGS:
        return "noun"
    if tag in ADVERB_TAGS:
        return "adverb"
    return None


def count_passives(sentence: list[tuple[str, str]]) -> int:
    count = 0
    for i, (word, _) in enumerate(sentence):
        if word.lower() not in BE_FORMS:
            continue
        for j in range(i + 1, min(i + _PASSIVE_WINDOW + 1, len(sentence))):
            tag = sentence[j][1]
            if tag == "VBN":
                count += 1
                break
            if tag not in ADVERB_TAGS:
                break
    return count


def _sentence_tallies(sentence: list[tuple[str, str]]) -> dict[str, float]:
    tally: dict[str, float] = {
        "modal_auxiliary": 0.0,
        "passive_voice": float(count_passives(sentence)),
        "to_be_verb": 0.0,
        "word": float(len(sentence)),
        "different_word": float(len({w.casefold() for w, _ in sentence})),
    }
    types: dict[str, set[str]] = {cat: set() for cat in _CATEGORIES}
    for cat in _CATEGORIES:
        tally[cat] = 0.0
    for word, tag in sentence:
        folded = word.casefold()
        if tag == "MD":
            tally["modal_auxiliary"] += 1
        if folded in BE_FORMS:
            tally["to_be_verb"] += 1
        for cat in category_of(word, tag):
            tally[cat] += 1
            types[cat].add(folded)
    for cat in _CATEGORIES:
        tally[f"different_{cat}"] = float(len(types[cat]))
    return tally


def style_scalar_features(tagged: TaggedDocument) -> FeatureVector:
    """The 91 scalar style features of a tagged document."""
    sentences = tagged.sentences
    n_sentences = len(sentences)
    sizes = [len(s) for s in sentences]
    n_words = sum(sizes)
    mean_size = _ratio(n_words, n_sentences)

    fv: FeatureVector = {
        "mean_sentence_size": mean_size,
        "largest_sentence_size": float(max(sizes)) if sizes else 0.0,
        "shortest_sentence_size": float(min(sizes)) if sizes else 0.0,
        "large_sentence_rate": _ratio(sum(1 for s in sizes if s >= mean_size + 10), n_sentences),
        "short_sentence_rate": _ratio(sum(1 for s in sizes if s <= mean_size - 5), n_sentences),
    }
    questions = sum(1 for t in tagged.sentence_terminals if "?" in t)
    exclamations = sum(1 for t in tagged.sentence_terminals if "!" in t)
    fv["question_count"] = float(questions)
    fv["question_ratio"] = _ratio(questions, n_sentences)
    fv["exclamation_count"] = float(exclamations)
    fv["exclamation_ratio"] = _ratio(exclamations, n_sentences)

    initial_order = ("pronoun", "article", "coordinating_conjunction",
                     "subordinating_conjunction", "determiner", "adjective",
                     "noun", "adverb")
    initials = Counter(
        _initial_category(*sentence[0]) for sentence in sentences if sentence
    )
    for cat in initial_order:
        fv[f"sentences_starting_with_{cat}"] = float(initials.get(cat, 0))
    for cat in initial_order:
        fv[f"sentences_starting_with_{cat}_ratio"] = _ratio(initials.get(cat, 0), n_sentences)

    # Whole-article counts; "different" counts are case-folded types. The
    # per-sentence variants of "different" count types within each sentence.
    per_sentence = [_sentence_tallies(s) for s in sentences]
    totals: dict[str, float] = {
        "modal_auxiliary": sum(t["modal_auxiliary"] for t in per_sentence),
        "passive_voice": sum(t["passive_voice"] for t in per_sentence),
        "to_be_verb": sum(t["to_be_verb"] for t in per_sentence),
        "different_word": float(len({w.casefold() for s in sentences for w, _ in s})),
    }
    doc_types: dict[str, set[str]] = {cat: set() for cat in _CATEGORIES}
    for cat in _CATEGORIES:
        totals[cat] = sum(t[cat] for t in per_sentence)
        for sentence in sentences:
            doc_types[cat].update(
                w.casefold() for w, tag in sentence if cat in category_of(w, tag)
            )
        totals[f"different_{cat}"] = float(len(doc_types[cat]))

    count_order = ["modal_auxiliary", "passive_voice", "to_be_verb", "different_word"]
    for cat in _CATEGORIES:
        count_order += [cat, f"different_{cat}"]

    for key in count_order:
        fv[f"{key}_count"] = totals[key]
    for key in count_order:
        fv[f"{key}_per_sentence"] = _ratio(sum(t[key] for t in per_sentence), n_sentences)
    for key in count_order:
        fv[f"{key}_per_word"] = _ratio(totals[key], n_words)
    for key in ("modal_auxiliary", "passive_voice", "to_be_verb"):
        fv[f"{key}_per_verb"] = _ratio(totals[key], totals["verb"])
    for cat in _CATEGORIES:
        fv[f"different_{cat}_per_different_word"] = _ratio(
            totals[f"different_{cat}"], totals["different_word"]
        )

    all_words = [w for s in sentences for w, _ in s]
    fv["mean_syllables_per_word"] = _ratio(sum(count_syllables(w) for w in all_words), n_words)
    fv["mean_characters_per_word"] = _ratio(sum(len(w) for w in all_words), n_words)
    return fv


# ---------------------------------------------------------------------------
# Trigram selection
# ---------------------------------------------------------------------------

_WS = re.compile(r"\s+")


def char_trigrams(text: str) -> list[str]:
    """Overlapping character windows of the case-folded plain text.

    Whitespace runs collapse to single spaces; punctuation stays, as trigram
    style signal includes it.
    """
    flat = _WS.sub(" ", text.casefold()).strip()
    return [flat[i : i + 3] for i in range(len(flat) - 2)]


def pos_trigrams(tagged: TaggedDocument) -> list[tuple[str, str, str]]:
    """Overlapping tag windows, never crossing sentence boundaries."""
    grams = []
    for sentence in tagged.sentences:
        tags = [t for _, t in sentence]
        grams.extend(tuple(tags[i : i + 3]) for i in range(len(tags) - 2))
    return grams


def chi2_score(present_per_class: dict, class_totals: dict) -> float:
    """Chi-square of the 2xK presence/class contingency table.

    Classes are visited in ordinal order so the floating-point sum is
    independent of corpus order.
    """
    total = sum(class_totals.values())
    present_total = sum(present_per_class.values())
    absent_total = total - present_total
    score = 0.0
    for cls in sorted(class_totals, key=lambda c: getattr(c, "ordinal", c)):
        n_cls = class_totals[cls]
        present = present_per_class.get(cls, 0)
        for observed, row_total in ((present, present_total), (n_cls - present, absent_total)):
            expected = row_total * n_cls / total
            if expected:
                score += (observed - expected) ** 2 / expected
    return score


@dataclass(frozen=True)
class TrigramSelector:
    """Immutable ranking of the most class-discriminant trigrams."""

    m: int
    n: int
    char_trigrams: tuple[str, ...]
    pos_trigrams: tuple[tuple[str, str, str], ...]
    char_scores: tuple[float, ...]
    pos_scores: tuple[float, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "format": "wikiquality-trigram-selector/1",
                "m": self.m,
                "n": self.n,
                "char_trigrams": list(self.char_trigrams),
                "char_scores": list(self.char_scores),
                "pos_trigrams": [list(t) for t in self.pos_trigrams],
                "pos_scores": list(self.pos_scores),
            }
        )

    @classmethod
    def from_json(cls, payload: str) -> "TrigramSelector":
        data = json.loads(payload)
        return cls(
            m=data["m"],
            n=data["n"],
            char_trigrams=tuple(data["char_trigrams"]),
            pos_trigrams=tuple(tuple(t) for t in data["pos_trigrams"]),
            char_scores=tuple(data["char_scores"]),
            pos_scores=tuple(data["pos_scores"]),
        )


def _rank(presences: list[set], labels: list[QualityClass], top: int, kind: str):
    class_totals = Counter(labels)
    per_class: dict = {}
    for present, label in zip(presences, labels):
        for gram in present:
            per_class.setdefault(gram, Counter())[label] += 1
    scored = sorted(
        ((gram, chi2_score(counts, class_totals)) for gram, counts in per_class.items()),
        key=lambda item: (-item[1], item[0]),
    )
    if top > len(scored):
        warnings.warn(
            f"requested top {top} {kind} trigrams but only {len(scored)} exist; truncating"
        )
        top = len(scored)
    kept = scored[:top]
    return tuple(g for g, _ in kept), tuple(s for _, s in kept)


def select_trigrams(
    char_presences: list[set],
    pos_presences: list[set],
    labels: list[QualityClass],
    m: int = 50,
    n: int = 50,
) -> TrigramSelector:
    """Rank trigrams by chi-square given per-document presence sets."""
    if len({l for l in labels}) < 2:
        raise ValueError("trigram selection needs at least two distinct labels")
    chars, char_scores = _rank(char_presences, labels, m, "character")
    poses, pos_scores = _rank(pos_presences, labels, n, "POS")
    return TrigramSelector(
        m=m, n=n,
        char_trigrams=chars, pos_trigrams=poses,
        char_scores=char_scores, pos_scores=pos_scores,
    )


def fit_trigram_selector(
    corpus: list[TaggedDocument],
    labels: list[QualityClass],
    m: int = 50,
    n: int = 50,
) -> TrigramSelector:
    """Rank trigrams by chi-square over the training corpus only.

    Deterministic under any corpus permutation: scores aggregate per class
    and ties break lexicographically.
    """
    char_sets = [set(char_trigrams(doc.text)) for doc in corpus]
    pos_sets = [set(pos_trigrams(doc)) for doc in corpus]
    return select_trigrams(char_sets, pos_sets, labels, m, n)


def char_trigram_feature_names(m: int) -> list[str]:
    return [f"char_trigram_rank_{i:03d}" for i in range(1, m + 1)]


def pos_trigram_feature_names(n: int) -> list[str]:
    return [f"pos_trigram_rank_{i:03d}" for i in range(1, n + 1)]


def trigram_features(tagged: TaggedDocument, sel: TrigramSelector) -> FeatureVector:
    """Relative frequency of each selected trigram in one document."""
    char_counts = Counter(char_trigrams(tagged.text))
    char_total = sum(char_counts.values())
    pos_counts = Counter(pos_trigrams(tagged))
    pos_total = sum(pos_counts.values())
    fv: FeatureVector = {}
    for name, gram in zip(char_trigram_feature_names(sel.m), sel.char_trigrams):
        fv[name] = _ratio(char_counts.get(gram, 0), char_total)
    for i in range(len(sel.char_trigrams), sel.m):
        fv[f"char_trigram_rank_{i + 1:03d}"] = 0.0
    for name, gram in zip(pos_trigram_feature_names(sel.n), sel.pos_trigrams):
        fv[name] = _ratio(pos_counts.get(gram, 0), pos_total)
    for i in range(len(sel.pos_trigrams), sel.n):
        fv[f"pos_trigram_rank_{i + 1:03d}"] = 0.0
    return fv
