"""Deterministic lexicon + suffix-rule part-of-speech tagger.

A Brill-style baseline over a Penn-Treebank-style tagset: bundled one-tag
lexicon, ordered suffix rules for unknown words, and a handful of contextual
repair rules. No runtime training; identical input always yields identical
tags.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .types import DocumentStructure

TAGSET = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "PRP", "PRP$", "RB", "RBR", "RBS",
    "RP", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ",
    "WDT", "WP", "WP$", "WRB",
})

BE_FORMS = frozenset({"be", "am", "is", "are", "was", "were", "been", "being"})
HAVE_FORMS = frozenset({"have", "has", "had", "having"})
_ADVERB_TAGS = frozenset({"RB", "RBR", "RBS"})
_HAS_DIGIT = re.compile(r"\d")

_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ship", "hood", "ism", "ence", "ance", "ity", "acy", "ist", "graphy", "logy")
_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ical", "ic", "ish", "ary", "less", "ian")


def _load_lexicon() -> dict[str, str]:
    text = resources.files("wikiquality.data").joinpath("pos_lexicon.tsv").read_text()
    lexicon: dict[str, str] = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        lexicon[word] = tag
    return lexicon


LEXICON = _load_lexicon()


@dataclass
class TaggedDocument:
    """Sentences of (token, tag) pairs plus the carriers style features need."""

    sentences: list[list[tuple[str, str]]] = field(default_factory=list)
    sentence_terminals: list[str] = field(default_factory=list)
    text: str = ""  # normalized plain text, source for character trigrams


def _suffix_tag(word: str) -> str:
    if _HAS_DIGIT.search(word):
        return "CD"
    if word.endswith("ly") and len(word) > 3:
        return "RB"
    if word.endswith("ing") and len(word) > 4:
        return "VBG"
    if word.endswith("ed") and len(word) > 3:
        return "VBD"
    if word.endswith("est") and len(word) > 4:
        return "JJS"
    if word.endswith(_NOUN_SUFFIXES):
        return "NN"
    if word.endswith(_ADJ_SUFFIXES):
        return "JJ"
    if word.endswith("s") and len(word) > 3 and not word.endswith(("ss", "us", "is")):
        return "NNS"
    return "NN"


def tag_token(word: str, sentence_initial: bool) -> str:
    """Tag one token outside of context; the default for unknowns is NN."""
    folded = word.lower()
    if not sentence_initial and word[:1].isupper():
        exact = LEXICON.get(word)
        if exact is not None:
            return exact
        if _HAS_DIGIT.search(word):
            return "CD"
        return "NNP"
    tag = LEXICON.get(folded)
    if tag is not None:
        return tag
    return _suffix_tag(folded)


_VERB_TAGS = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD"})


def _apply_context(words: list[str], tags: list[str]) -> None:
    for i in range(len(tags)):
        prev = tags[i - 1] if i else ""
        # After a modal: bare verb.
        if prev == "MD" and tags[i] in {"VBP", "VBZ", "VBD", "NN"}:
            tags[i] = "VB"
            continue
        # After to: infinitive for present-tense verbs.
        if prev == "TO" and tags[i] == "VBP":
            tags[i] = "VB"
            continue
        # Determiner forces a nominal reading of bare verbs and gerunds.
        if prev == "DT" and tags[i] in {"VB", "VBP", "VBG"}:
            tags[i] = "NN"
            continue
        # Relative "that" directly governing a verb.
        if words[i].lower() == "that" and i + 1 < len(tags) and tags[i + 1] in _VERB_TAGS:
            tags[i] = "WDT"
            continue
        if tags[i] in {"VBD", "VB"}:
            j = i - 1
            while j >= 0 and tags[j] in _ADVERB_TAGS:
                j -= 1
            if j >= 0:
                anchor = words[j].lower()
                # Past forms after be/have (adverbs allowed) are participles.
                if anchor in BE_FORMS and tags[i] == "VBD":
                    tags[i] = "VBN"
                elif anchor in HAVE_FORMS:
                    tags[i] = "VBN"
                # Plural subject turns a bare verb into present tense.
                elif tags[j] == "NNS" and tags[i] == "VB":
                    tags[i] = "VBP"


def tag_sentence(words: list[str]) -> list[tuple[str, str]]:
    tags = [tag_token(w, sentence_initial=(i == 0)) for i, w in enumerate(words)]
    _apply_context(words, tags)
    return list(zip(words, tags))


def pos_tag(doc: DocumentStructure) -> TaggedDocument:
    """Tag every token of a segmented document; total and deterministic."""
    tagged = TaggedDocument(text=doc.plain_text)
    tagged.sentence_terminals = list(doc.sentence_terminals)
    for words in doc.sentences:
        tagged.sentences.append(tag_sentence(words))
    return tagged
