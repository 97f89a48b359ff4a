"""Plain-text segmentation: paragraphs, sentences, word tokens, syllables.

Everything here is rule-based and deterministic. The sentence splitter uses a
fixed abbreviation list bundled with the package (no statistical model).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

_WS_RUN = re.compile(r"[ \t]+")
_BLANK_RUN = re.compile(r"\n{3,}")
_LINE_EDGE = re.compile(r" ?\n ?")
# Word tokens: letters/digits with optional internal apostrophes. Underscore
# is deliberately excluded from \w here.
_TOKEN = re.compile(r"[^\W_]+(?:['’][^\W_]+)*", re.UNICODE)
_SENT_BOUNDARY = re.compile(r"([.!?]+)(\s+)(?=[\"'“‘(\[]?[A-Z0-9])")

VOWELS = frozenset("aeiouy")


def _load_abbreviations() -> frozenset[str]:
    text = resources.files("wikiquality.data").joinpath("abbreviations.txt").read_text()
    words = [ln.strip() for ln in text.splitlines()]
    return frozenset(w for w in words if w and not w.startswith("#"))


ABBREVIATIONS = _load_abbreviations()


def normalize_text(text: str) -> str:
    """Collapse space/tab runs to one space so character counts are stable.

    Line edges are trimmed and runs of blank lines collapse to a single blank
    line (the paragraph separator).
    """
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = _WS_RUN.sub(" ", text)
    text = _LINE_EDGE.sub("\n", text)
    text = _BLANK_RUN.sub("\n\n", text)
    return text.strip()


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def count_syllables(word: str) -> int:
    """Approximate syllables as contiguous vowel groups (a,e,i,o,u,y).

    A silent trailing 'e' is subtracted unless it follows 'l' preceded by a
    consonant (the -Cle pattern: "table", "candle"). Minimum is 1.
    """
    w = "".join(c for c in word.lower() if c.isalpha())
    if not w:
        return 1
    groups = 0
    in_group = False
    for c in w:
        if c in VOWELS:
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    if w.endswith("e"):
        cle = len(w) >= 3 and w[-2] == "l" and w[-3] not in VOWELS
        if not cle:
            groups -= 1
    return max(groups, 1)


def _is_abbreviation(text_before: str) -> bool:
    # Word immediately before the period, e.g. "Dr" in "Dr." or "J" in "J."
    m = re.search(r"([A-Za-z][A-Za-z.]*)$", text_before)
    if not m:
        return False
    word = m.group(1).rstrip(".").lower()
    if not word:
        return False
    if len(word) == 1 and m.group(1)[0].isupper():
        return True  # initials: "J. Smith"
    # Multi-dot abbreviations like "e.g." / "U.S." end in a single letter
    if "." in m.group(1):
        return True
    return word in ABBREVIATIONS


def split_sentences(text: str) -> list[tuple[str, str]]:
    """Split one paragraph into (sentence_text, terminal_punctuation) pairs.

    Boundaries are ``.``, ``!`` or ``?`` followed by whitespace and a capital,
    except after a bundled abbreviation. Sentences without any word token are
    dropped.
    """
    pieces: list[tuple[str, str]] = []
    start = 0
    for m in _SENT_BOUNDARY.finditer(text):
        terminal = m.group(1)
        if "." in terminal and "!" not in terminal and "?" not in terminal:
            if _is_abbreviation(text[start : m.start()]):
                continue
        pieces.append((text[start : m.start()], terminal))
        start = m.end()
    tail = text[start:]
    m = re.search(r"([.!?]+)\s*$", tail)
    if m:
        pieces.append((tail[: m.start(1)], m.group(1)))
    elif tail.strip():
        pieces.append((tail, ""))
    return [(s.strip(), t) for s, t in pieces if tokenize(s)]


@dataclass
class SegmentedText:
    """Result of :func:`segment`: the article body as nested word units."""

    paragraphs: list[str] = field(default_factory=list)
    sentences: list[list[str]] = field(default_factory=list)
    sentence_terminals: list[str] = field(default_factory=list)
    tokens: list[str] = field(default_factory=list)
    syllable_counts: list[int] = field(default_factory=list)


def segment(plain_text: str) -> SegmentedText:
    """Segment normalized plain text into paragraphs, sentences and tokens.

    Total function: empty input yields empty outputs. Every sentence has at
    least one token and every token at least one syllable.
    """
    out = SegmentedText()
    text = normalize_text(plain_text)
    if not text:
        return out
    out.paragraphs = [p for p in re.split(r"\n\s*\n", text) if p.strip()]
    for para in out.paragraphs:
        flat = para.replace("\n", " ")
        for sent, terminal in split_sentences(flat):
            words = tokenize(sent)
            out.sentences.append(words)
            out.sentence_terminals.append(terminal)
            out.tokens.extend(words)
    out.syllable_counts = [count_syllables(t) for t in out.tokens]
    return out
