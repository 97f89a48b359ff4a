"""A total, deterministic wikitext parser.

Produces a :class:`~wikiquality.types.DocumentStructure`: section tree,
plain-text segmentation, and counts of citations, links and images. The
parser never raises on malformed markup; unbalanced constructs are repaired
and recorded in ``anomaly_count``. Templates are never expanded: ``{{cite
...}}`` counts as a citation, every template is removed from the plain text.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass

from .segmentation import normalize_text, segment
from .types import DocumentStructure, Section

_COMMENT = re.compile(r"<!--.*?-->", re.DOTALL)
_REF_PAIR = re.compile(r"<ref\b[^>/]*>.*?</ref\s*>", re.DOTALL | re.IGNORECASE)
_REF_SELF = re.compile(r"<ref\b[^>]*/\s*>", re.IGNORECASE)
_REF_OPEN = re.compile(r"<ref\b[^>]*>", re.IGNORECASE)
_REF_CLOSE = re.compile(r"</ref\s*>", re.IGNORECASE)
# Tags whose content is not prose; dropped together with their bodies.
_DROP_TAGS = ("nowiki", "math", "code", "pre", "source", "syntaxhighlight", "timeline", "score")
_GALLERY = re.compile(r"<gallery\b[^>]*>(.*?)</gallery\s*>", re.DOTALL | re.IGNORECASE)
_HTML_TAG = re.compile(r"</?[a-zA-Z][a-zA-Z0-9]*(\s[^<>]*)?/?>")
_HEADING = re.compile(r"^(={2,6})(.*?)(={2,6})\s*$")
_BRACKET_EXT_LINK = re.compile(r"\[(?:https?|ftp)://[^\s\]]*\s*([^\]]*)\]", re.IGNORECASE)
_BARE_URL = re.compile(r"(?:https?|ftp)://[^\s<>\[\]]+", re.IGNORECASE)
_QUOTES = re.compile(r"'{2,}")
_LIST_PREFIX = re.compile(r"^[*#:;]+\s*", re.MULTILINE)
_TABLE_ROW_MARKUP = re.compile(r"^\{\||\|\}|^\|-.*$|^[|!].*$", re.MULTILINE)
_EXTERNAL_SECTION = re.compile(r"^external links?$", re.IGNORECASE)

_IMAGE_PREFIXES = ("file:", "image:")
_DROP_NAMESPACES = ("category:",)
_INTERLANG = re.compile(r"[a-z]{2,3}(-[a-z]+)?:")


@dataclass
class _ParseCounts:
    citations: int = 0
    internal_links: int = 0
    external_links: int = 0
    images: int = 0
    anomalies: int = 0


def _strip_refs(text: str, counts: _ParseCounts) -> str:
    text, n1 = _REF_PAIR.subn("", text)
    text, n2 = _REF_SELF.subn("", text)
    counts.citations += n1 + n2
    # Leftover unmatched <ref> or </ref> tags: drop the tag, keep the text.
    text, n3 = _REF_OPEN.subn("", text)
    text, n4 = _REF_CLOSE.subn("", text)
    counts.anomalies += n3 + n4
    return text


def _drop_tag_blocks(text: str, counts: _ParseCounts) -> str:
    for tag in _DROP_TAGS:
        pattern = re.compile(rf"<{tag}\b[^>]*>.*?</{tag}\s*>", re.DOTALL | re.IGNORECASE)
        text = pattern.sub("", text)

    def gallery(m: re.Match) -> str:
        for line in m.group(1).splitlines():
            if line.strip().lower().startswith(_IMAGE_PREFIXES):
                counts.images += 1
        return ""

    return _GALLERY.sub(gallery, text)


def _strip_braced(text: str, open_s: str, close_s: str, counts: _ParseCounts, on_block=None) -> str:
    """Remove balanced ``open_s``...``close_s`` blocks, nesting included.

    Stray delimiters are dropped alone (the enclosed text survives) and
    counted as anomalies, which keeps the scan total on any input.
    """
    spans: list[tuple[int, int]] = []
    stack: list[int] = []
    i, n = 0, len(text)
    while i < n:
        if text.startswith(open_s, i):
            stack.append(i)
            i += len(open_s)
        elif text.startswith(close_s, i):
            i += len(close_s)
            if stack:
                start = stack.pop()
                if on_block is not None:
                    on_block(text[start:i])
                if not stack:
                    spans.append((start, i))
            else:
                counts.anomalies += 1
                spans.append((i - len(close_s), i))
        else:
            i += 1
    counts.anomalies += len(stack)
    for start in stack:  # unclosed opener: drop the braces, keep the text
        spans.append((start, start + len(open_s)))
    spans.sort()
    out: list[str] = []
    pos = 0
    for s, e in spans:
        if s >= pos:
            out.append(text[pos:s])
            pos = e
        elif e > pos:
            pos = e
    out.append(text[pos:])
    return "".join(out)


def _strip_templates(text: str, counts: _ParseCounts) -> str:
    def on_template(block: str) -> None:
        name = block[2:].split("|", 1)[0].split("}}", 1)[0].strip().lower()
        if name.startswith(("cite", "citation")):
            counts.citations += 1

    return _strip_braced(text, "{{", "}}", counts, on_template)


def _strip_tables(text: str, counts: _ParseCounts) -> str:
    text = _strip_braced(text, "{|", "|}", counts)
    return _TABLE_ROW_MARKUP.sub("", text)


def _replace_wikilinks(text: str, counts: _ParseCounts) -> str:
    """Resolve ``[[...]]``: count images and article links, keep display text."""
    out: list[str] = []
    i, n = 0, len(text)
    while i < n:
        if not text.startswith("[[", i):
            out.append(text[i])
            i += 1
            continue
        depth, j = 1, i + 2
        while j < n and depth:
            if text.startswith("[[", j):
                depth += 1
                j += 2
            elif text.startswith("]]", j):
                depth -= 1
                j += 2
            else:
                j += 1
        if depth:  # unclosed: keep the rest as literal text
            counts.anomalies += 1
            out.append(text[i + 2 :])
            break
        inner = text[i + 2 : j - 2]
        i = j
        target = inner.split("|", 1)[0].strip()
        target_l = target.lower()
        if target_l.startswith(_IMAGE_PREFIXES):
            counts.images += 1
            continue
        if ":" in target:
            prefix = target_l.split(":", 1)[0] + ":"
            if prefix in _DROP_NAMESPACES or _INTERLANG.fullmatch(prefix):
                continue
            label = inner.rsplit("|", 1)[1] if "|" in inner else target.split(":", 1)[1]
            out.append(label.strip())
            continue
        counts.internal_links += 1
        display = (inner.rsplit("|", 1)[1] if "|" in inner else target).strip()
        m = re.match(r"\w+", text[i:])
        if m:  # trailing letters blend into the label: [[dog]]s
            display += m.group(0)
            i += m.end()
        out.append(display)
    return "".join(out)


def _replace_external_links(text: str, counts: _ParseCounts, count_bare: bool) -> str:
    def bracketed(m: re.Match) -> str:
        counts.external_links += 1
        return m.group(1)

    text = _BRACKET_EXT_LINK.sub(bracketed, text)
    if count_bare:
        counts.external_links += len(_BARE_URL.findall(text))
    return _BARE_URL.sub("", text)


def _clean_body(text: str, counts: _ParseCounts, in_external_section: bool) -> str:
    text = _replace_wikilinks(text, counts)
    text = _replace_external_links(text, counts, count_bare=in_external_section)
    text = _QUOTES.sub("", text)
    text = _HTML_TAG.sub(" ", text)
    text = _LIST_PREFIX.sub("", text)
    text = text.replace("[", " ").replace("]", " ")
    return normalize_text(text)


def parse_wikitext(wikitext: str) -> DocumentStructure:
    """Parse raw wikitext into a structured plain-text document.

    ``== X ==`` opens a depth-1 section, ``=== X ===`` a depth-2 subsection,
    and so on; the abstract is everything before the first heading. Total on
    arbitrary input; repairs are tallied in ``anomaly_count``.
    """
    counts = _ParseCounts()
    text = wikitext.replace(" ", " ")
    text = html.unescape(text)
    text = _COMMENT.sub("", text)
    text = _strip_refs(text, counts)
    text = _drop_tag_blocks(text, counts)
    text = _strip_templates(text, counts)
    text = _strip_tables(text, counts)

    doc = DocumentStructure()
    blocks: list[tuple[Section | None, list[str]]] = [(None, [])]
    for line in text.split("\n"):
        m = _HEADING.match(line.strip())
        if m:
            depth = min(len(m.group(1)), len(m.group(3))) - 1
            blocks.append((Section(title=m.group(2).strip(), depth=depth), []))
        else:
            blocks[-1][1].append(line)

    stack: list[Section] = []
    for section, lines in blocks:
        body = "\n".join(lines)
        if section is None:
            doc.abstract_text = _clean_body(body, counts, in_external_section=False)
            continue
        is_external = bool(_EXTERNAL_SECTION.match(section.title))
        section.body_text = _clean_body(body, counts, in_external_section=is_external)
        section.char_size = len(section.body_text)
        while stack and stack[-1].depth >= section.depth:
            stack.pop()
        if stack:
            stack[-1].children.append(section)
        else:
            doc.sections.append(section)
        stack.append(section)

    parts = [doc.abstract_text] + [s.body_text for s in doc.iter_sections()]
    doc.plain_text = "\n\n".join(p for p in parts if p)
    seg = segment(doc.plain_text)
    doc.paragraphs = seg.paragraphs
    doc.sentences = seg.sentences
    doc.sentence_terminals = seg.sentence_terminals
    doc.tokens = seg.tokens
    doc.syllable_counts = seg.syllable_counts
    doc.citation_count = counts.citations
    doc.internal_link_count = counts.internal_links
    doc.external_link_count = counts.external_links
    doc.image_count = counts.images
    doc.anomaly_count = counts.anomalies
    return doc
