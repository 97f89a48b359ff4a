"""Corpus ingestion from the documented file formats.

Articles arrive as JSON Lines, revision histories as JSON Lines plus optional
sidecars (discussion counts, text snapshots), and the citation graph as a TSV
edge list plus an optional red-link sidecar. Loading is strict: malformed
records fail with the file, line and field named.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional

from .types import (
    Article,
    LinkGraph,
    QualityClass,
    Revision,
    RevisionHistory,
    UserKind,
)


class CorpusFormatError(ValueError):
    """A malformed input record; the message names file, line and field."""


@dataclass
class LoadResult:
    articles: list[Article]
    histories: dict[str, RevisionHistory]
    graph: LinkGraph
    # article id -> list of flags such as "missing_history", "missing_snapshots"
    flags: dict[str, list[str]] = field(default_factory=dict)

    def __iter__(self):
        return iter((self.articles, self.histories, self.graph))

    def flag(self, article_id: str, reason: str) -> None:
        self.flags.setdefault(article_id, []).append(reason)


def _jsonl_records(path: Path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise CorpusFormatError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, record


def _require(record: dict, name: str, kind, path: Path, lineno: int):
    if name not in record:
        raise CorpusFormatError(f"{path}:{lineno}: missing field {name!r}")
    value = record[name]
    if kind is int and isinstance(value, bool):
        raise CorpusFormatError(f"{path}:{lineno}: field {name!r} must be an integer")
    if not isinstance(value, kind):
        raise CorpusFormatError(
            f"{path}:{lineno}: field {name!r} has type {type(value).__name__}"
        )
    return value


def parse_rfc3339(value: str, path: Path, lineno: int) -> datetime:
    try:
        ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise CorpusFormatError(
            f"{path}:{lineno}: field 'timestamp' is not RFC 3339: {value!r}"
        ) from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def load_articles(path: str | Path) -> list[Article]:
    path = Path(path)
    articles: list[Article] = []
    seen: set[str] = set()
    for lineno, rec in _jsonl_records(path):
        art_id = _require(rec, "id", str, path, lineno)
        if art_id in seen:
            raise CorpusFormatError(f"{path}:{lineno}: duplicate article id {art_id!r}")
        seen.add(art_id)
        label = None
        if rec.get("label") is not None:
            raw = _require(rec, "label", str, path, lineno)
            try:
                label = QualityClass.from_label(raw)
            except ValueError:
                raise CorpusFormatError(
                    f"{path}:{lineno}: field 'label' has unknown class {raw!r}"
                ) from None
        articles.append(
            Article(
                id=art_id,
                title=_require(rec, "title", str, path, lineno),
                wikitext=_require(rec, "wikitext", str, path, lineno),
                label=label,
                translations=_require(rec, "translations", int, path, lineno)
                if "translations" in rec
                else 0,
                raw_link_count=_require(rec, "link_count", int, path, lineno)
                if "link_count" in rec
                else 0,
            )
        )
    return articles


def load_revisions(
    path: str | Path,
    discussions_path: str | Path | None = None,
    snapshots_path: str | Path | None = None,
) -> dict[str, RevisionHistory]:
    path = Path(path)
    histories: dict[str, RevisionHistory] = {}
    for lineno, rec in _jsonl_records(path):
        art_id = _require(rec, "article_id", str, path, lineno)
        kind = UserKind.ANONYMOUS if _require(rec, "anonymous", bool, path, lineno) else UserKind.REGISTERED
        rev = Revision(
            revision_id=_require(rec, "revision_id", str, path, lineno),
            timestamp=parse_rfc3339(_require(rec, "timestamp", str, path, lineno), path, lineno),
            user_key=_require(rec, "user", str, path, lineno),
            user_kind=kind,
            content_hash=_require(rec, "sha1", str, path, lineno),
            size_bytes=_require(rec, "size", int, path, lineno) if "size" in rec else 0,
        )
        histories.setdefault(art_id, RevisionHistory(article_id=art_id)).revisions.append(rev)
    for history in histories.values():
        history.revisions.sort(key=lambda r: (r.timestamp, r.revision_id))

    if discussions_path is not None:
        dpath = Path(discussions_path)
        for lineno, rec in _jsonl_records(dpath):
            art_id = _require(rec, "article_id", str, dpath, lineno)
            count = _require(rec, "discussion_count", int, dpath, lineno)
            if art_id in histories:
                histories[art_id].discussion_count = count
    if snapshots_path is not None:
        spath = Path(snapshots_path)
        for lineno, rec in _jsonl_records(spath):
            art_id = _require(rec, "article_id", str, spath, lineno)
            if art_id in histories:
                histories[art_id].snapshot_text_now = _require(rec, "text_now", str, spath, lineno)
                histories[art_id].snapshot_text_3mo = _require(rec, "text_3mo", str, spath, lineno)
    return histories


def load_graph(path: str | Path, red_links_path: str | Path | None = None) -> LinkGraph:
    path = Path(path)
    graph = LinkGraph()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise CorpusFormatError(
                    f"{path}:{lineno}: expected 'citing_id<TAB>cited_id', got {line!r}"
                )
            graph.add_edge(parts[0], parts[1])
    if red_links_path is not None:
        rpath = Path(red_links_path)
        for lineno, rec in _jsonl_records(rpath):
            art_id = _require(rec, "article_id", str, rpath, lineno)
            graph.red_links[art_id] = _require(rec, "red_links", int, rpath, lineno)
    return graph


def load_corpus(
    articles_path: str | Path,
    revisions_path: str | Path,
    graph_path: str | Path,
    discussions_path: str | Path | None = None,
    snapshots_path: str | Path | None = None,
    red_links_path: str | Path | None = None,
) -> LoadResult:
    """Load all three stores and cross-check article ids.

    Articles lacking a revision history or a graph node are flagged, never
    dropped; missing graph nodes are added as isolated nodes so network
    features stay defined.
    """
    articles = load_articles(articles_path)
    histories = load_revisions(revisions_path, discussions_path, snapshots_path)
    graph = load_graph(graph_path, red_links_path)
    result = LoadResult(articles=articles, histories=histories, graph=graph)
    for article in articles:
        if article.id not in histories:
            result.flag(article.id, "missing_history")
        else:
            h = histories[article.id]
            if h.snapshot_text_now is None or h.snapshot_text_3mo is None:
                result.flag(article.id, "missing_snapshots")
        if article.id not in graph.nodes:
            result.flag(article.id, "missing_graph_node")
            graph.add_node(article.id)
        graph.translations[article.id] = article.translations
    return result
