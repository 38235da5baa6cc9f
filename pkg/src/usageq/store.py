"""Persisted question collection served by TF-IDF inner-product ranking.

The index is a cache: it serializes to one self-describing text file
(versioned header, vocabulary block, entries block, postings block) and can
always be rebuilt from the questions file.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .questions import ElicitationQuestion
from .textproc import word_tokens

log = logging.getLogger(__name__)

FORMAT_NAME = "usageq-question-index"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class IndexEntry:
    entry_id: str
    category: str
    text: str
    flags: frozenset[str]


@dataclass
class QuestionIndex:
    entries: list[IndexEntry]
    vocabulary: dict[str, int]  # term -> document frequency
    vectors: list[Counter]  # per-entry raw term counts

    def idf(self, term: str) -> float:
        df = self.vocabulary.get(term, 0)
        if df < 1:
            return 0.0
        return math.log(len(self.entries) / df)

    @property
    def categories(self) -> set[str]:
        return {e.category for e in self.entries}


def _entry_id(question: ElicitationQuestion, ordinal: int) -> str:
    review_id, sent_idx = question.source
    return f"{review_id}:{sent_idx}:{ordinal}"


def build_index(
    questions: Sequence[ElicitationQuestion], include_generic: bool = False
) -> QuestionIndex:
    """Deterministic TF-IDF index; generic-flagged questions are left out
    unless include_generic is set."""
    if not questions:
        raise ValueError("cannot index an empty question collection")
    entries = []
    vectors = []
    vocabulary: dict[str, int] = {}
    for ordinal, q in enumerate(questions):
        if not include_generic and "generic" in q.flags:
            continue
        counts = Counter(word_tokens(q.text))
        entries.append(
            IndexEntry(_entry_id(q, ordinal), q.category, q.text, frozenset(q.flags))
        )
        vectors.append(counts)
        for term in counts:
            vocabulary[term] = vocabulary.get(term, 0) + 1
    if not entries:
        raise ValueError("no questions left to index after filtering")
    return QuestionIndex(entries, vocabulary, vectors)


def query(
    index: QuestionIndex,
    text: str,
    category: str | None = None,
    k: int = 5,
) -> list[tuple[IndexEntry, float]]:
    """Top-k entries by TF-IDF inner product; zero-score entries dropped,
    ties broken by entry id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if category is not None and category not in index.categories:
        log.warning("query category %r not present in the index", category)
        return []
    qcounts = Counter(word_tokens(text))
    qweights = {
        t: c * index.idf(t) for t, c in qcounts.items() if index.idf(t) > 0.0
    }
    if not qweights:
        return []
    scored = []
    for entry, vec in zip(index.entries, index.vectors):
        if category is not None and entry.category != category:
            continue
        score = 0.0
        for term, qw in qweights.items():
            tf = vec.get(term)
            if tf:
                score += qw * tf * index.idf(term)
        if score > 0.0:
            scored.append((entry, score))
    scored.sort(key=lambda es: (-es[1], es[0].entry_id))
    return scored[:k]


def save_index(index: QuestionIndex, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            json.dumps(
                {
                    "format": FORMAT_NAME,
                    "version": FORMAT_VERSION,
                    "entries": len(index.entries),
                    "vocabulary": len(index.vocabulary),
                }
            )
            + "\n"
        )
        fh.write("[vocabulary]\n")
        for term in sorted(index.vocabulary):
            fh.write(f"{term}\t{index.vocabulary[term]}\n")
        fh.write("[entries]\n")
        for entry in index.entries:
            flags = ",".join(sorted(entry.flags))
            text = " ".join(entry.text.split())
            fh.write(f"{entry.entry_id}\t{entry.category}\t{flags}\t{text}\n")
        fh.write("[postings]\n")
        for i, vec in enumerate(index.vectors):
            cells = " ".join(f"{t}:{c}" for t, c in sorted(vec.items()))
            fh.write(f"{i}\t{cells}\n")


def load_index(path: str | Path) -> QuestionIndex:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty index file")
    header = json.loads(lines[0])
    if header.get("format") != FORMAT_NAME:
        raise ValueError(f"{path}: not a question index file")
    if header.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported index version {header.get('version')}")
    vocabulary: dict[str, int] = {}
    entries: list[IndexEntry] = []
    vectors: list[Counter] = []
    section = None
    for line in lines[1:]:
        if line in ("[vocabulary]", "[entries]", "[postings]"):
            section = line
            continue
        if not line.strip():
            continue
        if section == "[vocabulary]":
            term, df = line.split("\t")
            vocabulary[term] = int(df)
        elif section == "[entries]":
            entry_id, category, flags, text = line.split("\t")
            entries.append(
                IndexEntry(
                    entry_id,
                    category,
                    text,
                    frozenset(f for f in flags.split(",") if f),
                )
            )
        elif section == "[postings]":
            idx_s, _, cells = line.partition("\t")
            vec: Counter = Counter()
            if cells:
                for cell in cells.split(" "):
                    term, _, count = cell.rpartition(":")
                    vec[term] = int(count)
            vectors.append(vec)
    if len(entries) != header["entries"] or len(vectors) != len(entries):
        raise ValueError(f"{path}: truncated index file")
    return QuestionIndex(entries, vocabulary, vectors)
