"""End-to-end streaming passes shared by the CLI and the tests.

The selection pass is the hot path: reviews stream in, sentences that cannot
contain "for" are rejected on a substring check before any tokenization, and
only activity-bearing sentences pay for aspect extraction.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .aspects import AspectLexicon, extract_pairs, mine_aspect_lexicon
from .candidates import CandidateSentence, detect_activity
from .corpus import Review
from .textproc import (
    Sentence,
    default_tagger,
    iter_sentence_spans,
    tokenize,
)


@dataclass
class SelectStats:
    reviews: int = 0
    sentences: int = 0
    screened: int = 0  # sentences that reached full analysis
    candidates: int = 0
    per_category: Counter = field(default_factory=Counter)


def iter_review_sentences(
    rows: Iterable[tuple[Review, str]], stats: SelectStats | None = None
) -> Iterator[tuple[Sentence, str]]:
    """Fully analyzed sentences for every review; used for aspect mining."""
    tagger = default_tagger()
    for review, category in rows:
        if stats is not None:
            stats.reviews += 1
        index = 0
        for start, end in iter_sentence_spans(review.text):
            text = review.text[start:end].strip()
            if not text:
                continue
            if stats is not None:
                stats.sentences += 1
            tokens = tagger.tag(tokenize(text))
            yield Sentence(review.review_id, index, text, tuple(tokens)), category
            index += 1


def mine_lexicons(
    rows: Iterable[tuple[Review, str]],
    categories: Iterable[str],
    min_support: int = 3,
) -> dict[str, AspectLexicon]:
    """One counting pass over the stream, one lexicon per category."""
    from .aspects import _matched_positions, singularize
    from . import lexicons as _lex

    stopwords = _lex.noun_stopwords()
    counts: dict[str, Counter] = {c: Counter() for c in categories}
    for sentence, category in iter_review_sentences(rows):
        bucket = counts.get(category)
        if bucket is None:
            continue
        for i, _value, _pattern in _matched_positions(sentence.tokens):
            noun = sentence.tokens[i].lower
            if noun in stopwords:
                continue
            normalized = singularize(noun)
            if normalized not in stopwords:
                bucket[normalized] += 1
    return {
        c: AspectLexicon(c, {a: n for a, n in counter.items() if n >= min_support})
        for c, counter in counts.items()
    }


def iter_candidates(
    rows: Iterable[tuple[Review, str]],
    lexicons: dict[str, AspectLexicon],
    require_aspect: bool = True,
    stats: SelectStats | None = None,
) -> Iterator[CandidateSentence]:
    """Streaming selection with the cheap substring pre-filter.

    A sentence without the letters "for" cannot contain a for/IN token, so
    the pre-filter never drops a true candidate.
    """
    stats = stats if stats is not None else SelectStats()
    tagger = default_tagger()
    empty_lexicon = AspectLexicon("", {})
    for review, category in rows:
        stats.reviews += 1
        text_all = review.text
        index = -1
        for start, end in iter_sentence_spans(text_all):
            text = text_all[start:end].strip()
            if not text:
                continue
            index += 1
            stats.sentences += 1
            if "for" not in text.lower():
                continue
            stats.screened += 1
            tokens = tagger.tag(tokenize(text))
            sentence = Sentence(review.review_id, index, text, tuple(tokens))
            mentions = detect_activity(sentence)
            if not mentions:
                continue
            lexicon = lexicons.get(category, empty_lexicon)
            pairs = extract_pairs(sentence, lexicon)
            if require_aspect and not pairs:
                continue
            stats.candidates += 1
            stats.per_category[category] += 1
            yield CandidateSentence(sentence, category, tuple(pairs), tuple(mentions))


def load_generated(path: str | Path) -> list[dict]:
    """Rows of a generated-questions file (one JSON object per line)."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def save_generated(rows: Iterable[dict], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
            n += 1
    return n
