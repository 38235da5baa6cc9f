"""Activity detection and candidate sentence selection.

A sentence is a candidate when it mentions an activity ("for" directly
followed by a progressive verb) and, unless relaxed, at least one
aspect-value pair. Precision is favored over recall throughout: the verb
must sit immediately after "for", with no intervening words.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .aspects import AspectLexicon, AspectValuePair, extract_pairs
from .textproc import Sentence

_CLAUSE_STRIP = " \t\r\n.!?,;:)\"'"


@dataclass(frozen=True, slots=True)
class ActivityMention:
    prep_index: int
    verb_index: int
    clause_text: str


@dataclass(frozen=True, slots=True)
class CandidateSentence:
    sentence: Sentence
    category: str
    aspect_values: tuple[AspectValuePair, ...]
    activities: tuple[ActivityMention, ...]

    @property
    def stable_id(self) -> tuple[str, int]:
        return self.sentence.stable_id


def detect_activity(sentence: Sentence) -> list[ActivityMention]:
    """One mention per for/IN token immediately followed by a VBG token."""
    tokens = sentence.tokens
    mentions = []
    for i in range(len(tokens) - 1):
        tok = tokens[i]
        if tok.lower == "for" and tok.pos == "IN" and tokens[i + 1].pos == "VBG":
            clause = sentence.text[tok.offset :].rstrip(_CLAUSE_STRIP)
            mentions.append(ActivityMention(i, i + 1, clause))
    return mentions


def select_candidates(
    sentences: Iterable[Sentence],
    category: str,
    lexicon: AspectLexicon,
    require_aspect: bool = True,
) -> Iterator[CandidateSentence]:
    """Stream candidates in input order; each needs an activity mention and,
    when require_aspect is set, an aspect-value pair."""
    for sent in sentences:
        mentions = detect_activity(sent)
        if not mentions:
            continue
        pairs = extract_pairs(sent, lexicon)
        if require_aspect and not pairs:
            continue
        yield CandidateSentence(sent, category, tuple(pairs), tuple(mentions))


def sample_per_category(
    candidates: list[CandidateSentence], n: int, seed: int
) -> list[CandidateSentence]:
    """Uniform sample without replacement of min(n, len); stable under input
    order because candidates are sorted by sentence id before drawing."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    ordered = sorted(candidates, key=lambda c: c.stable_id)
    rng = random.Random(seed)
    picked = rng.sample(ordered, min(n, len(ordered)))
    return sorted(picked, key=lambda c: c.stable_id)


def save_candidates(candidates: Iterable[CandidateSentence], path: str | Path) -> int:
    """Line-delimited candidate records; returns the number written."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for cand in candidates:
            fh.write(
                json.dumps(
                    {
                        "category": cand.category,
                        "review_id": cand.sentence.source_review_id,
                        "sentence_index": cand.sentence.index_in_review,
                        "text": cand.sentence.text,
                        "clause_texts": [m.clause_text for m in cand.activities],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            count += 1
    return count


def load_candidates(path: str | Path, tagger=None) -> list[CandidateSentence]:
    """Rebuild candidates from a saved file by re-analyzing the texts."""
    from .textproc import tag_sentence

    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            sent = tag_sentence(
                Sentence(rec["review_id"], rec["sentence_index"], rec["text"]),
                tagger,
            )
            mentions = tuple(detect_activity(sent))
            out.append(CandidateSentence(sent, rec["category"], (), mentions))
    return out
