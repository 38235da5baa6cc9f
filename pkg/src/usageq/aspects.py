"""Per-category aspect lexicons and aspect-value pair extraction.

Aspects are nouns that repeatedly show up next to describing adjectives,
either directly ("fat tires") or through a copula ("the seat is comfortable").
Mining counts those contexts per category; extraction then reports one pair
per noun occurrence that matches either pattern against the mined lexicon.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from . import lexicons
from .textproc import ADJ_TAGS, NOUN_TAGS, Sentence, Token

COPULAS = frozenset({"is", "are", "was", "were"})

ADJ_NOUN = "ADJ_NOUN"
NOUN_COPULA_ADJ = "NOUN_COPULA_ADJ"


def singularize(noun: str) -> str:
    """Cheap plural stripping; leaves -ss/-us/-is and short words alone."""
    if len(noun) >= 5 and noun.endswith("ies"):
        return noun[:-3] + "y"
    if len(noun) >= 5 and noun.endswith(("xes", "ches", "shes", "zes", "sses")):
        return noun[:-2]
    if len(noun) >= 4 and noun.endswith("s") and not noun.endswith(("ss", "us", "is")):
        return noun[:-1]
    return noun


@dataclass
class AspectLexicon:
    category: str
    aspects: dict[str, int] = field(default_factory=dict)

    def __contains__(self, noun: str) -> bool:
        return singularize(noun.lower()) in self.aspects

    def support(self, noun: str) -> int:
        return self.aspects.get(singularize(noun.lower()), 0)

    def save(self, path: str | Path) -> None:
        """`aspect<TAB>support` lines, support descending, then alphabetical."""
        rows = sorted(self.aspects.items(), key=lambda kv: (-kv[1], kv[0]))
        with open(path, "w", encoding="utf-8") as fh:
            for aspect, support in rows:
                fh.write(f"{aspect}\t{support}\n")

    @classmethod
    def load(cls, path: str | Path, category: str) -> "AspectLexicon":
        aspects = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            aspect, support = line.split("\t")
            aspects[aspect] = int(support)
        return cls(category, aspects)


@dataclass(frozen=True, slots=True)
class AspectValuePair:
    aspect: str
    value: str
    sentence_ref: tuple[str, int]
    pattern: str


def _copula_adj(tokens: list[Token] | tuple[Token, ...], i: int) -> str | None:
    """Adjective reached from noun i via is/are/was/were within two tokens."""
    n = len(tokens)
    for j in (i + 1, i + 2):
        if j < n and tokens[j].lower in COPULAS:
            for k in (j + 1, j + 2):
                if k < n and tokens[k].pos in ADJ_TAGS:
                    return tokens[k].lower
            return None
    return None


def _matched_positions(tokens: tuple[Token, ...]) -> Iterator[tuple[int, str, str]]:
    """(noun index, value, pattern) per noun token; ADJ_NOUN wins on overlap."""
    for i, tok in enumerate(tokens):
        if tok.pos not in NOUN_TAGS:
            continue
        if i > 0 and tokens[i - 1].pos in ADJ_TAGS:
            yield i, tokens[i - 1].lower, ADJ_NOUN
            continue
        value = _copula_adj(tokens, i)
        if value is not None:
            yield i, value, NOUN_COPULA_ADJ


def mine_aspect_lexicon(
    sentences: Iterable[Sentence],
    category: str,
    min_support: int = 3,
    stopwords: frozenset[str] | None = None,
) -> AspectLexicon:
    """Count nouns seen in adjective contexts; keep those above min_support."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    if stopwords is None:
        stopwords = lexicons.noun_stopwords()
    counts: Counter[str] = Counter()
    for sent in sentences:
        for i, _value, _pattern in _matched_positions(sent.tokens):
            noun = sent.tokens[i].lower
            if noun in stopwords:
                continue
            normalized = singularize(noun)
            if normalized in stopwords:
                continue
            counts[normalized] += 1
    aspects = {a: c for a, c in counts.items() if c >= min_support}
    return AspectLexicon(category, aspects)


def extract_pairs(sentence: Sentence, lexicon: AspectLexicon) -> list[AspectValuePair]:
    """Aspect-value pairs for every lexicon noun matching either pattern."""
    pairs = []
    for i, value, pattern in _matched_positions(sentence.tokens):
        noun = sentence.tokens[i].lower
        if noun in lexicon:
            pairs.append(
                AspectValuePair(singularize(noun), value, sentence.stable_id, pattern)
            )
    return pairs
