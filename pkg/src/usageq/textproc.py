"""Sentence splitting, tokenization, and a lexicon+suffix-rule POS tagger.

The tagger covers the Penn Treebank subset needed downstream (IN, VBG, JJ*,
NN*, DT, RB, PRP, PRP$, VB*, CC) and falls back to OTHER. It is deliberately
small: closed-class words come from a word list, open-class words from suffix
rules, with a gerund-exception lexicon so that nouns like "morning" or
"ceiling" are not mistaken for progressive verbs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Protocol

from . import lexicons

TAGSET = frozenset(
    {
        "IN", "VBG", "JJ", "JJR", "JJS", "NN", "NNS", "NNP", "DT", "RB",
        "PRP", "PRP$", "VB", "VBD", "VBN", "VBP", "VBZ", "RBR", "RBS",
        "CC", "OTHER",
    }
)

ADJ_TAGS = frozenset({"JJ", "JJR", "JJS"})
NOUN_TAGS = frozenset({"NN", "NNS"})

# The working tagset collapses the VB and RB families; VBG stays distinct
# because the selection pattern keys on it. Anything outside the alphabet
# (TO, MD, CD, punctuation tags, ...) is OTHER.
_SUBSET_COLLAPSE = {
    "VB": "VB*", "VBD": "VB*", "VBN": "VB*", "VBP": "VB*", "VBZ": "VB*",
    "RBR": "RB", "RBS": "RB", "NNPS": "NNP",
}
_SUBSET_ALPHABET = frozenset(
    {"IN", "VBG", "JJ", "JJR", "JJS", "NN", "NNS", "NNP", "DT", "RB",
     "PRP", "PRP$", "VB*", "CC", "OTHER"}
)


def to_subset(tag: str) -> str:
    """Collapse a fine-grained tag into the working subset alphabet."""
    tag = _SUBSET_COLLAPSE.get(tag, tag)
    return tag if tag in _SUBSET_ALPHABET else "OTHER"


class Token(NamedTuple):
    surface: str
    lower: str
    pos: str
    offset: int


@dataclass(frozen=True, slots=True)
class Sentence:
    source_review_id: str
    index_in_review: int
    text: str
    tokens: tuple[Token, ...] = ()

    @property
    def stable_id(self) -> tuple[str, int]:
        return (self.source_review_id, self.index_in_review)


# Words, apostrophe-led contraction suffixes ("that's" -> "that" + "'s"),
# punctuation runs, and stray apostrophes.
_TOKEN_RE = re.compile(r"'\w+|\w+|[^\s\w']+|'")

# Candidate sentence boundaries: a run of final punctuation followed by
# whitespace or end of text.
_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s|$)")
_TRAILING_WORD_RE = re.compile(r"(\S+?)\.?$")

def tokenize(text: str) -> list[Token]:
    """Split text into tokens with exact character offsets; pos left empty."""
    return [
        Token(m.group(), m.group().lower(), "", m.start())
        for m in _TOKEN_RE.finditer(text)
    ]


def _is_abbreviation(text: str, period_pos: int, abbrevs: frozenset[str]) -> bool:
    # Word immediately left of the period, e.g. "approx" in "approx." or
    # "e.g" in "e.g." (final period excluded, internal ones kept).
    start = period_pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:period_pos].lower()
    if not word:
        return False
    if word in abbrevs:
        return True
    # Single-letter initials ("J. Smith").
    return len(word) == 1 and word.isalpha()


def iter_sentence_spans(
    text: str, abbrevs: frozenset[str] | None = None
) -> list[tuple[int, int]]:
    """(start, end) spans of sentences in text; spans cover all boundaries."""
    if abbrevs is None:
        abbrevs = lexicons.abbreviations()
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        punct = m.group()
        if punct == ".":
            if _is_abbreviation(text, m.start(), abbrevs):
                continue
        elif "!" not in punct and "?" not in punct:
            # Ellipsis-style runs of periods continue the sentence.
            continue
        spans.append((start, m.end()))
        start = m.end()
    if text[start:].strip():
        spans.append((start, len(text)))
    return spans


def split_sentences(
    text: str, review_id: str = "", abbrevs: frozenset[str] | None = None
) -> list[Sentence]:
    """Split review text into ordered Sentence values (tokens not yet set)."""
    sentences = []
    for start, end in iter_sentence_spans(text, abbrevs):
        chunk = text[start:end].strip()
        if chunk:
            sentences.append(Sentence(review_id, len(sentences), chunk))
    return sentences


class TaggerLike(Protocol):
    def tag(self, tokens: list[Token]) -> list[Token]: ...


@dataclass
class RuleTagger:
    """Lexicon lookup plus suffix rules; every token gets a tag.

    -ing words become VBG unless they sit in the gerund-exception lexicon or
    directly follow a determiner (both cases are nouns in practice).
    """

    word_tags: dict[str, str] = field(default_factory=lexicons.load_word_tags)
    gerund_exceptions: frozenset[str] = field(default_factory=lexicons.gerund_exceptions)

    def tag(self, tokens: list[Token]) -> list[Token]:
        word_tags = self.word_tags
        exceptions = self.gerund_exceptions
        out: list[Token] = []
        prev = ""
        for i, tok in enumerate(tokens):
            lower = tok.lower
            tag = word_tags.get(lower)
            if tag is None:
                tag = self._open_class(tok.surface, lower, prev, i == 0, exceptions)
            out.append(Token(tok.surface, lower, tag, tok.offset))
            prev = tag
        return out

    @staticmethod
    def _open_class(
        surface: str, lower: str, prev: str, first: bool, exceptions: frozenset[str]
    ) -> str:
        c0 = lower[0]
        if not (c0.isalpha() or c0.isdigit() or c0 == "'"):
            return "OTHER"
        if c0.isdigit():
            return "OTHER"
        if not first and surface[0].isupper() and not surface.isupper():
            return "NNP"
        n = len(lower)
        if n >= 5 and lower.endswith("ing"):
            if lower in exceptions or prev == "DT":
                return "NN"
            return "VBG"
        if n >= 4 and lower.endswith("ly"):
            return "RB"
        if n >= 4 and lower.endswith("ed"):
            return "VBD"
        if n >= 5 and lower.endswith("less"):
            return "JJ"
        if n >= 5 and lower.endswith("est"):
            return "JJS"
        if n >= 4 and lower.endswith("s") and not lower.endswith(("ss", "us", "is")):
            return "NNS"
        return "NN"


_default_tagger: RuleTagger | None = None


def default_tagger() -> RuleTagger:
    global _default_tagger
    if _default_tagger is None:
        _default_tagger = RuleTagger()
    return _default_tagger


def pos_tag(tokens: list[Token], tagger: TaggerLike | None = None) -> list[Token]:
    """Assign a tag to every token (OTHER when nothing else applies)."""
    if not tokens:
        raise ValueError("pos_tag requires a non-empty token list")
    return (tagger or default_tagger()).tag(tokens)


def analyze(
    text: str, review_id: str = "", tagger: TaggerLike | None = None
) -> list[Sentence]:
    """Split, tokenize, and tag a review in one pass."""
    tagger = tagger or default_tagger()
    out = []
    for sent in split_sentences(text, review_id):
        tokens = tokenize(sent.text)
        if tokens:
            tokens = tagger.tag(tokens)
        out.append(
            Sentence(sent.source_review_id, sent.index_in_review, sent.text, tuple(tokens))
        )
    return out


def tag_sentence(sentence: Sentence, tagger: TaggerLike | None = None) -> Sentence:
    """Return the sentence with tokens (re)computed and tagged."""
    tokens = tokenize(sentence.text)
    if tokens:
        tokens = (tagger or default_tagger()).tag(tokens)
    return Sentence(
        sentence.source_review_id, sentence.index_in_review, sentence.text, tuple(tokens)
    )


def word_tokens(text: str) -> list[str]:
    """Lowercased word-only tokens (no punctuation); used by filters."""
    return [t.lower.strip("'") for t in tokenize(text) if any(c.isalnum() for c in t.lower)]
