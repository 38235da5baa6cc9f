"""Bundled lexicon files: one entry per line, overridable by path."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources as _ilr
from pathlib import Path


def _bundled(name: str) -> str:
    return _ilr.files("usageq.resources").joinpath(name).read_text(encoding="utf-8")


def load_lines(name: str, override: str | Path | None = None) -> frozenset[str]:
    """Read a one-entry-per-line lexicon, skipping blanks and # comments."""
    if override is not None:
        text = Path(override).read_text(encoding="utf-8")
    else:
        text = _bundled(name)
    out = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.add(line.lower())
    return frozenset(out)


def load_word_tags(override: str | Path | None = None) -> dict[str, str]:
    """Read the word<TAB>tag lexicon used by the built-in tagger."""
    if override is not None:
        text = Path(override).read_text(encoding="utf-8")
    else:
        text = _bundled("word_tags.tsv")
    table: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        table[word.lower()] = tag
    return table


@lru_cache(maxsize=None)
def abbreviations() -> frozenset[str]:
    return load_lines("abbreviations.txt")


@lru_cache(maxsize=None)
def gerund_exceptions() -> frozenset[str]:
    return load_lines("gerund_exceptions.txt")


@lru_cache(maxsize=None)
def function_words() -> frozenset[str]:
    return load_lines("function_words.txt")


@lru_cache(maxsize=None)
def evaluative_words() -> frozenset[str]:
    return load_lines("evaluative_words.txt")


@lru_cache(maxsize=None)
def generic_stoplist() -> frozenset[str]:
    return load_lines("generic_stoplist.txt")


@lru_cache(maxsize=None)
def noun_stopwords() -> frozenset[str]:
    return load_lines("noun_stopwords.txt")
