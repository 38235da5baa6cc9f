"""Turn candidate sentences into yes/no elicitation questions, or N/A.

Two engines share one output type: a deterministic template engine, and an
adapter contract for any external text-to-text model (child process speaking
one line in / one line out, or a single HTTP endpoint). "N/A" is the reserved
response for sentences that cannot yield a meaningful question.
"""

from __future__ import annotations

import queue
import random
import subprocess
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import lexicons
from .aspects import singularize
from .candidates import ActivityMention, CandidateSentence
from .textproc import default_tagger, tokenize, word_tokens

NA_SENTINEL = "N/A"

DEFAULT_TEMPLATES = (
    "Are you looking for a {cat} that's {pred}?",
    "Would you be interested in a {cat} that is {pred}?",
    "Are you interested in a {cat} {clause}?",
    "Do you want a {cat} that's {pred}?",
    "Would you like a {cat} that is {pred}?",
)

PARAPHRASE_TEMPLATES = DEFAULT_TEMPLATES[3:]

CATEGORY_NOUN_EXCEPTIONS = {
    "Walk-Behind Lawn Mowers": "lawn mower",
}

_EVAL_WINDOW = 4  # how far before "for" the evaluative head may sit


class CategoryNounError(ValueError):
    pass


@dataclass(frozen=True)
class ElicitationQuestion:
    text: str
    category: str
    source: tuple[str, int]
    usage_clause: str
    provenance: str  # template | external-model | human | paraphrase
    flags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class QuestionLabel:
    """Either a question or the N/A sentinel, never both."""

    question: ElicitationQuestion | None = None

    @property
    def is_na(self) -> bool:
        return self.question is None

    @classmethod
    def na(cls) -> "QuestionLabel":
        return cls(None)

    @classmethod
    def of(cls, question: ElicitationQuestion) -> "QuestionLabel":
        return cls(question)


def category_noun(category: str, overrides: dict[str, str] | None = None) -> str:
    """Map a category name to its singular lowercase head noun."""
    table = dict(CATEGORY_NOUN_EXCEPTIONS)
    if overrides:
        table.update(overrides)
    if category in table:
        return table[category]
    words = category.strip().lower().split()
    if not words or not any(w.isalnum() or w.replace("-", "").isalnum() for w in words):
        raise CategoryNounError(f"cannot derive a noun for category {category!r}")
    words[-1] = singularize(words[-1])
    return " ".join(words)


def _rewrite_possessives(text: str) -> str:
    out = []
    for word in text.split(" "):
        if word.lower() in ("my", "our"):
            out.append("your")
        else:
            out.append(word)
    return " ".join(out)


def _decapitalize(text: str) -> str:
    return text[:1].lower() + text[1:] if text else text


def extract_predicate(candidate: CandidateSentence, mention: ActivityMention) -> str:
    """Words from the nearest preceding evaluative head through the clause
    end; "good " + clause when no head is found. my/our become your."""
    sent = candidate.sentence
    tokens = sent.tokens
    evaluative = lexicons.evaluative_words()
    head = None
    for i in range(mention.prep_index - 1, max(-1, mention.prep_index - 1 - _EVAL_WINDOW), -1):
        if tokens[i].lower in evaluative:
            head = i
            break
    clause = _rewrite_possessives(mention.clause_text)
    if head is None:
        return "good " + clause
    clause_end = tokens[mention.prep_index].offset + len(mention.clause_text)
    predicate = sent.text[tokens[head].offset : clause_end]
    return _decapitalize(_rewrite_possessives(predicate))


def is_generic(predicate: str, stoplist: frozenset[str] | set[str] | None = None) -> bool:
    """True when every content word (function and evaluative words removed)
    sits in the generic stoplist; vacuously true for empty predicates."""
    if stoplist is None:
        stoplist = lexicons.generic_stoplist()
    function = lexicons.function_words()
    evaluative = lexicons.evaluative_words()
    content = [
        w for w in word_tokens(predicate) if w not in function and w not in evaluative
    ]
    return all(w in stoplist for w in content)


def is_complex(predicate: str) -> bool:
    """True when two or more and/or-separated chunks each carry a VBG."""
    tokens = default_tagger().tag(tokenize(predicate))
    segments = 0
    seen_vbg = False
    for tok in tokens:
        if tok.lower in ("and", "or"):
            segments += seen_vbg
            seen_vbg = False
        elif tok.pos == "VBG":
            seen_vbg = True
    segments += seen_vbg
    return segments >= 2


def _indefinite(noun: str) -> str:
    return ("an " if noun[:1] in "aeiou" else "a ") + noun


def fill_template(template: str, noun: str, predicate: str, clause: str) -> str:
    filled = template.replace("a {cat}", _indefinite(noun))
    return filled.format(cat=noun, pred=predicate, clause=clause)


def _category_stoplist(noun: str, base: frozenset[str]) -> set[str]:
    """Stoplist extended with the category's own noun forms; asking whether a
    grill is for grilling elicits nothing."""
    extra: set[str] = set()
    for word in noun.split():
        extra.add(word)
        extra.add(word + "s")
        if word.endswith("e"):
            extra.add(word[:-1] + "ing")
        else:
            extra.add(word + "ing")
    return set(base) | extra


def generate_template(
    candidate: CandidateSentence,
    templates: Sequence[str] = DEFAULT_TEMPLATES,
    seed: int = 0,
    stoplist: frozenset[str] | None = None,
    noun_overrides: dict[str, str] | None = None,
) -> QuestionLabel:
    """Deterministic template filling; N/A when every mention is generic."""
    if not templates:
        raise ValueError("templates must be non-empty")
    noun = category_noun(candidate.category, noun_overrides)
    base = stoplist if stoplist is not None else lexicons.generic_stoplist()
    stop = _category_stoplist(noun, frozenset(base))
    chosen = None
    for mention in candidate.activities:
        predicate = extract_predicate(candidate, mention)
        if not is_generic(predicate, stop):
            chosen = (mention, predicate)
            break
    if chosen is None:
        return QuestionLabel.na()
    mention, predicate = chosen
    rng = random.Random(f"{seed}:{candidate.sentence.source_review_id}:"
                        f"{candidate.sentence.index_in_review}")
    template = templates[rng.randrange(len(templates))]
    clause = _rewrite_possessives(mention.clause_text)
    text = fill_template(template, noun, predicate, clause)
    flags = {"complex"} if is_complex(predicate) else set()
    return QuestionLabel.of(
        ElicitationQuestion(
            text=text,
            category=candidate.category,
            source=candidate.sentence.stable_id,
            usage_clause=clause,
            provenance="template",
            flags=frozenset(flags),
        )
    )


class AdapterError(Exception):
    kind = "adapter-error"


class AdapterTimeout(AdapterError):
    kind = "timeout"


class AdapterUnreachable(AdapterError):
    kind = "unreachable"


class AdapterOutputError(AdapterError):
    kind = "malformed-output"


class SubprocessAdapter:
    """Child process speaking newline-delimited UTF-8 on stdin/stdout."""

    concurrent = False

    def __init__(self, command: Sequence[str]):
        self.command = list(command)
        self._proc: subprocess.Popen | None = None
        self._replies: queue.Queue[str | None] = queue.Queue()

    def _ensure_started(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            return
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise AdapterUnreachable(f"cannot start adapter {self.command!r}: {exc}")
        threading.Thread(target=self._pump, args=(self._proc,), daemon=True).start()

    def _pump(self, proc: subprocess.Popen) -> None:
        assert proc.stdout is not None
        for line in proc.stdout:
            self._replies.put(line.rstrip("\n"))
        self._replies.put(None)

    def ask(self, line: str, timeout: float) -> str:
        self._ensure_started()
        assert self._proc is not None and self._proc.stdin is not None
        try:
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise AdapterUnreachable(f"adapter process gone: {exc}")
        try:
            reply = self._replies.get(timeout=timeout)
        except queue.Empty:
            raise AdapterTimeout(f"no reply within {timeout}s")
        if reply is None:
            raise AdapterUnreachable("adapter closed its output stream")
        return reply

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.terminate()
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()


class HttpAdapter:
    """Single endpoint: POST one line of text/plain, read one line back."""

    concurrent = True

    def __init__(self, url: str):
        self.url = url

    def ask(self, line: str, timeout: float) -> str:
        req = urllib.request.Request(
            self.url,
            data=line.encode("utf-8"),
            headers={"Content-Type": "text/plain; charset=utf-8"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=timeout) as resp:
                body = resp.read().decode("utf-8")
        except TimeoutError:
            raise AdapterTimeout(f"no reply within {timeout}s")
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, TimeoutError):
                raise AdapterTimeout(f"no reply within {timeout}s")
            raise AdapterUnreachable(f"adapter endpoint failed: {exc}")
        return body.splitlines()[0] if body else ""


@dataclass
class GenerationOutcome:
    candidate: CandidateSentence
    label: QuestionLabel | None = None
    error: str | None = None
    error_kind: str | None = None


def _request_line(candidate: CandidateSentence) -> str:
    text = " ".join(candidate.sentence.text.split())
    return f"{candidate.category}: {text}"


def _one_external(candidate: CandidateSentence, adapter, timeout: float) -> GenerationOutcome:
    try:
        reply = adapter.ask(_request_line(candidate), timeout).strip()
    except AdapterError as exc:
        return GenerationOutcome(candidate, error=str(exc), error_kind=exc.kind)
    if reply == NA_SENTINEL:
        return GenerationOutcome(candidate, label=QuestionLabel.na())
    if not reply or not reply.endswith("?"):
        return GenerationOutcome(
            candidate,
            error=f"adapter reply is not a question: {reply!r}",
            error_kind=AdapterOutputError.kind,
        )
    flags = set()
    if is_complex(reply):
        flags.add("complex")
    if is_generic(reply):
        flags.add("generic")
    question = ElicitationQuestion(
        text=reply,
        category=candidate.category,
        source=candidate.sentence.stable_id,
        usage_clause="",
        provenance="external-model",
        flags=frozenset(flags),
    )
    return GenerationOutcome(candidate, label=QuestionLabel.of(question))


def generate_external(
    candidates: Iterable[CandidateSentence],
    adapter,
    timeout: float = 10.0,
    max_inflight: int = 4,
) -> list[GenerationOutcome]:
    """Query the adapter per candidate; failures are recorded per item and
    never abort the batch. Results come back in input order."""
    items = list(candidates)
    if getattr(adapter, "concurrent", False) and max_inflight > 1:
        with ThreadPoolExecutor(max_workers=max_inflight) as pool:
            return list(pool.map(lambda c: _one_external(c, adapter, timeout), items))
    return [_one_external(c, adapter, timeout) for c in items]
