"""The sentence-to-question dataset: schema, TSV load/store, and the
aggregation rules of the three-step annotation workflow.

A record pairs one review sentence with either the N/A label or exactly five
reference questions: three written from the sentence plus two paraphrases,
in that order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

NA_LABEL = "N/A"
OK_LABEL = "OK"

QUESTIONS_PER_RECORD = 5
GENERATED_PER_RECORD = 3
PARAPHRASES_PER_RECORD = 2

VERDICT_ASPECTS = ("grammatical", "yesno_answerable", "mentions_usage", "asker")

STEP1_NA = "N/A"
STEP1_RERUN = "RERUN"
STEP1_ACCEPTED = "ACCEPTED"

STEP2_APPROVED = "APPROVED"
STEP2_REJECTED = "REJECTED"
STEP2_EXPERT_REVIEW = "EXPERT_REVIEW"


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class QuestionRecord:
    record_id: str
    category: str
    sentence_text: str
    questions: tuple[str, ...] = ()  # empty means N/A

    @property
    def is_na(self) -> bool:
        return not self.questions

    def validate(self, partial: bool = False) -> None:
        """Schema check; `partial` admits reduced records with 1..5 questions."""
        if not self.sentence_text.strip():
            raise DatasetError(f"record {self.record_id}: empty sentence")
        if not self.category.strip():
            raise DatasetError(f"record {self.record_id}: empty category")
        if self.questions:
            if len(self.questions) > QUESTIONS_PER_RECORD or (
                not partial and len(self.questions) != QUESTIONS_PER_RECORD
            ):
                raise DatasetError(
                    f"record {self.record_id}: expected {QUESTIONS_PER_RECORD} "
                    f"questions, got {len(self.questions)}"
                )
            for i, q in enumerate(self.questions, start=1):
                if not q.strip():
                    raise DatasetError(f"record {self.record_id}: q{i} is empty")
                if not q.endswith("?"):
                    raise DatasetError(
                        f"record {self.record_id}: q{i} does not end with '?'"
                    )


@dataclass
class DatasetStats:
    total: int = 0
    n_na: int = 0
    per_category: Counter = field(default_factory=Counter)
    na_per_category: Counter = field(default_factory=Counter)

    @property
    def n_applicable(self) -> int:
        return self.total - self.n_na

    @property
    def na_fraction(self) -> float:
        return self.n_na / self.total if self.total else 0.0

    @property
    def total_questions(self) -> int:
        return self.n_applicable * QUESTIONS_PER_RECORD


_HEADER_WITH_ID = ["id", "category", "sentence", "label", "q1", "q2", "q3", "q4", "q5"]
_HEADER_NO_ID = _HEADER_WITH_ID[1:]


def _clean_field(value: str) -> str:
    return " ".join(value.split())


def load_dataset(
    path: str | Path, partial: bool = False
) -> tuple[list[QuestionRecord], DatasetStats]:
    """Read the TSV dataset (header auto-detected); schema-checks every row."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    rows = [line.split("\t") for line in lines if line.strip()]
    if not rows:
        raise DatasetError(f"{path}: a dataset must have at least one record")
    header = [h.strip().lower() for h in rows[0]]
    if header == _HEADER_WITH_ID:
        has_id = True
    elif header == _HEADER_NO_ID:
        has_id = False
    else:
        raise DatasetError(f"{path}: unrecognized header {rows[0]!r}")
    body = rows[1:]
    if not body:
        raise DatasetError(f"{path}: a dataset must have at least one record")

    records = []
    stats = DatasetStats()
    ncols = len(header)
    for i, row in enumerate(body):
        if len(row) != ncols:
            raise DatasetError(
                f"{path}: row {i + 2} has {len(row)} fields, expected {ncols}"
            )
        if has_id:
            record_id, category, sentence, label, *qs = row
        else:
            category, sentence, label, *qs = row
            record_id = f"r{i:04d}"
        if label == NA_LABEL:
            if any(q.strip() for q in qs):
                raise DatasetError(
                    f"record {record_id}: label is {NA_LABEL} but question fields are set"
                )
            record = QuestionRecord(record_id, category, sentence)
        elif label == OK_LABEL:
            if partial:
                qs = [q for q in qs if q.strip()]
            record = QuestionRecord(record_id, category, sentence, tuple(qs))
        else:
            raise DatasetError(f"record {record_id}: label must be {NA_LABEL} or {OK_LABEL}")
        record.validate(partial)
        records.append(record)
        stats.total += 1
        stats.per_category[record.category] += 1
        if record.is_na:
            stats.n_na += 1
            stats.na_per_category[record.category] += 1
    return records, stats


def save_dataset(
    records: Iterable[QuestionRecord], path: str | Path, partial: bool = False
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(_HEADER_WITH_ID) + "\n")
        for rec in records:
            rec.validate(partial)
            qs = [_clean_field(q) for q in rec.questions]
            qs += [""] * (QUESTIONS_PER_RECORD - len(qs))
            label = NA_LABEL if rec.is_na else OK_LABEL
            fields = [
                rec.record_id,
                _clean_field(rec.category),
                _clean_field(rec.sentence_text),
                label,
                *qs,
            ]
            fh.write("\t".join(fields) + "\n")


def dataset_stats(records: Iterable[QuestionRecord]) -> DatasetStats:
    stats = DatasetStats()
    for rec in records:
        stats.total += 1
        stats.per_category[rec.category] += 1
        if rec.is_na:
            stats.n_na += 1
            stats.na_per_category[rec.category] += 1
    return stats


def aggregate_step1(responses: Sequence[str]) -> tuple[str, tuple[str, ...]]:
    """Combine three write-question responses.

    Two or more N/A -> the sentence is N/A; exactly one N/A -> the task must
    be re-run; otherwise the three questions move on to validation.
    """
    if len(responses) != 3:
        raise ValueError(f"step 1 needs exactly 3 responses, got {len(responses)}")
    n_na = sum(1 for r in responses if r == NA_LABEL)
    if n_na >= 2:
        return STEP1_NA, ()
    if n_na == 1:
        return STEP1_RERUN, ()
    return STEP1_ACCEPTED, tuple(responses)


@dataclass(frozen=True)
class ValidationVerdict:
    grammatical: bool
    yesno_answerable: bool
    mentions_usage: bool
    asker: str  # buyer | salesperson | neither

    def __post_init__(self):
        if self.asker not in ("buyer", "salesperson", "neither"):
            raise ValueError(f"unknown asker value {self.asker!r}")

    def invalid_aspects(self) -> tuple[str, ...]:
        out = []
        if not self.grammatical:
            out.append("grammatical")
        if not self.yesno_answerable:
            out.append("yesno_answerable")
        if not self.mentions_usage:
            out.append("mentions_usage")
        if self.asker != "salesperson":
            out.append("asker")
        return tuple(out)


def aggregate_step2(verdicts: Sequence[ValidationVerdict]) -> str:
    """Combine three validation verdicts for one question.

    Rejected when any aspect is invalid for all three workers, or when at
    least two aspects are each invalid for at least two workers. Short of
    that, two or more distinct invalid aspects send the question to expert
    review; anything else is approved.
    """
    if len(verdicts) != 3:
        raise ValueError(f"step 2 needs exactly 3 verdicts, got {len(verdicts)}")
    counts = Counter()
    for v in verdicts:
        for aspect in v.invalid_aspects():
            counts[aspect] += 1
    if any(c == 3 for c in counts.values()):
        return STEP2_REJECTED
    if sum(1 for c in counts.values() if c >= 2) >= 2:
        return STEP2_REJECTED
    if len(counts) >= 2:
        return STEP2_EXPERT_REVIEW
    return STEP2_APPROVED


def assemble_record(
    record_id: str,
    category: str,
    sentence_text: str,
    questions: Sequence[str] | None = None,
    paraphrases: Sequence[str] | None = None,
    na: bool = False,
) -> QuestionRecord:
    """Build a final record from 3 approved questions + 2 paraphrases, or N/A."""
    if na:
        if questions or paraphrases:
            raise DatasetError(f"record {record_id}: N/A records carry no questions")
        rec = QuestionRecord(record_id, category, sentence_text)
    else:
        questions = list(questions or ())
        paraphrases = list(paraphrases or ())
        if len(questions) != GENERATED_PER_RECORD:
            raise DatasetError(
                f"record {record_id}: expected {GENERATED_PER_RECORD} questions, "
                f"got {len(questions)}"
            )
        if len(paraphrases) != PARAPHRASES_PER_RECORD:
            raise DatasetError(
                f"record {record_id}: expected {PARAPHRASES_PER_RECORD} paraphrases, "
                f"got {len(paraphrases)}"
            )
        rec = QuestionRecord(
            record_id, category, sentence_text, tuple(questions) + tuple(paraphrases)
        )
    rec.validate()
    return rec
