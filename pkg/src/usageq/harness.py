"""Splits, training-data reductions, and generator scoring.

Predictions are matched to dataset records by id. Accuracy treats the task
as N/A classification over every record; BLEU-4 and ROUGE-L score only the
pairs where both sides produced a question, reported via n_scored_pairs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .dataset import NA_LABEL, QuestionRecord
from .metrics import corpus_bleu, corpus_rouge_l, metric_tokens

Q1, Q3, Q5 = "Q1", "Q3", "Q5"
_QUESTION_SET_SIZES = {Q1: 1, Q3: 3, Q5: 5}


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise EvalError("train_fraction must be in (0, 1)")


@dataclass(frozen=True)
class ReductionConfig:
    """Either a uniform sentence subsample or a per-record question trim."""

    mode: str  # "sentence_fraction" | "question_set"
    fraction: float = 1.0
    question_set: str = Q5
    seed: int = 0

    def __post_init__(self):
        if self.mode == "sentence_fraction":
            if not 0.0 < self.fraction <= 1.0:
                raise EvalError("fraction must be in (0, 1]")
        elif self.mode == "question_set":
            if self.question_set not in _QUESTION_SET_SIZES:
                raise EvalError(f"question_set must be one of {sorted(_QUESTION_SET_SIZES)}")
        else:
            raise EvalError(f"unknown reduction mode {self.mode!r}")

    @classmethod
    def sentence_fraction(cls, fraction: float, seed: int = 0) -> "ReductionConfig":
        return cls(mode="sentence_fraction", fraction=fraction, seed=seed)

    @classmethod
    def for_question_set(cls, which: str) -> "ReductionConfig":
        return cls(mode="question_set", question_set=which)


def _round_half_up(x: float) -> int:
    return int(x + 0.5)


def split(
    records: Sequence[QuestionRecord], cfg: SplitConfig
) -> tuple[list[QuestionRecord], list[QuestionRecord]]:
    """Record-level shuffle split; a record's questions never straddle it."""
    if len(records) < 2:
        raise EvalError("need at least 2 records to split")
    n_train = _round_half_up(cfg.train_fraction * len(records))
    if n_train >= len(records):
        raise EvalError("empty test side")
    if n_train <= 0:
        raise EvalError("empty train side")
    shuffled = list(records)
    random.Random(cfg.seed).shuffle(shuffled)
    return shuffled[:n_train], shuffled[n_train:]


def reduce_train(
    train: Sequence[QuestionRecord], cfg: ReductionConfig
) -> list[QuestionRecord]:
    """Apply a training-data reduction; N/A records are never altered."""
    if cfg.mode == "sentence_fraction":
        k = _round_half_up(cfg.fraction * len(train))
        rng = random.Random(cfg.seed)
        keep = set(rng.sample(range(len(train)), min(k, len(train))))
        return [rec for i, rec in enumerate(train) if i in keep]
    size = _QUESTION_SET_SIZES[cfg.question_set]
    out = []
    for rec in train:
        if rec.is_na or len(rec.questions) <= size:
            out.append(rec)
        else:
            out.append(
                QuestionRecord(
                    rec.record_id, rec.category, rec.sentence_text, rec.questions[:size]
                )
            )
    return out


@dataclass
class EvalReport:
    accuracy: float
    bleu4: float
    rouge_l: float
    n_test: int
    n_na_ref: int
    n_scored_pairs: int
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "bleu4": self.bleu4,
            "rouge_l": self.rouge_l,
            "n_test": self.n_test,
            "n_na_ref": self.n_na_ref,
            "n_scored_pairs": self.n_scored_pairs,
            "warnings": self.warnings,
        }

    def to_text(self) -> str:
        lines = [
            f"records scored      {self.n_test}",
            f"references N/A      {self.n_na_ref}",
            f"scored pairs        {self.n_scored_pairs}",
            f"Accuracy            {self.accuracy:.4f}",
            f"BLEU-4              {self.bleu4:.4f}",
            f"ROUGE-L             {self.rouge_l:.4f}",
        ]
        lines.extend(f"warning: {w}" for w in self.warnings)
        return "\n".join(lines)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


def accuracy(
    predictions: Mapping[str, str], references: Sequence[QuestionRecord]
) -> float:
    """Fraction of records whose N/A-ness matches; text is ignored."""
    _check_alignment(predictions, references)
    if not references:
        return 0.0
    hits = sum(
        1
        for rec in references
        if (predictions[rec.record_id] == NA_LABEL) == rec.is_na
    )
    return hits / len(references)


def _check_alignment(
    predictions: Mapping[str, str], references: Sequence[QuestionRecord]
) -> None:
    ref_ids = {rec.record_id for rec in references}
    missing = ref_ids - predictions.keys()
    extra = predictions.keys() - ref_ids
    if missing:
        raise EvalError(f"predictions missing for record ids: {sorted(missing)[:5]}")
    if extra:
        raise EvalError(f"predictions for unknown record ids: {sorted(extra)[:5]}")


def _scored_pairs(
    predictions: Mapping[str, str], references: Sequence[QuestionRecord]
) -> list[tuple[list[str], list[list[str]]]]:
    pairs = []
    for rec in references:
        pred = predictions[rec.record_id]
        if rec.is_na or pred == NA_LABEL:
            continue
        pairs.append(
            (metric_tokens(pred), [metric_tokens(q) for q in rec.questions])
        )
    return pairs


def evaluate(
    predictions: Mapping[str, str],
    references: Sequence[QuestionRecord],
    rouge_mode: str = "f1",
) -> EvalReport:
    """Score one generator run; deterministic given inputs."""
    _check_alignment(predictions, references)
    pairs = _scored_pairs(predictions, references)
    notes = []
    if not pairs:
        notes.append("no scored pairs: BLEU-4 and ROUGE-L reported as 0")
        bleu = rouge = 0.0
    else:
        import warnings as _warnings

        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always")
            bleu = corpus_bleu(pairs)
            rouge = corpus_rouge_l(pairs, rouge_mode)
        notes.extend(str(w.message) for w in caught)
    return EvalReport(
        accuracy=accuracy(predictions, references),
        bleu4=bleu,
        rouge_l=rouge,
        n_test=len(references),
        n_na_ref=sum(1 for r in references if r.is_na),
        n_scored_pairs=len(pairs),
        warnings=notes,
    )


def load_predictions(path: str | Path) -> dict[str, str]:
    """Line-delimited `record_id<TAB>N/A-or-question`; blank lines skipped."""
    preds: dict[str, str] = {}
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        try:
            record_id, text = line.split("\t", 1)
        except ValueError:
            raise EvalError(f"{path}: line {i + 1} is not `id<TAB>text`")
        preds[record_id.strip()] = text.strip()
    return preds


def save_predictions(preds: Mapping[str, str], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record_id in preds:
            fh.write(f"{record_id}\t{preds[record_id]}\n")


def comparison_table(
    runs: Sequence[tuple[str, EvalReport]]
) -> str:
    """Metric rows by run columns, for eyeballing reduction sweeps."""
    if not runs:
        return "(no runs)"
    labels = [label for label, _ in runs]
    width = max(12, *(len(l) + 2 for l in labels))
    header = "Metric".ljust(14) + "".join(l.rjust(width) for l in labels)
    rows = []
    for name, attr in (("Accuracy", "accuracy"), ("BLEU-4", "bleu4"), ("ROUGE-L", "rouge_l")):
        cells = "".join(f"{getattr(r, attr):.4f}".rjust(width) for _, r in runs)
        rows.append(name.ljust(14) + cells)
    rows.append(
        "scored pairs".ljust(14)
        + "".join(str(r.n_scored_pairs).rjust(width) for _, r in runs)
    )
    return "\n".join([header, *rows])
