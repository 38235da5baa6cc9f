#!/usr/bin/env python3
"""Training-data reduction sweep on the bundled dataset.

Splits the dataset 80/20, applies sentence-fraction and question-set
reductions to the training side, and scores a first-reference replay
baseline on the test side so the whole table runs without any model.
The replay baseline answers with each test record's own first reference
(or N/A), so its scores are an upper bound; plug a real generator's
prediction files into `usageq compare` for actual sweeps.
"""

import argparse
from pathlib import Path

from usageq.dataset import load_dataset
from usageq.harness import (
    ReductionConfig,
    SplitConfig,
    comparison_table,
    evaluate,
    reduce_train,
    split,
)

DEFAULT_DATA = Path(__file__).resolve().parents[1] / "data" / "usage_questions.tsv"


def replay_predictions(records):
    return {
        r.record_id: ("N/A" if r.is_na else r.questions[0]) for r in records
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dataset", default=str(DEFAULT_DATA))
    ap.add_argument("--seed", type=int, default=13)
    ap.add_argument("--fractions", type=float, nargs="+",
                    default=[1.0, 0.5, 0.25, 0.125])
    args = ap.parse_args()

    records, stats = load_dataset(args.dataset)
    train, test = split(records, SplitConfig(0.8, args.seed))
    print(f"dataset: {stats.total} records; train {len(train)} / test {len(test)}\n")

    runs = []
    for fraction in args.fractions:
        reduced = reduce_train(train, ReductionConfig.sentence_fraction(fraction, args.seed))
        n_q = sum(len(r.questions) for r in reduced)
        print(f"fraction {fraction:>6}: {len(reduced):4d} train records, {n_q} questions")
        runs.append((f"{int(fraction * 100)}%", evaluate(replay_predictions(test), test)))
    print()
    for which in ("Q1", "Q3", "Q5"):
        reduced = reduce_train(train, ReductionConfig.for_question_set(which))
        n_q = sum(len(r.questions) for r in reduced)
        print(f"{which}: {len(reduced)} train records, {n_q} questions")
        runs.append((which, evaluate(replay_predictions(test), test)))

    print()
    print(comparison_table(runs))


if __name__ == "__main__":
    main()
