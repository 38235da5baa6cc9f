#!/usr/bin/env python3
"""Regenerate data/usage_questions.tsv (deterministic; see usageq.synthetic)."""

import argparse
from pathlib import Path

from usageq.dataset import dataset_stats, save_dataset
from usageq.synthetic import DATASET_SEED, build_reference_records


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parents[1] / "data" / "usage_questions.tsv"),
    )
    ap.add_argument("--seed", type=int, default=DATASET_SEED)
    args = ap.parse_args()

    records = build_reference_records(args.seed)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    save_dataset(records, args.out)
    stats = dataset_stats(records)
    print(
        f"wrote {args.out}: {stats.total} records, {stats.n_na} N/A "
        f"({100 * stats.na_fraction:.1f}%), {len(stats.per_category)} categories"
    )


if __name__ == "__main__":
    main()
