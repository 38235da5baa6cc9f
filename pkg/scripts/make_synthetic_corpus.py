#!/usr/bin/env python3
"""Generate a synthetic review corpus + metadata in the ingest format."""

import argparse

from usageq.synthetic import write_demo_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reviews", required=True, help="output review JSONL path")
    ap.add_argument("--meta", required=True, help="output metadata JSONL path")
    ap.add_argument("--n-reviews", type=int, default=10_000)
    ap.add_argument("--sentences-per-review", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--candidate-rate", type=float, default=0.2,
                    help="fraction of sentences carrying a usage mention")
    args = ap.parse_args()

    n = write_demo_corpus(
        args.reviews, args.meta, args.n_reviews,
        args.sentences_per_review, args.seed, args.candidate_rate,
    )
    print(f"wrote {args.n_reviews} reviews ({n} sentences) to {args.reviews}")


if __name__ == "__main__":
    main()
