#!/usr/bin/env python3
"""Toy question-generation adapter speaking the one-line-in/one-line-out
protocol on stdin/stdout. Standalone on purpose: any model wrapper replacing
it only has to honor the same wire contract.

Modes (first argv):
  simple    rule-based question or N/A (default)
  na        always answers N/A
  malformed answers without a question mark (for error-path testing)
  sleep     never answers (for timeout testing)
"""

import re
import sys
import time

CLAUSE_RE = re.compile(r"\bfor\s+\w+ing\b[^.!?]*", re.IGNORECASE)
GENERIC = {"doing", "using", "working", "getting", "making"}


def simple(line: str) -> str:
    category, _, sentence = line.partition(":")
    m = CLAUSE_RE.search(sentence)
    if not m:
        return "N/A"
    clause = m.group(0).strip().rstrip(".!?,;: ")
    first_verb = clause.split()[1].lower() if len(clause.split()) > 1 else ""
    rest = clause.split()[2:] if len(clause.split()) > 2 else []
    if first_verb in GENERIC and all(w.lower() in ("the", "job", "it", "things", "stuff", "work") for w in rest):
        return "N/A"
    noun = category.strip().lower().rstrip("s") or "product"
    return f"Would you like a {noun} that is great {clause}?"


def main():
    mode = sys.argv[1] if len(sys.argv) > 1 else "simple"
    for line in sys.stdin:
        line = line.rstrip("\n")
        if mode == "sleep":
            time.sleep(3600)
        elif mode == "na":
            print("N/A", flush=True)
        elif mode == "malformed":
            print("great product", flush=True)
        else:
            print(simple(line), flush=True)


if __name__ == "__main__":
    main()
