"""Corpus-level BLEU-4 and ROUGE-L over multi-reference question sets.

BLEU follows the original definition: clipped modified n-gram precision up
to 4-grams with uniform weights and a brevity penalty against the closest
reference length; no smoothing, so any zero precision zeroes the score.
ROUGE-L takes the best per-reference LCS F-score and averages over pairs.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from typing import Sequence

from .textproc import tokenize

TokenSeq = Sequence[str]


def metric_tokens(text: str) -> list[str]:
    """Lowercased tokens with punctuation split off; no stemming."""
    return [t.lower for t in tokenize(text)]


def _ngrams(tokens: TokenSeq, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _closest_ref_len(hyp_len: int, ref_lens: Sequence[int]) -> int:
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


def corpus_bleu(
    pairs: Sequence[tuple[TokenSeq, Sequence[TokenSeq]]], max_n: int = 4
) -> float:
    """BLEU over (hypothesis, references) token pairs; 0.0 when undefined."""
    if not pairs:
        return 0.0
    matched = [0] * max_n
    total = [0] * max_n
    hyp_len_sum = 0
    ref_len_sum = 0
    for hyp, refs in pairs:
        if not refs:
            raise ValueError("every scored pair needs at least one reference")
        hyp_len_sum += len(hyp)
        ref_len_sum += _closest_ref_len(len(hyp), [len(r) for r in refs])
        for n in range(1, max_n + 1):
            hyp_counts = _ngrams(hyp, n)
            if not hyp_counts:
                continue
            max_ref: Counter = Counter()
            for ref in refs:
                for gram, count in _ngrams(ref, n).items():
                    if count > max_ref[gram]:
                        max_ref[gram] = count
            matched[n - 1] += sum(
                min(count, max_ref[gram]) for gram, count in hyp_counts.items()
            )
            total[n - 1] += sum(hyp_counts.values())
    if hyp_len_sum == 0:
        warnings.warn("BLEU undefined for empty hypotheses; reporting 0")
        return 0.0
    if any(t == 0 for t in total):
        warnings.warn("hypotheses too short for 4-grams; BLEU is 0")
        return 0.0
    if any(m == 0 for m in matched):
        warnings.warn("a modified n-gram precision is zero; BLEU is 0 (no smoothing)")
        return 0.0
    log_p = sum(math.log(m / t) for m, t in zip(matched, total)) / max_n
    if hyp_len_sum > ref_len_sum:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_len_sum / hyp_len_sum)
    return bp * math.exp(log_p)


def lcs_length(a: TokenSeq, b: TokenSeq) -> int:
    """Longest common subsequence via two-row dynamic programming."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l_pair(hyp: TokenSeq, refs: Sequence[TokenSeq], mode: str = "f1") -> float:
    """Best LCS score over the references; f1 (default) or recall mode."""
    if mode not in ("f1", "recall"):
        raise ValueError(f"unknown ROUGE-L mode {mode!r}")
    best = 0.0
    for ref in refs:
        lcs = lcs_length(hyp, ref)
        if lcs == 0:
            continue
        recall = lcs / len(ref)
        if mode == "recall":
            score = recall
        else:
            precision = lcs / len(hyp)
            score = 2 * precision * recall / (precision + recall)
        best = max(best, score)
    return best


def corpus_rouge_l(
    pairs: Sequence[tuple[TokenSeq, Sequence[TokenSeq]]], mode: str = "f1"
) -> float:
    """Mean of per-pair best-reference ROUGE-L; 0.0 on an empty corpus."""
    if not pairs:
        return 0.0
    return sum(rouge_l_pair(h, rs, mode) for h, rs in pairs) / len(pairs)
