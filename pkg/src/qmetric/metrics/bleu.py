"""Clipped n-gram statistics and BLEU at sentence and corpus level."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..errors import InvalidParameterError


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def closest_ref_length(hyp_len: int, ref_lens: Sequence[int]) -> int:
    # ties go to the shorter reference
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


@dataclass(frozen=True)
class NgramStats:
    """Clipped match counts per order (index 0 is unigrams)."""

    matched: tuple[int, ...]
    total_hyp: tuple[int, ...]
    hyp_len: int
    ref_len: int

    @property
    def order(self) -> int:
        return len(self.matched)

    def __add__(self, other: "NgramStats") -> "NgramStats":
        if self.order != other.order:
            raise InvalidParameterError("cannot add NgramStats of different orders")
        return NgramStats(
            tuple(a + b for a, b in zip(self.matched, other.matched)),
            tuple(a + b for a, b in zip(self.total_hyp, other.total_hyp)),
            self.hyp_len + other.hyp_len,
            self.ref_len + other.ref_len,
        )


def clipped_counts(hyp: Sequence[str], refs: Sequence[Sequence[str]], n: int) -> tuple[Counter, Counter]:
    """Return (hypothesis n-gram counts, clipped matches per n-gram)."""
    hyp_counts = ngrams(hyp, n)
    max_ref: Counter = Counter()
    for ref in refs:
        for g, c in ngrams(ref, n).items():
            if c > max_ref[g]:
                max_ref[g] = c
    clipped = Counter({g: min(c, max_ref[g]) for g, c in hyp_counts.items() if g in max_ref})
    return hyp_counts, clipped


def ngram_stats(hyp: Sequence[str], refs: Sequence[Sequence[str]], max_order: int = 4) -> NgramStats:
    if max_order < 1:
        raise InvalidParameterError(f"n-gram order must be >= 1, got {max_order}")
    if not refs:
        raise InvalidParameterError("at least one reference is required")
    hyp = list(hyp)
    refs = [list(r) for r in refs]
    matched, totals = [], []
    for n in range(1, max_order + 1):
        hyp_counts, clipped = clipped_counts(hyp, refs, n)
        matched.append(sum(clipped.values()))
        totals.append(sum(hyp_counts.values()))
    ref_len = closest_ref_length(len(hyp), [len(r) for r in refs])
    return NgramStats(tuple(matched), tuple(totals), len(hyp), ref_len)


@dataclass(frozen=True)
class AddEpsilon:
    """Replace zero match counts with ``epsilon`` before taking the log."""

    epsilon: float = 0.1

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidParameterError("epsilon must be positive")


def brevity_penalty(hyp_len: int, ref_len: int) -> float:
    if hyp_len > ref_len:
        return 1.0
    if hyp_len == 0:
        return 0.0
    return math.exp(1.0 - ref_len / hyp_len)


def bleu(stats: NgramStats, max_order: int = 4, smoothing: AddEpsilon | None = None) -> float:
    """BLEU from precomputed statistics.

    Without smoothing any zero n-gram precision makes the score 0, which is
    what sentence-level scores of disjoint questions should report.
    """
    if max_order < 1 or max_order > stats.order:
        raise InvalidParameterError(
            f"max_order must be in [1, {stats.order}] for these stats, got {max_order}"
        )
    if stats.hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(max_order):
        m, t = stats.matched[n], stats.total_hyp[n]
        if m == 0:
            if smoothing is None:
                return 0.0
            log_sum += math.log(smoothing.epsilon / max(t, 1))
        else:
            log_sum += math.log(m / t)
    score = brevity_penalty(stats.hyp_len, stats.ref_len) * math.exp(log_sum / max_order)
    return min(score, 1.0)


def sentence_bleu(
    hyp: Sequence[str],
    refs: Sequence[Sequence[str]],
    max_order: int = 4,
    smoothing: AddEpsilon | None = None,
) -> float:
    return bleu(ngram_stats(hyp, refs, max_order), max_order, smoothing)


def corpus_aggregate(
    per_sentence: Sequence[NgramStats], max_order: int = 4, smoothing: AddEpsilon | None = None
) -> float:
    """Corpus BLEU: sum statistics over sentences, then apply the BLEU formula once."""
    if not per_sentence:
        raise InvalidParameterError("corpus BLEU needs at least one sentence")
    total = per_sentence[0]
    for s in per_sentence[1:]:
        total = total + s
    return bleu(total, max_order, smoothing)
