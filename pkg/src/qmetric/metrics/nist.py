"""NIST information-weighted n-gram score."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..errors import InvalidParameterError
from .bleu import clipped_counts, closest_ref_length

# beta such that the penalty is 0.5 when hyp_len / ref_len == 2/3
NIST_BETA = math.log(0.5) / math.log(1.5) ** 2


@dataclass(frozen=True)
class InfoModel:
    counts: Mapping[tuple[str, ...], int]
    total_unigrams: int
    max_order: int = 5
    _info: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_corpus(cls, sentences: Iterable[Sequence[str]], max_order: int = 5) -> "InfoModel":
        if max_order < 1:
            raise InvalidParameterError("max_order must be >= 1")
        counts: Counter = Counter()
        total = 0
        for sent in sentences:
            sent = list(sent)
            total += len(sent)
            for n in range(1, max_order + 1):
                for i in range(len(sent) - n + 1):
                    counts[tuple(sent[i : i + n])] += 1
        return cls(dict(counts), total, max_order)

    @classmethod
    def from_file(cls, path, max_order: int = 5, lowercase: bool = True) -> "InfoModel":
        """One whitespace-tokenized sentence per line, UTF-8."""
        from ..text import tokenize

        with open(path, encoding="utf-8") as fh:
            sents = []
            for line in fh:
                toks = tokenize(line).tokens
                sents.append([t.lower() for t in toks] if lowercase else list(toks))
        return cls.from_corpus(sents, max_order)

    def info(self, gram: tuple[str, ...]) -> float:
        """Bits of information of ``gram``; 0 for n-grams never seen."""
        cached = self._info.get(gram)
        if cached is not None:
            return cached
        c = self.counts.get(gram, 0)
        if c == 0:
            value = 0.0
        elif len(gram) == 1:
            value = math.log2(self.total_unigrams / c)
        else:
            prefix = self.counts.get(gram[:-1], 0)
            value = math.log2(prefix / c) if prefix else 0.0
        self._info[gram] = value
        return value


def nist_penalty(hyp_len: int, ref_len: int) -> float:
    if ref_len == 0:
        return 1.0
    ratio = min(hyp_len / ref_len, 1.0)
    if ratio <= 0:
        return 0.0
    return math.exp(NIST_BETA * math.log(ratio) ** 2)


def nist(
    hyp: Sequence[str], refs: Sequence[Sequence[str]], info: InfoModel, max_order: int = 5
) -> float:
    if max_order < 1:
        raise InvalidParameterError("max_order must be >= 1")
    if not refs:
        raise InvalidParameterError("at least one reference is required")
    hyp = list(hyp)
    if not hyp:
        return 0.0
    score = 0.0
    for n in range(1, max_order + 1):
        hyp_counts, clipped = clipped_counts(hyp, refs, n)
        total = sum(hyp_counts.values())
        if total == 0:
            continue
        score += sum(c * info.info(g) for g, c in clipped.items()) / total
    ref_len = closest_ref_length(len(hyp), [len(r) for r in refs])
    return score * nist_penalty(len(hyp), ref_len)
