"""ROUGE-L: F-measure over the longest common subsequence."""

from __future__ import annotations

from typing import Sequence

from ..errors import InvalidParameterError


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(hyp: Sequence[str], ref: Sequence[str], beta: float = 1.2) -> float:
    if not beta > 0:
        raise InvalidParameterError(f"beta must be positive, got {beta}")
    if not hyp or not ref:
        return 0.0
    lcs = lcs_length(hyp, ref)
    if lcs == 0:
        return 0.0
    p = lcs / len(hyp)
    r = lcs / len(ref)
    b2 = beta * beta
    return (1 + b2) * p * r / (r + b2 * p)


def rouge_l_multi(hyp: Sequence[str], refs: Sequence[Sequence[str]], beta: float = 1.2) -> float:
    """Best ROUGE-L over several references."""
    return max(rouge_l(hyp, r, beta) for r in refs)
