"""Human-judgment statistics: normalization, agreement and correlation."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError, UndefinedResultError

RATING_MIN, RATING_MAX = 1, 5
SIGNIFICANCE_LEVEL = 0.01


@dataclass(frozen=True)
class Rating:
    annotator: str
    score: int


@dataclass(frozen=True)
class JudgmentRecord:
    id: str
    noisy: str
    reference: str
    ratings: tuple[Rating, ...]
    gold: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "ratings", tuple(self.ratings))
        if not self.ratings:
            raise InvalidParameterError(f"record {self.id!r} has no ratings")
        for r in self.ratings:
            if isinstance(r.score, bool) or not isinstance(r.score, int) or not RATING_MIN <= r.score <= RATING_MAX:
                raise InvalidParameterError(
                    f"record {self.id!r}: rating {r.score!r} outside {RATING_MIN}..{RATING_MAX}"
                )
        if self.gold is not None and not 0.0 <= self.gold <= 1.0:
            raise InvalidParameterError(f"record {self.id!r}: gold {self.gold} outside [0, 1]")


def normalize_scores(records: Sequence[JudgmentRecord]) -> list[JudgmentRecord]:
    """Fill ``gold`` from the raw 1-5 ratings.

    Each annotator's ratings are z-standardized, then min-max rescaled to
    [0, 1] over that annotator's ratings in the dataset; an annotator with no
    spread maps to 0.5. The gold score is the mean of a record's normalized
    ratings.
    """
    if not records:
        raise InvalidParameterError("no records to normalize")
    by_annotator: dict[str, list[float]] = defaultdict(list)
    for rec in records:
        for r in rec.ratings:
            by_annotator[r.annotator].append(float(r.score))

    scalers = {}
    for ann, values in by_annotator.items():
        v = np.asarray(values)
        sd = v.std()
        z = (v - v.mean()) / sd if sd > 0 else np.zeros_like(v)
        scalers[ann] = (v.mean(), sd, z.min(), z.max())

    def scale(ann: str, x: float) -> float:
        mean, sd, lo, hi = scalers[ann]
        z = (x - mean) / sd if sd > 0 else 0.0
        if hi - lo <= 0:
            return 0.5
        return min(max((z - lo) / (hi - lo), 0.0), 1.0)

    out = []
    for rec in records:
        normed = [scale(r.annotator, r.score) for r in rec.ratings]
        out.append(replace(rec, gold=math.fsum(normed) / len(normed)))
    return out


def _check_pair(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise InvalidParameterError("expected one-dimensional sequences")
    if len(x) != len(y):
        raise InvalidParameterError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise InvalidParameterError("need at least two observations")
    return x, y


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x, y = _check_pair(xs, ys)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise UndefinedResultError("correlation undefined for zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def rankdata(xs: Sequence[float]) -> np.ndarray:
    """1-based ranks, ties receive the mean of the ranks they span."""
    x = np.asarray(xs, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x), dtype=float)
    i = 0
    n = len(x)
    while i < n:
        j = i
        while j + 1 < n and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    x, y = _check_pair(xs, ys)
    return pearson(rankdata(x), rankdata(y))


def cohen_kappa(a: Sequence[int], b: Sequence[int]) -> float:
    """Unweighted Cohen's kappa for two raters over the same items."""
    if len(a) != len(b):
        raise InvalidParameterError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        raise InvalidParameterError("need at least one rated item")
    n = len(a)
    p_o = sum(x == y for x, y in zip(a, b)) / n
    ca, cb = Counter(a), Counter(b)
    p_e = sum(ca[k] * cb[k] for k in ca) / (n * n)
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else 0.0
    return (p_o - p_e) / (1 - p_e)


def permutation_pvalue(
    xs: Sequence[float],
    ys: Sequence[float],
    n_permutations: int = 10_000,
    seed: int = 0,
    method: str = "pearson",
) -> float:
    """Two-sided permutation p-value for a Pearson or Spearman correlation."""
    x, y = _check_pair(xs, ys)
    if method == "spearman":
        x, y = rankdata(x), rankdata(y)
    elif method != "pearson":
        raise InvalidParameterError(f"unknown method {method!r}")
    observed = abs(pearson(x, y))
    dx = x - x.mean()
    dy = (y - y.mean()) / math.sqrt(float((y - y.mean()) @ (y - y.mean())))
    dx = dx / math.sqrt(float(dx @ dx))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    hits = 0
    chunk = 1000
    done = 0
    while done < n_permutations:
        m = min(chunk, n_permutations - done)
        perms = rng.permuted(np.tile(dy, (m, 1)), axis=1)
        r = perms @ dx
        hits += int(np.count_nonzero(np.abs(r) >= observed - 1e-12))
        done += m
    return (hits + 1) / (n_permutations + 1)


@dataclass(frozen=True)
class CorrelationReport:
    pearson: float
    spearman: float
    n: int
    pearson_p: float
    spearman_p: float
    alpha: float = SIGNIFICANCE_LEVEL

    @property
    def p_value_flagged(self) -> bool:
        """True when the Pearson correlation is not significant at ``alpha``."""
        return self.pearson_p > self.alpha

    @property
    def spearman_flagged(self) -> bool:
        return self.spearman_p > self.alpha

    def to_dict(self) -> dict:
        return {
            "pearson": self.pearson,
            "spearman": self.spearman,
            "n": self.n,
            "pearson_p": self.pearson_p,
            "spearman_p": self.spearman_p,
            "alpha": self.alpha,
            "pearson_not_significant": self.p_value_flagged,
            "spearman_not_significant": self.spearman_flagged,
        }


def correlate(
    scores: Sequence[float],
    gold: Sequence[float],
    n_permutations: int = 10_000,
    seed: int = 0,
    alpha: float = SIGNIFICANCE_LEVEL,
) -> CorrelationReport:
    return CorrelationReport(
        pearson=pearson(scores, gold),
        spearman=spearman(scores, gold),
        n=len(scores),
        pearson_p=permutation_pvalue(scores, gold, n_permutations, seed, "pearson"),
        spearman_p=permutation_pvalue(scores, gold, n_permutations, seed, "spearman"),
        alpha=alpha,
    )


def agreement(records: Sequence[JudgmentRecord]) -> dict:
    """Kappa, Pearson and Spearman between the first and second rating of each record.

    Records with fewer than two ratings are skipped.
    """
    a = [rec.ratings[0].score for rec in records if len(rec.ratings) >= 2]
    b = [rec.ratings[1].score for rec in records if len(rec.ratings) >= 2]
    if not a:
        raise InvalidParameterError("no record carries two ratings")
    out = {"n": len(a), "kappa": cohen_kappa(a, b)}
    for name, fn in (("pearson", pearson), ("spearman", spearman)):
        try:
            out[name] = fn(a, b)
        except (UndefinedResultError, InvalidParameterError):
            out[name] = None
    return out
