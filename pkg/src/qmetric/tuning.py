"""Bagged grid search for the class weights and delta of a Q-Metric.

For each bag a random subset of the tuning pool is drawn and every weight
vector on the simplex grid is combined with every delta on the same grid;
the candidate whose per-record Q-Metric correlates best (Pearson) with the
gold scores wins the bag. The final weights are the mean of the bag
winners.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .answerability import CLASSES, ClassMatchCounts, WeightConfig
from .errors import InvalidParameterError, UndefinedResultError
from .text import TokenClass

log = logging.getLogger(__name__)

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class TuneConfig:
    pool_size: int = 300
    bag_size: int = 200
    bags: int = 20
    grid_step: float = 0.05
    objective: str = "pearson"
    seed: int = 0
    base_metric: str = "bleu1"

    def __post_init__(self):
        if self.pool_size < 2 or self.bag_size < 2 or self.bags < 1:
            raise InvalidParameterError("pool, bag and bag count must be positive (pool, bag >= 2)")
        if self.bag_size > self.pool_size:
            raise InvalidParameterError("bag_size cannot exceed pool_size")
        if not 0 < self.grid_step <= 1:
            raise InvalidParameterError("grid_step must lie in (0, 1]")
        if abs(self.steps * self.grid_step - 1.0) > 1e-9:
            raise InvalidParameterError(f"grid_step {self.grid_step} does not divide 1 evenly")
        if self.objective != "pearson":
            raise InvalidParameterError(f"unsupported objective {self.objective!r}")

    @property
    def steps(self) -> int:
        return round(1.0 / self.grid_step)


@dataclass(frozen=True)
class TuneResult:
    config: WeightConfig
    std: dict = field(default_factory=dict)
    winners: tuple = ()
    bag_correlations: tuple[float, ...] = ()


# tie-break order: (delta, named entity, content, question type, function)
_TIE_ORDER = (TokenClass.NAMED_ENTITY, TokenClass.CONTENT, TokenClass.QUESTION_TYPE, TokenClass.FUNCTION)


def simplex_grid(steps: int) -> np.ndarray:
    """Integer weight vectors summing to ``steps``, columns in CLASSES order.

    Rows are sorted lexicographically by the tie-break order.
    """
    rows = []
    for a, b, c in itertools.product(range(steps + 1), repeat=3):
        d = steps - a - b - c
        if d < 0:
            continue
        # a, b, c, d follow _TIE_ORDER
        by_cls = dict(zip(_TIE_ORDER, (a, b, c, d)))
        rows.append([by_cls[cls] for cls in CLASSES])
    return np.asarray(rows, dtype=np.int64)


class _Features:
    """Per-record class ratios and masks, shaped (records, 4)."""

    def __init__(self, counts: Sequence[ClassMatchCounts]):
        m = np.zeros((len(counts), 4))
        h = np.zeros((len(counts), 4))
        r = np.zeros((len(counts), 4))
        for k, c in enumerate(counts):
            m[k], h[k], r[k] = c.as_arrays()
        self.p_mask = h > 0
        self.r_mask = r > 0
        self.p_ratio = np.divide(m, h, out=np.zeros_like(m), where=self.p_mask)
        self.r_ratio = np.divide(m, r, out=np.zeros_like(m), where=self.r_mask)

    def take(self, idx):
        f = object.__new__(_Features)
        for name in ("p_mask", "r_mask", "p_ratio", "r_ratio"):
            setattr(f, name, getattr(self, name)[idx])
        return f


def _side_average(ratio: np.ndarray, mask: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Weighted class average with renormalization over present classes.

    ratio, mask: (n, 4); w: (G, 4). Returns (G, n).
    """
    maskf = mask.astype(float)
    num = w @ (ratio * maskf).T
    mass = w @ maskf.T
    present = maskf.sum(axis=1)
    uniform = np.divide((ratio * maskf).sum(axis=1), present, out=np.zeros(len(present)), where=present > 0)
    out = np.divide(num, mass, out=np.broadcast_to(uniform, num.shape).copy(), where=mass > 0)
    return out


def answerability_matrix(features: _Features, w: np.ndarray) -> np.ndarray:
    p = _side_average(features.p_ratio, features.p_mask, w)
    r = _side_average(features.r_ratio, features.r_mask, w)
    s = p + r
    return np.divide(2 * p * r, s, out=np.zeros_like(s), where=s > 0)


def _grid_correlations(A: np.ndarray, base: np.ndarray, gold: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Pearson(delta*A + (1-delta)*base, gold) for every (delta, weight row); shape (D, G)."""
    n = len(gold)
    g = gold - gold.mean()
    b = base - base.mean()
    a = A - A.mean(axis=1, keepdims=True)
    cov_ag = a @ g / n
    cov_bg = float(b @ g) / n
    var_a = (a * a).mean(axis=1)
    var_b = float(b @ b) / n
    cov_ab = a @ b / n
    var_g = float(g @ g) / n
    d = deltas[:, None]
    cov = d * cov_ag[None, :] + (1 - d) * cov_bg
    var = d * d * var_a[None, :] + (1 - d) ** 2 * var_b + 2 * d * (1 - d) * cov_ab[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = cov / np.sqrt(var * var_g)
    corr[~(var > 1e-18)] = -np.inf
    return np.nan_to_num(corr, nan=-np.inf)


def best_candidate(A, base, gold, grid, steps):
    """Index pair (delta_step, grid_row) of the best candidate and its correlation."""
    deltas = np.arange(steps + 1) / steps
    corr = _grid_correlations(A, base, gold, deltas)
    top = corr.max()
    if not np.isfinite(top):
        raise UndefinedResultError("no candidate has a defined correlation")
    # rows of corr are delta-major and grid rows are already in tie-break order,
    # so the first index in C order is the lexicographically smallest
    flat = np.flatnonzero(corr.ravel() >= top - _TIE_TOL * max(1.0, abs(top)))[0]
    di, gi = divmod(int(flat), corr.shape[1])
    return di, gi, float(corr[di, gi])


def tune_weights(
    gold: Sequence[float],
    base_metric_scores: Sequence[float],
    answerability_counts: Sequence[ClassMatchCounts],
    cfg: TuneConfig = TuneConfig(),
) -> TuneResult:
    """Fit class weights and delta by bagged grid search.

    The first ``cfg.pool_size`` records form the tuning pool.
    """
    n = len(gold)
    if not (n == len(base_metric_scores) == len(answerability_counts)):
        raise InvalidParameterError("gold, base scores and counts must be aligned")
    if n < cfg.pool_size:
        raise InvalidParameterError(f"need at least {cfg.pool_size} records, got {n}")
    gold_arr = np.asarray(gold[: cfg.pool_size], dtype=float)
    base_arr = np.asarray(base_metric_scores[: cfg.pool_size], dtype=float)
    if np.any((base_arr < 0) | (base_arr > 1)):
        raise InvalidParameterError("base metric scores must lie in [0, 1]")
    if gold_arr.std() == 0:
        raise UndefinedResultError("gold scores have zero variance")
    feats = _Features(answerability_counts[: cfg.pool_size])

    steps = cfg.steps
    grid = simplex_grid(steps)
    w = grid / steps
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))

    winners = []
    corrs = []
    for bag in range(cfg.bags):
        idx = np.sort(rng.choice(cfg.pool_size, size=cfg.bag_size, replace=False))
        g = gold_arr[idx]
        if g.std() == 0:
            raise UndefinedResultError(f"bag {bag}: gold scores have zero variance")
        A = answerability_matrix(feats.take(idx), w)
        di, gi, c = best_candidate(A, base_arr[idx], g, grid, steps)
        winners.append((di / steps, *(grid[gi] / steps)))
        corrs.append(c)
        log.debug("bag %d: delta=%.2f weights=%s r=%.4f", bag, di / steps, grid[gi] / steps, c)

    win = np.asarray(winners)
    mean = win.mean(axis=0)
    std = win.std(axis=0)
    wsum = mean[1:].sum()
    weights = {cls: float(v / wsum) for cls, v in zip(CLASSES, mean[1:])}
    delta = float(min(max(mean[0], 0.0), 1.0))
    config = WeightConfig(weights, delta, cfg.base_metric)
    std_map = {"delta": float(std[0])}
    std_map.update({cls.value: float(s) for cls, s in zip(CLASSES, std[1:])})
    return TuneResult(config, std_map, tuple(tuple(float(x) for x in row) for row in winners), tuple(corrs))


def planted_gold(
    base_scores: Sequence[float], counts: Sequence[ClassMatchCounts], weights: WeightConfig
) -> list[float]:
    """Q-Metric values for given weights, computed record by record."""
    from .answerability import answerability, q_metric

    return [
        q_metric(answerability(c, weights).answerability, b, weights.delta)
        for b, c in zip(base_scores, counts)
    ]


def correlation_of(config: WeightConfig, gold, base_scores, counts) -> float:
    from .stats import pearson

    return pearson(planted_gold(base_scores, counts, config), gold)


__all__ = ["TuneConfig", "TuneResult", "tune_weights", "simplex_grid", "planted_gold", "correlation_of"]

