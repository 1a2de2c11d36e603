"""Answerability score and the Q-Metric combination.

Tokens are split into content (r), named-entity (n), question-type (q) and
function (f) classes. Per class, matched counts give a precision over the
hypothesis and a recall over the reference; their weighted averages are
combined by a harmonic mean into the answerability score, which is then
blended with any base similarity metric::

    q = delta * answerability + (1 - delta) * base
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InvalidParameterError
from .porter import stem
from .text import ClassifiedQuestion, TokenClass

CLASSES = (TokenClass.CONTENT, TokenClass.NAMED_ENTITY, TokenClass.QUESTION_TYPE, TokenClass.FUNCTION)

_JSON_KEYS = {
    TokenClass.NAMED_ENTITY: "named_entity",
    TokenClass.CONTENT: "content",
    TokenClass.QUESTION_TYPE: "question_type",
    TokenClass.FUNCTION: "function",
}
_FROM_JSON = {v: k for k, v in _JSON_KEYS.items()}

WEIGHT_TOL = 1e-6


@dataclass(frozen=True)
class ClassCount:
    matched: int
    hyp_total: int
    ref_total: int


@dataclass(frozen=True)
class ClassMatchCounts:
    counts: Mapping[TokenClass, ClassCount]

    def __getitem__(self, cls: TokenClass) -> ClassCount:
        return self.counts[cls]

    @property
    def hyp_len(self) -> int:
        return sum(c.hyp_total for c in self.counts.values())

    @property
    def ref_len(self) -> int:
        return sum(c.ref_total for c in self.counts.values())

    def as_arrays(self):
        """(matched, hyp_total, ref_total) lists in CLASSES order."""
        cs = [self.counts[c] for c in CLASSES]
        return [c.matched for c in cs], [c.hyp_total for c in cs], [c.ref_total for c in cs]


@dataclass(frozen=True)
class WeightConfig:
    weights: Mapping[TokenClass, float]
    delta: float
    base_metric: str = "bleu1"

    def __post_init__(self):
        w = {c: float(self.weights.get(c, 0.0)) for c in CLASSES}
        extra = set(self.weights) - set(CLASSES)
        if extra:
            raise InvalidParameterError(f"unknown weight classes: {extra}")
        for c, v in w.items():
            if not (0.0 <= v <= 1.0) or math.isnan(v):
                raise InvalidParameterError(f"weight for {c.value} must lie in [0, 1], got {v}")
        if abs(sum(w.values()) - 1.0) > WEIGHT_TOL:
            raise InvalidParameterError(f"class weights must sum to 1, got {sum(w.values())}")
        if not (0.0 <= self.delta <= 1.0):
            raise InvalidParameterError(f"delta must lie in [0, 1], got {self.delta}")
        object.__setattr__(self, "weights", w)

    def to_dict(self) -> dict:
        return {
            "weights": {_JSON_KEYS[c]: self.weights[c] for c in CLASSES},
            "delta": self.delta,
            "base_metric": self.base_metric,
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "WeightConfig":
        try:
            raw = obj["weights"]
            weights = {}
            for k, v in raw.items():
                if k not in _FROM_JSON:
                    raise InvalidParameterError(f"unknown weight key {k!r}")
                weights[_FROM_JSON[k]] = float(v)
            return cls(weights, float(obj["delta"]), str(obj.get("base_metric", "bleu1")))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidParameterError(f"malformed weight config: {exc}") from exc

    @classmethod
    def load(cls, path) -> "WeightConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class AnswerabilityScore:
    p_avg: float
    r_avg: float
    answerability: float
    counts: ClassMatchCounts
    effective_weights_p: Mapping[TokenClass, float] = field(default_factory=dict)
    effective_weights_r: Mapping[TokenClass, float] = field(default_factory=dict)


def _clipped_overlap(a: Sequence[str], b: Sequence[str]) -> int:
    ca, cb = Counter(a), Counter(b)
    return sum(min(c, cb[w]) for w, c in ca.items())


def match_counts(hyp: ClassifiedQuestion, ref: ClassifiedQuestion, use_stems: bool = False) -> ClassMatchCounts:
    """Clipped within-class matches between hypothesis and reference tokens."""
    out = {}
    for cls in CLASSES:
        h = hyp.words(cls)
        r = ref.words(cls)
        if use_stems:
            h = [stem(w) for w in h]
            r = [stem(w) for w in r]
        out[cls] = ClassCount(_clipped_overlap(h, r), len(h), len(r))
    return ClassMatchCounts(out)


def _weighted_average(ratios: dict, weights: Mapping[TokenClass, float]):
    # classes absent on this side are dropped and their weight is spread
    # proportionally over the remaining ones
    if not ratios:
        return 0.0, {}
    mass = sum(weights[c] for c in ratios)
    if mass > 0:
        eff = {c: weights[c] / mass for c in ratios}
        # divide last so that all-ones ratios give exactly 1.0
        value = sum(weights[c] * v for c, v in ratios.items()) / mass
    else:
        eff = {c: 1.0 / len(ratios) for c in ratios}
        value = sum(ratios.values()) / len(ratios)
    return min(value, 1.0), eff


def answerability(counts: ClassMatchCounts, weights: WeightConfig) -> AnswerabilityScore:
    p_ratios = {c: counts[c].matched / counts[c].hyp_total for c in CLASSES if counts[c].hyp_total > 0}
    r_ratios = {c: counts[c].matched / counts[c].ref_total for c in CLASSES if counts[c].ref_total > 0}
    p_avg, eff_p = _weighted_average(p_ratios, weights.weights)
    r_avg, eff_r = _weighted_average(r_ratios, weights.weights)
    denom = p_avg + r_avg
    score = 2 * p_avg * r_avg / denom if denom > 0 else 0.0
    return AnswerabilityScore(p_avg, r_avg, min(score, 1.0), counts, eff_p, eff_r)


def _check_unit(name: str, x: float) -> None:
    if not (0.0 <= x <= 1.0):
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {x}")


def q_metric(answerability_value: float, base_score: float, delta: float) -> float:
    _check_unit("answerability", answerability_value)
    _check_unit("base score", base_score)
    _check_unit("delta", delta)
    if delta == 0.0:
        return base_score
    if delta == 1.0:
        return answerability_value
    return delta * answerability_value + (1.0 - delta) * base_score


def corpus_q_metric(per_sentence_q: Sequence[float]) -> float:
    if len(per_sentence_q) == 0:
        raise InvalidParameterError("corpus Q-Metric needs at least one sentence")
    return math.fsum(per_sentence_q) / len(per_sentence_q)
