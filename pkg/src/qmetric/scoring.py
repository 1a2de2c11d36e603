"""Sentence and corpus scoring for any mix of base metrics and Q-Metrics."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .answerability import (
    AnswerabilityScore,
    WeightConfig,
    answerability,
    corpus_q_metric,
    match_counts,
    q_metric,
)
from .errors import InvalidParameterError
from .metrics import (
    InfoModel,
    MeteorParams,
    NgramStats,
    bleu,
    corpus_aggregate,
    meteor_multi,
    ngram_stats,
    nist,
    rouge_l_multi,
)
from .text import ClassifiedQuestion, Lexicon, classify_tokens, tokenize

BASE_METRICS = ("bleu1", "bleu2", "bleu3", "bleu4", "nist", "meteor", "rouge-l")
NIST_ORDER = 5
_BLEU = re.compile(r"^bleu([1-4])$")


def parse_metric(name: str) -> tuple[str, bool]:
    """Split ``q-bleu1`` into (``bleu1``, True)."""
    q = name.startswith("q-")
    base = name[2:] if q else name
    if base not in BASE_METRICS:
        raise InvalidParameterError(
            f"unknown metric {name!r}; known: {', '.join(BASE_METRICS)} and their q- variants"
        )
    return base, q


@dataclass
class ScoreRow:
    id: str
    scores: dict[str, float]
    answerability: AnswerabilityScore | None = None
    stats: NgramStats | None = field(default=None, repr=False)

    def to_dict(self, components: bool = False) -> dict:
        out = {"id": self.id, "scores": self.scores}
        if components and self.answerability is not None:
            a = self.answerability
            out["p_avg"] = a.p_avg
            out["r_avg"] = a.r_avg
            out["answerability"] = a.answerability
        return out


class Scorer:
    """Scores hypothesis questions against reference questions.

    Tokens are lowercased before n-gram matching; answerability classes are
    assigned on the case-preserved tokens. With several references the
    answerability against the best-matching reference is used.
    """

    def __init__(
        self,
        metrics: Sequence[str],
        weights: Mapping[str, WeightConfig] | WeightConfig | None = None,
        lexicon: Lexicon | None = None,
        info: InfoModel | None = None,
        meteor_params: MeteorParams | None = None,
        rouge_beta: float = 1.2,
        use_stems: bool = False,
    ):
        if not metrics:
            raise InvalidParameterError("no metrics requested")
        self.metrics = list(metrics)
        parsed = [parse_metric(m) for m in self.metrics]
        if len(set(self.metrics)) != len(self.metrics):
            raise InvalidParameterError("metric requested more than once")
        self.bases = sorted({b for b, _ in parsed}, key=BASE_METRICS.index)
        self.lexicon = lexicon or Lexicon.default()
        self.info = info
        self.meteor_params = meteor_params or MeteorParams()
        self.rouge_beta = rouge_beta
        self.use_stems = use_stems
        self.weights = self._resolve_weights(weights, [b for b, q in parsed if q])
        if "nist" in self.bases and info is None:
            raise InvalidParameterError("NIST needs an InfoModel")
        orders = [int(_BLEU.match(b).group(1)) for b in self.bases if _BLEU.match(b)]
        self.max_bleu_order = max(orders, default=0)

    @staticmethod
    def _resolve_weights(weights, q_bases) -> dict[str, WeightConfig]:
        if not q_bases:
            return {}
        if weights is None:
            raise InvalidParameterError("Q-Metrics requested but no weights supplied")
        if isinstance(weights, WeightConfig):
            return {b: weights for b in q_bases}
        out = {}
        for b in q_bases:
            if b in weights:
                out[b] = weights[b]
            elif len(weights) == 1:
                out[b] = next(iter(weights.values()))
            else:
                raise InvalidParameterError(f"no weights supplied for base metric {b!r}")
        return out

    def classify(self, text: str) -> ClassifiedQuestion:
        return classify_tokens(tokenize(text), self.lexicon)

    def score(self, rid: str, hypothesis: str, references: Sequence[str]) -> ScoreRow:
        if not references:
            raise InvalidParameterError("at least one reference is required")
        hyp_c = self.classify(hypothesis)
        refs_c = [self.classify(r) for r in references]
        hyp = list(hyp_c.lowered)
        refs = [list(r.lowered) for r in refs_c]

        base: dict[str, float] = {}
        stats = None
        if self.max_bleu_order:
            stats = ngram_stats(hyp, refs, self.max_bleu_order)
        for b in self.bases:
            m = _BLEU.match(b)
            if m:
                base[b] = bleu(stats, int(m.group(1)))
            elif b == "nist":
                base[b] = nist(hyp, refs, self.info, NIST_ORDER)
            elif b == "meteor":
                base[b] = meteor_multi(hyp, refs, self.meteor_params)
            elif b == "rouge-l":
                base[b] = rouge_l_multi(hyp, refs, self.rouge_beta)

        scores: dict[str, float] = {}
        ans = None
        for name in self.metrics:
            b, q = parse_metric(name)
            if not q:
                scores[name] = base[b]
                continue
            w = self.weights[b]
            ans = max(
                (answerability(match_counts(hyp_c, r, self.use_stems), w) for r in refs_c),
                key=lambda a: a.answerability,
            )
            scores[name] = q_metric(ans.answerability, self.unit_base(b, base[b], refs), w.delta)
        return ScoreRow(rid, scores, ans, stats)

    def unit_base(self, b: str, value: float, refs) -> float:
        if b != "nist":
            return value
        # NIST is unbounded; scale by the best reference's self-score
        top = max(nist(r, refs, self.info, NIST_ORDER) for r in refs)
        return min(value / top, 1.0) if top > 0 else 0.0

    def summary(self, rows: Sequence[ScoreRow]) -> dict[str, float]:
        """Corpus BLEU for BLEU columns, the mean for every other column."""
        if not rows:
            raise InvalidParameterError("cannot summarize an empty corpus")
        out = {}
        for name in self.metrics:
            b, q = parse_metric(name)
            m = _BLEU.match(b)
            if m and not q:
                out[name] = corpus_aggregate([r.stats for r in rows], int(m.group(1)))
            else:
                out[name] = corpus_q_metric([r.scores[name] for r in rows])
        return out
