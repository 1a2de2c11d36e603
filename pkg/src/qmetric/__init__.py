"""Answerability-aware evaluation metrics for generated questions."""

__version__ = "0.1.0"

from .answerability import (
    AnswerabilityScore,
    ClassMatchCounts,
    WeightConfig,
    answerability,
    corpus_q_metric,
    match_counts,
    q_metric,
)
from .errors import DataError, InvalidParameterError, QMetricError, UndefinedResultError
from .text import ClassifiedQuestion, Lexicon, TokenClass, TokenList, classify, classify_tokens, tokenize
