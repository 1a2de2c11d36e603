"""Systematic noise for questions.

Four procedures, each removing or altering one class of tokens: drop all
function words, drop up to three named entities, drop content words, or swap
the question word for a different one.

Randomness comes only from an explicit :class:`RngState`, which wraps
numpy's PCG64 bit generator seeded through ``SeedSequence``. Per-record
streams are derived from ``(seed, sha256(record id))`` so corpus perturbation
gives the same result whatever order or worker count is used.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .text import ClassifiedQuestion, Lexicon, TokenClass, TokenList

MAX_NAMED_ENTITY_DROPS = 3


class NoiseKind(enum.Enum):
    DROP_FUNCTION_WORDS = "function-words"
    DROP_NAMED_ENTITIES = "named-entities"
    DROP_CONTENT_WORDS = "content-words"
    REPLACE_QUESTION_TYPE = "question-type"


class DropMode(enum.Enum):
    ALL = "all"
    UNIFORM_K = "uniform-k"


class RngState:
    algorithm = "numpy PCG64 via SeedSequence"

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        if not 0 <= seed < 2**64:
            raise InvalidParameterError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.key = key
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))

    @classmethod
    def for_record(cls, seed: int, record_id: str) -> "RngState":
        digest = hashlib.sha256(record_id.encode("utf-8")).digest()
        key = tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 32, 4))
        return cls(seed, key)

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high] inclusive."""
        return int(self._gen.integers(low, high + 1))

    def sample(self, population, k: int) -> list:
        idx = self._gen.choice(len(population), size=k, replace=False)
        return [population[int(i)] for i in idx]


@dataclass(frozen=True)
class Perturbation:
    tokens: TokenList
    kind: NoiseKind
    noop: bool = False
    changed: tuple[int, ...] = ()  # positions in the input that were removed or replaced

    def text(self) -> str:
        return self.tokens.join()


def _without(q: ClassifiedQuestion, drop: set[int], kind: NoiseKind) -> Perturbation:
    kept = tuple(t for i, t in enumerate(q.tokens) if i not in drop)
    return Perturbation(TokenList(kept, " ".join(kept)), kind, False, tuple(sorted(drop)))


def _noop(q: ClassifiedQuestion, kind: NoiseKind) -> Perturbation:
    return Perturbation(q.tokens, kind, noop=True)


def drop_function_words(q: ClassifiedQuestion) -> Perturbation:
    kind = NoiseKind.DROP_FUNCTION_WORDS
    drop = set(q.positions(TokenClass.FUNCTION))
    if not drop:
        return _noop(q, kind)
    return _without(q, drop, kind)


def drop_named_entities(q: ClassifiedQuestion, rng: RngState, max_drops: int = MAX_NAMED_ENTITY_DROPS) -> Perturbation:
    kind = NoiseKind.DROP_NAMED_ENTITIES
    pos = q.positions(TokenClass.NAMED_ENTITY)
    if not pos:
        return _noop(q, kind)
    k = rng.integer(1, min(max_drops, len(pos)))
    return _without(q, set(rng.sample(pos, k)), kind)


def drop_content_words(q: ClassifiedQuestion, rng: RngState, mode: DropMode = DropMode.UNIFORM_K) -> Perturbation:
    kind = NoiseKind.DROP_CONTENT_WORDS
    pos = q.positions(TokenClass.CONTENT)
    if not pos:
        return _noop(q, kind)
    if mode is DropMode.ALL:
        return _without(q, set(pos), kind)
    k = rng.integer(1, len(pos))
    return _without(q, set(rng.sample(pos, k)), kind)


def replace_question_type(q: ClassifiedQuestion, rng: RngState, lexicon: Lexicon | None = None) -> Perturbation:
    """Swap the first question word for a different one, keeping its initial case."""
    kind = NoiseKind.REPLACE_QUESTION_TYPE
    lexicon = lexicon or Lexicon.default()
    pos = q.positions(TokenClass.QUESTION_TYPE)
    if not pos:
        return _noop(q, kind)
    i = pos[0]
    original = q.tokens[i]
    choices = sorted(lexicon.question_types - {original.lower()})
    if not choices:
        return _noop(q, kind)
    new = choices[rng.integer(0, len(choices) - 1)]
    if original[:1].isupper():
        new = new[:1].upper() + new[1:]
    toks = list(q.tokens)
    toks[i] = new
    return Perturbation(TokenList(tuple(toks), " ".join(toks)), kind, False, (i,))


def perturb(
    q: ClassifiedQuestion,
    kind: NoiseKind,
    rng: RngState,
    mode: DropMode = DropMode.UNIFORM_K,
    lexicon: Lexicon | None = None,
) -> Perturbation:
    if kind is NoiseKind.DROP_FUNCTION_WORDS:
        return drop_function_words(q)
    if kind is NoiseKind.DROP_NAMED_ENTITIES:
        return drop_named_entities(q, rng)
    if kind is NoiseKind.DROP_CONTENT_WORDS:
        return drop_content_words(q, rng, mode)
    return replace_question_type(q, rng, lexicon)
