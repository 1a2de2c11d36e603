"""Random question generators shared by the test modules."""

from __future__ import annotations

import random

from qmetric.text import Lexicon

QUESTION_WORDS = sorted(Lexicon.default().question_types)
FUNCTION_WORDS = ["was", "the", "of", "is", "a", "in", "did", "to", "for", "on", "by", "are", "does"]
CONTENT_WORDS = [
    "director", "directed", "film", "killed", "married", "wrote", "river", "year",
    "signed", "votes", "capital", "population", "star", "color", "playing", "born",
]
ENTITIES = ["Titanic", "Jane", "Paris", "Gerard", "Butler", "Inception", "Nile", "Olivia", "Munn", "CO2"]


def random_question(rng: random.Random, min_len: int = 1, max_len: int = 12) -> list[str]:
    n = rng.randint(min_len, max_len)
    toks = []
    if rng.random() < 0.9:
        toks.append(rng.choice(QUESTION_WORDS).capitalize() if rng.random() < 0.5 else rng.choice(QUESTION_WORDS))
    pools = [FUNCTION_WORDS, CONTENT_WORDS, ENTITIES]
    while len(toks) < n:
        toks.append(rng.choice(rng.choice(pools)))
    return toks[:n] if toks else [rng.choice(CONTENT_WORDS)]


def noisy_copy(rng: random.Random, toks: list[str]) -> list[str]:
    """Drop a random subset of tokens and occasionally swap one word."""
    keep_p = rng.choice([0.3, 0.5, 0.7, 0.9, 1.0])
    out = [t for t in toks if rng.random() < keep_p]
    if out and rng.random() < 0.3:
        i = rng.randrange(len(out))
        out[i] = rng.choice(rng.choice([QUESTION_WORDS, CONTENT_WORDS, ENTITIES, FUNCTION_WORDS]))
    return out
