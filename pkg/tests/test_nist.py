import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_nist
from qmetric.metrics import InfoModel, nist
from qmetric.metrics.nist import nist_penalty

CORPUS = [
    "who was the director of titanic".split(),
    "who directed the film titanic".split(),
    "what year was the film released".split(),
]


def test_penalty_calibration():
    assert nist_penalty(2, 3) == pytest.approx(0.5)
    assert nist_penalty(3, 3) == 1.0
    assert nist_penalty(5, 3) == 1.0


def test_info_values_by_hand():
    info = InfoModel.from_corpus(CORPUS, 5)
    # 17 tokens; "the" occurs 3 times, "film" twice, "the film" twice
    assert info.total_unigrams == 17
    assert info.info(("the",)) == pytest.approx(math.log2(17 / 3))
    assert info.info(("the", "film")) == pytest.approx(math.log2(3 / 2))
    assert info.info(("film", "titanic")) == pytest.approx(math.log2(2 / 1))
    assert info.info(("zebra",)) == 0.0


def test_toy_corpus_matches_oracle():
    info = InfoModel.from_corpus(CORPUS, 5)
    for hyp in ["who directed titanic", "what was the film", "the director of titanic", "titanic"]:
        h = hyp.split()
        got = nist(h, [CORPUS[0], CORPUS[1]], info, 5)
        assert got == pytest.approx(naive_nist(h, [CORPUS[0], CORPUS[1]], CORPUS, 5), abs=1e-12)


def test_identity_dominates_shorter():
    ref = "a b c d e f".split()
    info = InfoModel.from_corpus([ref], 5)
    full = nist(ref, [ref], info, 5)
    assert full > 0
    for k in range(1, len(ref)):
        assert nist(ref[:k], [ref], info, 5) < full


def test_zero_match_is_zero():
    info = InfoModel.from_corpus(CORPUS)
    assert nist(["zebra", "xylophone"], [CORPUS[0]], info) == 0.0
    assert nist([], [CORPUS[0]], info) == 0.0


def test_prefix_monotonic_counts():
    info = InfoModel.from_corpus(CORPUS, 4)
    for g, c in info.counts.items():
        if len(g) > 1 and g[:-1] in info.counts:
            assert c <= info.counts[g[:-1]]


def test_from_file(tmp_path):
    p = tmp_path / "corpus.txt"
    p.write_text("\n".join(" ".join(s) for s in CORPUS) + "\n", encoding="utf-8")
    assert InfoModel.from_file(p).counts == InfoModel.from_corpus(CORPUS).counts


sent = st.lists(st.sampled_from("abcde"), min_size=1, max_size=10)


@settings(max_examples=150)
@given(st.lists(sent, min_size=1, max_size=4), sent, st.integers(1, 5))
def test_random_oracle(corpus, hyp, n):
    info = InfoModel.from_corpus(corpus, n)
    refs = corpus[:2]
    got = nist(hyp, refs, info, n)
    assert got >= 0
    assert got == pytest.approx(naive_nist(hyp, refs, corpus, n), abs=1e-9)
