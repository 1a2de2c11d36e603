import re
from pathlib import Path

import pytest

from qmetric.porter import stem


@pytest.mark.parametrize(
    "word, expected",
    [
        ("caresses", "caress"), ("ponies", "poni"), ("caress", "caress"), ("cats", "cat"),
        ("feed", "feed"), ("agreed", "agre"), ("plastered", "plaster"), ("motoring", "motor"),
        ("sing", "sing"), ("conflated", "conflat"), ("troubled", "troubl"), ("sized", "size"),
        ("hopping", "hop"), ("falling", "fall"), ("filing", "file"), ("happy", "happi"),
        ("relational", "relat"), ("generalization", "gener"), ("running", "run"),
        ("directed", "direct"), ("is", "is"), ("a", "a"),
    ],
)
def test_known_stems(word, expected):
    assert stem(word) == expected


def test_agrees_with_nltk_original_algorithm():
    porter = pytest.importorskip("nltk.stem.porter")
    ref = porter.PorterStemmer(mode=porter.PorterStemmer.ORIGINAL_ALGORITHM)
    root = Path(__file__).resolve().parents[1]
    text = (root / "README.md").read_text(encoding="utf-8") + Path(porter.__file__).read_text(encoding="utf-8")
    words = sorted(set(re.findall(r"[a-z]{3,}", text.lower())))
    words += ["generalizations", "oscillators", "triplicate", "electriciti", "adjustable", "irritant"]
    mismatches = [(w, stem(w), ref.stem(w)) for w in words if stem(w) != ref.stem(w)]
    assert not mismatches
