import json

import pytest

from qmetric.errors import DataError
from qmetric.io import (
    PairRecord,
    judgment_to_dict,
    read_judgments,
    read_pairs,
    read_score_column,
    write_jsonl,
)

LINES = [
    {"id": "a", "hypothesis": "who was the director of", "references": ["who was the director of titanic"]},
    {"id": "b", "hypothesis": "director of titanic", "references": ["who was the director of titanic"]},
]


def write(path, rows, newline="\n"):
    path.write_bytes(newline.join(json.dumps(r) for r in rows).encode("utf-8") + newline.encode())
    return path


def test_read_two_records(tmp_path):
    recs = read_pairs(write(tmp_path / "p.jsonl", LINES))
    assert [r.id for r in recs] == ["a", "b"]
    assert recs[1].references == ("who was the director of titanic",)


def test_blank_lines_and_meta_skipped(tmp_path):
    p = tmp_path / "p.jsonl"
    p.write_text(json.dumps({"meta": {"x": 1}}) + "\n\n" + json.dumps(LINES[0]) + "\n\n", encoding="utf-8")
    assert len(read_pairs(p)) == 1


def test_missing_references_names_line(tmp_path):
    rows = [LINES[0], {"id": "c", "hypothesis": "x"}]
    with pytest.raises(DataError) as err:
        read_pairs(write(tmp_path / "p.jsonl", rows))
    assert err.value.line == 2
    assert ":2:" in str(err.value)


def test_malformed_json(tmp_path):
    p = tmp_path / "p.jsonl"
    p.write_text(json.dumps(LINES[0]) + "\n{not json\n", encoding="utf-8")
    with pytest.raises(DataError) as err:
        read_pairs(p)
    assert err.value.line == 2


def test_duplicate_id(tmp_path):
    with pytest.raises(DataError, match="duplicate"):
        read_pairs(write(tmp_path / "p.jsonl", [LINES[0], LINES[0]]))


def test_empty_references_rejected(tmp_path):
    with pytest.raises(DataError):
        read_pairs(write(tmp_path / "p.jsonl", [{"id": "x", "hypothesis": "h", "references": []}]))


def test_crlf_equals_lf(tmp_path):
    lf = read_pairs(write(tmp_path / "lf.jsonl", LINES))
    crlf = read_pairs(write(tmp_path / "crlf.jsonl", LINES, "\r\n"))
    assert lf == crlf


def test_roundtrip_preserves_content(tmp_path):
    rows = [dict(LINES[0], noise="function-words", noop=False), LINES[1]]
    src = write(tmp_path / "p.jsonl", rows)
    recs = read_pairs(src)
    out = tmp_path / "out.jsonl"
    write_jsonl(out, None, [r.to_dict() for r in recs])
    assert read_pairs(out) == recs
    assert [json.loads(line) for line in out.read_text().splitlines()] == rows


def test_judgments_jsonl(tmp_path):
    rows = [
        {"id": "1", "noisy": "who director", "reference": "who is the director",
         "ratings": [{"annotator": "A", "score": 4}, {"annotator": "B", "score": 5}]},
        {"id": "2", "noisy": "x", "reference": "y", "ratings": [{"annotator": "A", "score": 1}], "gold": 0.25},
    ]
    recs = read_judgments(write(tmp_path / "j.jsonl", rows))
    assert recs[0].ratings[1].score == 5 and recs[0].gold is None
    assert recs[1].gold == 0.25
    assert [judgment_to_dict(r) for r in recs] == rows


@pytest.mark.parametrize(
    "bad",
    [
        {"id": "1", "noisy": "x", "reference": "y", "ratings": []},
        {"id": "1", "noisy": "x", "reference": "y", "ratings": [{"annotator": "A", "score": 6}]},
        {"id": "1", "noisy": "x", "reference": "y", "ratings": [{"score": 3}]},
        {"id": "1", "noisy": "x", "reference": "y", "ratings": [{"annotator": "A", "score": 3}], "gold": 2},
        {"id": "1", "reference": "y", "ratings": [{"annotator": "A", "score": 3}]},
    ],
)
def test_judgments_schema_errors(tmp_path, bad):
    with pytest.raises(DataError):
        read_judgments(write(tmp_path / "j.jsonl", [bad]))


def test_judgments_csv(tmp_path):
    p = tmp_path / "j.csv"
    p.write_text("id,noisy,reference,ann1,ann2\n1,who director,who is the director,4,5\n2,x,y,,2\n", encoding="utf-8")
    recs = read_judgments(p, "csv")
    assert [(r.annotator, r.score) for r in recs[0].ratings] == [("ann1", 4), ("ann2", 5)]
    assert [(r.annotator, r.score) for r in recs[1].ratings] == [("ann2", 2)]


def test_score_column(tmp_path):
    p = tmp_path / "s.jsonl"
    write_jsonl(p, {"tool": "qmetric"}, [{"id": "a", "scores": {"bleu1": 0.5}}, {"summary": {"bleu1": 0.5}}])
    assert read_score_column(p, "bleu1") == {"a": 0.5}
    with pytest.raises(DataError):
        read_score_column(p, "bleu4")


def test_pair_record_to_dict_field_order():
    d = PairRecord("x", "h", ("r",), {"z": 1, "a": 2}).to_dict()
    assert list(d) == ["id", "hypothesis", "references", "a", "z"]
