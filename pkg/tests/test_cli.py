import json
import random

import pytest

from qmetric.cli import main
from synth import noisy_copy, random_question

REF = "Who was the director of Titanic ?"


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


def read_rows(path):
    lines = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
    return lines[0]["meta"], [r for r in lines[1:] if "id" in r], [r for r in lines if "summary" in r]


@pytest.fixture
def pairs(tmp_path):
    return write_jsonl(
        tmp_path / "pairs.jsonl",
        [
            {"id": "S2", "hypothesis": "Who was the director of ?", "references": [REF]},
            {"id": "S1", "hypothesis": "director of Titanic ?", "references": [REF]},
        ],
    )


@pytest.fixture
def zero_delta(tmp_path):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({
        "weights": {"named_entity": 0.25, "content": 0.25, "question_type": 0.25, "function": 0.25},
        "delta": 0.0, "base_metric": "bleu1",
    }))
    return p


def test_score_bleu3_worked_example(tmp_path, pairs):
    out = tmp_path / "s.jsonl"
    assert main(["score", str(pairs), "--metrics", "bleu3", "--out", str(out)]) == 0
    meta, rows, summary = read_rows(out)
    assert [r["id"] for r in rows] == ["S2", "S1"]
    assert rows[0]["scores"]["bleu3"] == pytest.approx(0.819, abs=1e-3)
    assert rows[1]["scores"]["bleu3"] == pytest.approx(0.368, abs=1e-3)
    assert meta["tool"] == "qmetric" and len(meta["lexicon_sha256"]) == 64
    assert summary and "bleu3" in summary[0]["summary"]


def test_q_metric_with_zero_delta_equals_base(tmp_path, pairs, zero_delta):
    out = tmp_path / "s.jsonl"
    main(["score", str(pairs), "--metrics", "bleu1,q-bleu1", "--weights", str(zero_delta), "--components", "--out", str(out)])
    _, rows, _ = read_rows(out)
    for r in rows:
        assert r["scores"]["q-bleu1"] == r["scores"]["bleu1"]
        assert {"p_avg", "r_avg", "answerability"} <= set(r)


def test_all_metrics_and_tsv(tmp_path, pairs, zero_delta):
    out = tmp_path / "s.tsv"
    metrics = "bleu1,bleu2,bleu3,bleu4,nist,meteor,rouge-l,q-bleu4,q-nist,q-meteor,q-rouge-l"
    assert main(["score", str(pairs), "--metrics", metrics, "--weights", str(zero_delta), "--format", "tsv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# meta: ")
    assert lines[1].split()[:3] == ["id", "bleu1", "bleu2"]
    assert lines[-1].startswith("#corpus")


def test_usage_errors(tmp_path, pairs, capsys):
    assert main(["score", str(pairs), "--metrics", "bleu9"]) == 1
    assert main(["score", str(pairs), "--metrics", "q-bleu1"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["score"])
    assert exc.value.code == 1
    assert "error" in capsys.readouterr().err


def test_data_errors(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", "hypothesis": "h"}\n')
    assert main(["score", str(bad), "--metrics", "bleu1"]) == 2
    assert main(["score", str(tmp_path / "missing.jsonl"), "--metrics", "bleu1"]) == 2


def test_workers_do_not_change_output(tmp_path):
    rng = random.Random(5)
    rows = []
    for i in range(1000):
        ref = random_question(rng, 3, 12)
        rows.append({"id": f"q{i}", "hypothesis": " ".join(noisy_copy(rng, ref)), "references": [" ".join(ref)]})
    src = write_jsonl(tmp_path / "big.jsonl", rows)
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"weights": {"named_entity": 0.4, "content": 0.3, "question_type": 0.2, "function": 0.1},
                             "delta": 0.6, "base_metric": "bleu4"}))
    outs = []
    for workers in (1, 8):
        out = tmp_path / f"s{workers}.jsonl"
        args = ["score", str(src), "--metrics", "bleu4,q-bleu4,rouge-l,meteor", "--weights", str(w),
                "--workers", str(workers), "--out", str(out)]
        assert main(args) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_perturb_roundtrip_and_determinism(tmp_path):
    src = write_jsonl(tmp_path / "q.jsonl", [
        {"id": "1", "question": "Who killed Jane ?"},
        {"id": "2", "question": "What is against the sign ?"},
        {"id": "3", "question": "Why is using O2 instead of CO2 less efficient ?"},
    ])
    outs = []
    for i in range(2):
        out = tmp_path / f"p{i}.jsonl"
        assert main(["perturb", str(src), "--noise", "question-type", "--seed", "9", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    meta, rows, _ = read_rows(tmp_path / "p0.jsonl")
    assert meta["seed"] == 9
    assert rows[2]["noop"] is False and rows[1]["references"] == ["What is against the sign ?"]
    # perturbed output is a valid pair file
    assert main(["score", str(tmp_path / "p0.jsonl"), "--metrics", "bleu4", "--out", str(tmp_path / "s.jsonl")]) == 0

    out = tmp_path / "fw.jsonl"
    main(["perturb", str(src), "--noise", "function-words", "--out", str(out)])
    _, rows, _ = read_rows(out)
    assert rows[0]["noop"] is True
    assert rows[1]["hypothesis"] == "What sign"


def judgments(tmp_path, n=320, seed=2):
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        ref = random_question(rng, 4, 12)
        hyp = noisy_copy(rng, ref)
        frac = len(hyp) / len(ref)
        base = 1 + round(4 * frac)
        rows.append({
            "id": f"j{i}", "noisy": " ".join(hyp), "reference": " ".join(ref),
            "ratings": [
                {"annotator": f"a{i % 5}", "score": max(1, min(5, base + rng.choice([-1, 0, 0, 1])))},
                {"annotator": f"b{i % 3}", "score": max(1, min(5, base + rng.choice([-1, 0, 1])))},
            ],
        })
    return write_jsonl(tmp_path / "j.jsonl", rows)


def test_normalize_tune_correlate_pipeline(tmp_path):
    j = judgments(tmp_path)
    norm = tmp_path / "norm.jsonl"
    assert main(["normalize", str(j), "--agreement", "--out", str(norm)]) == 0
    meta, rows, _ = read_rows(norm)
    assert all(0 <= r["gold"] <= 1 for r in rows)
    assert -1 <= meta["agreement"]["kappa"] <= 1

    wfile = tmp_path / "w.json"
    assert main(["tune", str(norm), "--bags", "3", "--metric", "bleu1", "--seed", "4", "--out", str(wfile)]) == 0
    w = json.loads(wfile.read_text())
    assert sum(w["weights"].values()) == pytest.approx(1.0, abs=1e-6)
    assert set(w["std"]) == {"delta", "content", "named_entity", "question_type", "function"}
    assert w["meta"]["seed"] == 4

    pairs = write_jsonl(tmp_path / "pairs.jsonl", [
        {"id": r["id"], "hypothesis": r["noisy"], "references": [r["reference"]]} for r in rows
    ])
    scores = tmp_path / "scores.jsonl"
    assert main(["score", str(pairs), "--metrics", "bleu1,q-bleu1", "--weights", str(wfile), "--out", str(scores)]) == 0
    rep = tmp_path / "rep.json"
    assert main(["correlate", "--scores", str(scores), "--metric", "q-bleu1", "--gold", str(norm),
                 "--permutations", "500", "--out", str(rep)]) == 0
    report = json.loads(rep.read_text())
    assert -1 <= report["pearson"] <= 1 and report["n"] == 320


def test_correlate_identical_and_mismatch(tmp_path):
    gold = write_jsonl(tmp_path / "g.jsonl", [
        {"id": str(i), "noisy": "x", "reference": "y", "ratings": [{"annotator": "a", "score": 1}], "gold": g}
        for i, g in enumerate([0.1, 0.5, 0.3, 0.9])
    ])
    scores = write_jsonl(tmp_path / "s.jsonl", [
        {"id": str(i), "scores": {"m": g}} for i, g in enumerate([0.1, 0.5, 0.3, 0.9])
    ])
    out = tmp_path / "r.json"
    assert main(["correlate", "--scores", str(scores), "--metric", "m", "--gold", str(gold),
                 "--permutations", "100", "--out", str(out)]) == 0
    r = json.loads(out.read_text())
    assert r["pearson"] == pytest.approx(1.0) and r["spearman"] == pytest.approx(1.0)
    short = write_jsonl(tmp_path / "s2.jsonl", [{"id": "0", "scores": {"m": 0.1}}])
    assert main(["correlate", "--scores", str(short), "--metric", "m", "--gold", str(gold)]) == 2
