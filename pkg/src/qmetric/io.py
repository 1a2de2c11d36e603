"""JSONL corpus formats and result serialization.

Pair files hold one ``{"id", "hypothesis", "references"}`` object per line.
Judgment files hold ``{"id", "noisy", "reference", "ratings": [{"annotator",
"score"}], "gold"?}``. Every file written by the CLI starts with a
``{"meta": {...}}`` line, which readers skip.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping

from .errors import DataError, InvalidParameterError
from .stats import JudgmentRecord, Rating


@dataclass(frozen=True)
class PairRecord:
    id: str
    hypothesis: str
    references: tuple[str, ...]
    extra: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"id": self.id, "hypothesis": self.hypothesis, "references": list(self.references)}
        for k in sorted(self.extra):
            out[k] = self.extra[k]
        return out


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=False)


def iter_jsonl(path) -> Iterator[tuple[int, dict]]:
    """Yield (line number, object) for each non-blank, non-meta line."""
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"invalid JSON: {exc.msg}", path, lineno) from None
            if not isinstance(obj, dict):
                raise DataError("expected a JSON object", path, lineno)
            if set(obj) == {"meta"} or set(obj) == {"summary"}:
                continue
            yield lineno, obj


def _require_str(obj, key, path, lineno) -> str:
    if key not in obj:
        raise DataError(f"missing key {key!r}", path, lineno)
    val = obj[key]
    if not isinstance(val, str):
        raise DataError(f"{key!r} must be a string", path, lineno)
    return val


def _record_id(obj, path, lineno, seen: set) -> str:
    if "id" not in obj:
        raise DataError("missing key 'id'", path, lineno)
    rid = obj["id"]
    if isinstance(rid, bool) or not isinstance(rid, (str, int)):
        raise DataError("'id' must be a string", path, lineno)
    rid = str(rid)
    if rid in seen:
        raise DataError(f"duplicate id {rid!r}", path, lineno)
    seen.add(rid)
    return rid


def read_pairs(path) -> list[PairRecord]:
    out = []
    seen: set = set()
    for lineno, obj in iter_jsonl(path):
        rid = _record_id(obj, path, lineno, seen)
        hyp = _require_str(obj, "hypothesis", path, lineno)
        if "references" not in obj:
            raise DataError("missing key 'references'", path, lineno)
        refs = obj["references"]
        if not isinstance(refs, list) or not refs or not all(isinstance(r, str) for r in refs):
            raise DataError("'references' must be a non-empty list of strings", path, lineno)
        extra = {k: v for k, v in obj.items() if k not in ("id", "hypothesis", "references")}
        out.append(PairRecord(rid, hyp, tuple(refs), extra))
    return out


def read_questions(path) -> list[tuple[str, str, dict]]:
    """Clean questions for perturbation: ``{"id", "question"}`` per line."""
    out = []
    seen: set = set()
    for lineno, obj in iter_jsonl(path):
        rid = _record_id(obj, path, lineno, seen)
        q = _require_str(obj, "question", path, lineno)
        extra = {k: v for k, v in obj.items() if k not in ("id", "question")}
        out.append((rid, q, extra))
    return out


def _parse_ratings(raw, path, lineno) -> tuple[Rating, ...]:
    if not isinstance(raw, list) or not raw:
        raise DataError("'ratings' must be a non-empty list", path, lineno)
    out = []
    for item in raw:
        if not isinstance(item, dict) or "annotator" not in item or "score" not in item:
            raise DataError("each rating needs 'annotator' and 'score'", path, lineno)
        score = item["score"]
        if isinstance(score, float) and score.is_integer():
            score = int(score)
        if isinstance(score, bool) or not isinstance(score, int) or not 1 <= score <= 5:
            raise DataError(f"rating {score!r} outside 1..5", path, lineno)
        out.append(Rating(str(item["annotator"]), score))
    return tuple(out)


def read_judgments(path, fmt: str = "jsonl") -> list[JudgmentRecord]:
    if fmt == "csv":
        return _read_judgments_csv(path)
    if fmt != "jsonl":
        raise InvalidParameterError(f"unknown judgment format {fmt!r}")
    out = []
    seen: set = set()
    for lineno, obj in iter_jsonl(path):
        rid = _record_id(obj, path, lineno, seen)
        noisy = _require_str(obj, "noisy", path, lineno)
        ref = _require_str(obj, "reference", path, lineno)
        ratings = _parse_ratings(obj.get("ratings"), path, lineno)
        gold = obj.get("gold")
        if gold is not None:
            if isinstance(gold, bool) or not isinstance(gold, (int, float)) or not 0 <= gold <= 1:
                raise DataError("'gold' must be a number in [0, 1]", path, lineno)
            gold = float(gold)
        out.append(JudgmentRecord(rid, noisy, ref, ratings, gold))
    return out


def _read_judgments_csv(path) -> list[JudgmentRecord]:
    # wide layout: id, noisy, reference, then one column per annotator; empty cells are skipped
    out = []
    seen: set = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        fixed = {"id", "noisy", "reference", "gold"}
        if reader.fieldnames is None or not {"id", "noisy", "reference"} <= set(reader.fieldnames):
            raise DataError("CSV header must contain id, noisy, reference", path, 1)
        annotators = [f for f in reader.fieldnames if f not in fixed]
        for lineno, row in enumerate(reader, 2):
            rid = _record_id(row, path, lineno, seen)
            ratings = []
            for ann in annotators:
                cell = (row.get(ann) or "").strip()
                if not cell:
                    continue
                try:
                    score = int(cell)
                except ValueError:
                    raise DataError(f"rating {cell!r} is not an integer", path, lineno) from None
                if not 1 <= score <= 5:
                    raise DataError(f"rating {score} outside 1..5", path, lineno)
                ratings.append(Rating(ann, score))
            if not ratings:
                raise DataError("record has no ratings", path, lineno)
            gold = (row.get("gold") or "").strip()
            out.append(JudgmentRecord(rid, row["noisy"], row["reference"], tuple(ratings), float(gold) if gold else None))
    return out


def judgment_to_dict(rec: JudgmentRecord) -> dict:
    out = {
        "id": rec.id,
        "noisy": rec.noisy,
        "reference": rec.reference,
        "ratings": [{"annotator": r.annotator, "score": r.score} for r in rec.ratings],
    }
    if rec.gold is not None:
        out["gold"] = rec.gold
    return out


def read_score_column(path, metric: str) -> dict[str, float]:
    """Map id -> value of ``metric`` from a scores JSONL file."""
    out: dict[str, float] = {}
    for lineno, obj in iter_jsonl(path):
        rid = str(obj.get("id"))
        scores = obj.get("scores", {})
        if metric not in scores:
            raise DataError(f"metric {metric!r} missing", path, lineno)
        if rid in out:
            raise DataError(f"duplicate id {rid!r}", path, lineno)
        out[rid] = float(scores[metric])
    return out


def write_jsonl(path_or_fh, meta: Mapping | None, rows: Iterable[Mapping]) -> None:
    def emit(fh):
        if meta is not None:
            fh.write(dumps({"meta": meta}) + "\n")
        for row in rows:
            fh.write(dumps(row) + "\n")

    if hasattr(path_or_fh, "write"):
        emit(path_or_fh)
    else:
        with open(path_or_fh, "w", encoding="utf-8", newline="\n") as fh:
            emit(fh)


def write_json(path_or_fh, obj: Mapping) -> None:
    text = json.dumps(obj, ensure_ascii=False, indent=2) + "\n"
    if hasattr(path_or_fh, "write"):
        path_or_fh.write(text)
    else:
        Path(path_or_fh).write_text(text, encoding="utf-8")
