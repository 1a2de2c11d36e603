"""Command-line interface: ``qmetric {score,perturb,tune,correlate,normalize}``.

Exit status is 0 on success, 1 for usage errors and 2 for data errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .answerability import WeightConfig, match_counts
from .errors import DataError, InvalidParameterError, QMetricError, UndefinedResultError
from .io import (
    judgment_to_dict,
    read_judgments,
    read_pairs,
    read_questions,
    read_score_column,
    write_json,
    write_jsonl,
)
from .metrics import InfoModel
from .perturb import DropMode, NoiseKind, RngState, perturb
from .scoring import Scorer, parse_metric
from .stats import agreement, correlate, normalize_scores
from .text import classify_tokens, load_lexicon, tokenize
from .tuning import TuneConfig, tune_weights

log = logging.getLogger("qmetric")

EXIT_USAGE = 1
EXIT_DATA = 2

# flags that never change the output bytes
_VOLATILE_FLAGS = {"workers", "out", "func", "verbose"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _meta(command: str, args, lexicon, seed=None) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in _VOLATILE_FLAGS}
    return {
        "tool": "qmetric",
        "version": __version__,
        "command": command,
        "seed": seed,
        "lexicon_sha256": lexicon.digest() if lexicon is not None else None,
        "flags": flags,
    }


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


# ---------------------------------------------------------------- score

_WORKER_SCORER = None


def _init_worker(scorer):
    global _WORKER_SCORER
    _WORKER_SCORER = scorer


def _score_one(pair):
    return _WORKER_SCORER.score(pair.id, pair.hypothesis, pair.references)


def _build_info(args, pairs, lexicon):
    if args.info_corpus:
        return InfoModel.from_file(args.info_corpus)
    sents = [
        [t.lower() for t in tokenize(ref).tokens]
        for p in pairs
        for ref in p.references
    ]
    return InfoModel.from_corpus(sents)


def _load_weights(paths):
    if not paths:
        return None
    out = {}
    for p in paths:
        wc = WeightConfig.load(p)
        out[wc.base_metric] = wc
    return out


def cmd_score(args) -> int:
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    for m in metrics:
        try:
            parse_metric(m)
        except InvalidParameterError as exc:
            raise UsageError(str(exc)) from None
    lexicon = load_lexicon(args.lexicon)
    pairs = read_pairs(args.pairs)
    if not pairs:
        raise DataError("no records", args.pairs)
    needs_nist = any(parse_metric(m)[0] == "nist" for m in metrics)
    info = _build_info(args, pairs, lexicon) if needs_nist else None
    try:
        scorer = Scorer(
            metrics,
            _load_weights(args.weights),
            lexicon,
            info,
            rouge_beta=args.rouge_beta,
            use_stems=args.stem_match,
        )
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from None

    if args.workers > 1:
        with ProcessPoolExecutor(args.workers, initializer=_init_worker, initargs=(scorer,)) as ex:
            rows = list(ex.map(_score_one, pairs, chunksize=max(1, len(pairs) // (args.workers * 4))))
    else:
        rows = [scorer.score(p.id, p.hypothesis, p.references) for p in pairs]
    summary = scorer.summary(rows)

    fh, close = _open_out(args.out)
    try:
        if args.format == "tsv":
            _write_tsv(fh, _meta("score", args, lexicon), metrics, rows, summary, args.components)
        else:
            write_jsonl(
                fh,
                _meta("score", args, lexicon),
                [r.to_dict(args.components) for r in rows] + [{"summary": summary}],
            )
    finally:
        if close:
            fh.close()
    return 0


def _write_tsv(fh, meta, metrics, rows, summary, components):
    import json

    cols = ["id"] + metrics + (["p_avg", "r_avg", "answerability"] if components else [])
    table = [cols]
    for r in rows:
        d = r.to_dict(components)
        line = [r.id] + [f"{r.scores[m]:.6f}" for m in metrics]
        if components:
            line += [f"{d[k]:.6f}" if k in d else "" for k in ("p_avg", "r_avg", "answerability")]
        table.append(line)
    table.append(["#corpus"] + [f"{summary[m]:.6f}" for m in metrics] + ([""] * 3 if components else []))
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    fh.write("# meta: " + json.dumps(meta, ensure_ascii=False) + "\n")
    for row in table:
        fh.write("\t".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n")


# ---------------------------------------------------------------- perturb

def cmd_perturb(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    kind = NoiseKind(args.noise)
    mode = DropMode(args.mode)
    rows = []
    noops = 0
    for rid, question, extra in read_questions(args.input):
        q = classify_tokens(tokenize(question), lexicon)
        res = perturb(q, kind, RngState.for_record(args.seed, rid), mode, lexicon)
        noops += res.noop
        row = {
            "id": rid,
            "hypothesis": res.text(),
            "references": [question],
            "noise": kind.value,
            "noop": res.noop,
        }
        for k in sorted(extra):
            row.setdefault(k, extra[k])
        rows.append(row)
    if noops:
        log.warning("%d of %d questions had no %s to perturb", noops, len(rows), kind.value)
    fh, close = _open_out(args.out)
    try:
        write_jsonl(fh, _meta("perturb", args, lexicon, args.seed), rows)
    finally:
        if close:
            fh.close()
    return 0


# ---------------------------------------------------------------- tune

def cmd_tune(args) -> int:
    base, q = parse_metric(args.metric)
    if q:
        raise UsageError("--metric names the base metric, e.g. bleu1")
    lexicon = load_lexicon(args.lexicon)
    records = read_judgments(args.judgments, args.format)
    if any(r.gold is None for r in records):
        records = normalize_scores(records)
    cfg = TuneConfig(args.pool, args.bag, args.bags, args.grid, seed=args.seed, base_metric=base)
    pairs_info = None
    if base == "nist":
        sents = [[t.lower() for t in tokenize(r.reference).tokens] for r in records]
        pairs_info = InfoModel.from_file(args.info_corpus) if args.info_corpus else InfoModel.from_corpus(sents)
    scorer = Scorer([base], lexicon=lexicon, info=pairs_info)
    base_scores, counts = [], []
    for r in records:
        row = scorer.score(r.id, r.noisy, [r.reference])
        value = scorer.unit_base(base, row.scores[base], [[t.lower() for t in tokenize(r.reference).tokens]])
        base_scores.append(value)
        counts.append(match_counts(scorer.classify(r.noisy), scorer.classify(r.reference), args.stem_match))
    result = tune_weights([r.gold for r in records], base_scores, counts, cfg)
    out = result.config.to_dict()
    out["std"] = result.std
    out["bag_correlations"] = list(result.bag_correlations)
    out["meta"] = _meta("tune", args, lexicon, args.seed)
    fh, close = _open_out(args.out)
    try:
        write_json(fh, out)
    finally:
        if close:
            fh.close()
    return 0


# ---------------------------------------------------------------- correlate

def cmd_correlate(args) -> int:
    scores = read_score_column(args.scores, args.metric)
    records = read_judgments(args.gold, args.format)
    if any(r.gold is None for r in records):
        records = normalize_scores(records)
    gold = {r.id: r.gold for r in records}
    if set(scores) != set(gold):
        missing = sorted(set(scores) ^ set(gold))[:5]
        raise DataError(f"ids differ between score and gold files, e.g. {missing}")
    ids = [r.id for r in records]
    report = correlate([scores[i] for i in ids], [gold[i] for i in ids], args.permutations, args.seed, args.alpha)
    out = report.to_dict()
    out["metric"] = args.metric
    out["meta"] = _meta("correlate", args, None, args.seed)
    fh, close = _open_out(args.out)
    try:
        write_json(fh, out)
    finally:
        if close:
            fh.close()
    return 0


# ---------------------------------------------------------------- normalize

def cmd_normalize(args) -> int:
    records = normalize_scores(read_judgments(args.judgments, args.format))
    meta = _meta("normalize", args, None)
    if args.agreement:
        meta["agreement"] = agreement(records)
    fh, close = _open_out(args.out)
    try:
        write_jsonl(fh, meta, [judgment_to_dict(r) for r in records])
    finally:
        if close:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmetric", description="Answerability-aware scoring of generated questions.")
    p.add_argument("--version", action="version", version=f"qmetric {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("score", help="score hypothesis questions against references")
    s.add_argument("pairs", help="JSONL with id, hypothesis, references")
    s.add_argument("--metrics", default="bleu4", help="comma-separated, e.g. bleu4,q-bleu1,rouge-l")
    s.add_argument("--weights", action="append", help="weight file for a q- metric (repeatable)")
    s.add_argument("--lexicon", help="function-word file replacing the bundled list")
    s.add_argument("--info-corpus", help="plain-text corpus for NIST n-gram information")
    s.add_argument("--rouge-beta", type=float, default=1.2)
    s.add_argument("--stem-match", action="store_true", help="match answerability tokens on Porter stems")
    s.add_argument("--format", choices=["jsonl", "tsv"], default="jsonl")
    s.add_argument("--components", action="store_true", help="include p_avg, r_avg and answerability")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("perturb", help="add systematic noise to clean questions")
    s.add_argument("input", help="JSONL with id, question")
    s.add_argument("--noise", required=True, choices=[k.value for k in NoiseKind])
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--mode", choices=[m.value for m in DropMode], default=DropMode.UNIFORM_K.value)
    s.add_argument("--lexicon")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("tune", help="fit Q-Metric weights to human judgments")
    s.add_argument("judgments")
    s.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    s.add_argument("--pool", type=int, default=300)
    s.add_argument("--bag", type=int, default=200)
    s.add_argument("--bags", type=int, default=20)
    s.add_argument("--grid", type=float, default=0.05)
    s.add_argument("--metric", default="bleu1")
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--lexicon")
    s.add_argument("--info-corpus")
    s.add_argument("--stem-match", action="store_true")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_tune)

    s = sub.add_parser("correlate", help="correlate a score column with gold judgments")
    s.add_argument("--scores", required=True)
    s.add_argument("--metric", required=True)
    s.add_argument("--gold", required=True, help="judgment file")
    s.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    s.add_argument("--permutations", type=int, default=10_000)
    s.add_argument("--alpha", type=float, default=0.01)
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_correlate)

    s = sub.add_parser("normalize", help="fill gold scores from raw ratings")
    s.add_argument("judgments")
    s.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    s.add_argument("--agreement", action="store_true", help="add kappa/Pearson/Spearman between raters to meta")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_normalize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qmetric: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, InvalidParameterError, UndefinedResultError, QMetricError, OSError) as exc:
        print(f"qmetric: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
