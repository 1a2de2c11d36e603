"""METEOR with exact and Porter-stem matching stages.

Alignment is staged: as many exact matches as possible, then as many stem
matches as possible among the rest, then (only when a synonym table is
given) synonym matches. Among all alignments reaching those stage maxima the
one with the fewest chunks is chosen.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import InvalidParameterError
from ..porter import stem

# Above this many memoised search states fall back to a greedy alignment.
MAX_SEARCH_STATES = 20_000

STAGES = ("exact", "stem", "synonym")


class SynonymTable:
    """Synonym classes built from word pairs, merged at the stem level.

    Merging on stems keeps the synonym partition coarser than the stem
    partition, which the staged alignment relies on.
    """

    def __init__(self, pairs):
        parent: dict[str, str] = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in pairs:
            ra, rb = find(stem(a.lower())), find(stem(b.lower()))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        self._classes = {s: find(s) for s in list(parent)}

    def key(self, word: str) -> str:
        s = stem(word)
        return self._classes.get(s, s)

    @classmethod
    def from_file(cls, path) -> "SynonymTable":
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or not all(p.strip() for p in parts):
                    raise InvalidParameterError(f"{path}:{lineno}: expected two tab-separated words")
                pairs.append((parts[0].strip(), parts[1].strip()))
        return cls(pairs)


@dataclass(frozen=True)
class MeteorParams:
    alpha: float = 0.9
    gamma: float = 0.5
    beta_frag: float = 3.0
    matcher_weights: Mapping[str, float] = field(
        default_factory=lambda: {"exact": 1.0, "stem": 1.0, "synonym": 1.0}
    )
    synonyms: SynonymTable | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise InvalidParameterError("alpha must lie in (0, 1)")
        if not 0 <= self.gamma <= 1:
            raise InvalidParameterError("gamma must lie in [0, 1]")
        if not (self.beta_frag > 0 and math.isfinite(self.beta_frag)):
            raise InvalidParameterError("beta_frag must be positive and finite")
        for k, v in self.matcher_weights.items():
            if k not in STAGES:
                raise InvalidParameterError(f"unknown matcher stage {k!r}")
            if not (0 <= v <= 1):
                raise InvalidParameterError(f"matcher weight for {k!r} must lie in [0, 1]")


@dataclass(frozen=True)
class Alignment:
    pairs: tuple[tuple[int, int, int], ...]  # (hyp index, ref index, stage)
    chunks: int

    @property
    def matches(self) -> int:
        return len(self.pairs)


def _stage_keys(tokens, synonyms):
    keys = [tuple(tokens), tuple(stem(t) for t in tokens)]
    if synonyms is not None:
        keys.append(tuple(synonyms.key(t) for t in tokens))
    return keys


def _stage_targets(hyp_keys, ref_keys):
    # cumulative maximum matches up to each stage; valid because the key
    # partitions are nested (exact within stem within synonym)
    out = []
    for hk, rk in zip(hyp_keys, ref_keys):
        h, r = Counter(hk), Counter(rk)
        out.append(sum(min(c, r[k]) for k, c in h.items()))
    return tuple(out)


def _count_chunks(pairs) -> int:
    chunks = 0
    prev = None
    for i, j, _ in sorted(pairs):
        if prev is None or not (i == prev[0] + 1 and j == prev[1] + 1):
            chunks += 1
        prev = (i, j)
    return chunks


def align(hyp: Sequence[str], ref: Sequence[str], synonyms: SynonymTable | None = None) -> Alignment:
    hyp = [t.lower() for t in hyp]
    ref = [t.lower() for t in ref]
    hk = _stage_keys(hyp, synonyms)
    rk = _stage_keys(ref, synonyms)
    n_stages = len(hk)
    targets = _stage_targets(hk, rk)
    if targets[-1] == 0:
        return Alignment((), 0)

    # stage[i][j]: first stage at which hyp i and ref j match, or -1
    stage = [
        [next((s for s in range(n_stages) if hk[s][i] == rk[s][j]), -1) for j in range(len(ref))]
        for i in range(len(hyp))
    ]
    # suffix key counts of the hypothesis and per-key reference bitmasks for
    # the feasibility bound
    suffix = [[Counter(hk[s][i:]) for s in range(n_stages)] for i in range(len(hyp) + 1)]
    key_bits = []
    for s in range(n_stages):
        bits: dict = {}
        for j, k in enumerate(rk[s]):
            bits[k] = bits.get(k, 0) | (1 << j)
        key_bits.append(bits)

    def feasible(i, mask, counts):
        free = ~mask
        for s in range(n_stages):
            bits = key_bits[s]
            bound = 0
            for k, c in suffix[i][s].items():
                b = bits.get(k)
                if b:
                    bound += min(c, bin(b & free).count("1"))
            if counts[s] + bound < targets[s]:
                return False
        return True

    memo: dict = {}
    budget = [MAX_SEARCH_STATES]

    def search(i, mask, prev_j, counts):
        # returns (chunks, pairs) or None when targets cannot be met
        if i == len(hyp):
            return (0, ()) if counts == targets else None
        key = (i, mask, prev_j, counts)
        if key in memo:
            return memo[key]
        budget[0] -= 1
        if budget[0] < 0:
            raise _BudgetExceeded
        best = None
        cand = [j for j in range(len(ref)) if stage[i][j] >= 0 and not mask >> j & 1]
        cand.sort(key=lambda j: (j != prev_j + 1, j))
        options = [(j, stage[i][j]) for j in cand] + [(None, None)]
        for j, s in options:
            if j is None:
                new_counts, new_mask, new_prev = counts, mask, -2
            else:
                new_counts = tuple(c + (1 if k >= s else 0) for k, c in enumerate(counts))
                if any(c > t for c, t in zip(new_counts, targets)):
                    continue
                new_mask, new_prev = mask | (1 << j), j
            if not feasible(i + 1, new_mask, new_counts):
                continue
            sub = search(i + 1, new_mask, new_prev, new_counts)
            if sub is None:
                continue
            extra = 0 if j is None or j == prev_j + 1 else 1
            total = sub[0] + extra
            if best is None or total < best[0]:
                pairs = sub[1] if j is None else ((i, j, s),) + sub[1]
                best = (total, pairs)
        memo[key] = best
        return best

    try:
        result = search(0, 0, -2, (0,) * n_stages)
    except _BudgetExceeded:
        result = None
    if result is None:
        pairs = _greedy_align(hyp, ref, hk, rk)
        return Alignment(pairs, _count_chunks(pairs))
    return Alignment(result[1], result[0])


class _BudgetExceeded(Exception):
    pass


def _greedy_align(hyp, ref, hk, rk):
    used_h, used_r, pairs = set(), set(), []
    for s in range(len(hk)):
        prev = -2
        for i in range(len(hyp)):
            if i in used_h:
                continue
            js = [j for j in range(len(ref)) if j not in used_r and hk[s][i] == rk[s][j]]
            if not js:
                continue
            j = prev + 1 if prev + 1 in js else js[0]
            used_h.add(i)
            used_r.add(j)
            pairs.append((i, j, s))
            prev = j
    return tuple(sorted(pairs))


def meteor(hyp: Sequence[str], ref: Sequence[str], params: MeteorParams | None = None) -> float:
    params = params or MeteorParams()
    if not hyp or not ref:
        return 0.0
    al = align(hyp, ref, params.synonyms)
    m = al.matches
    if m == 0:
        return 0.0
    weighted = sum(params.matcher_weights.get(STAGES[s], 1.0) for _, _, s in al.pairs)
    p = weighted / len(hyp)
    r = weighted / len(ref)
    if p == 0 or r == 0:
        return 0.0
    a = params.alpha
    f = p * r / (a * p + (1 - a) * r)
    penalty = params.gamma * (al.chunks / m) ** params.beta_frag
    return f * (1 - penalty)


def meteor_multi(hyp: Sequence[str], refs: Sequence[Sequence[str]], params: MeteorParams | None = None) -> float:
    return max(meteor(hyp, r, params) for r in refs)
