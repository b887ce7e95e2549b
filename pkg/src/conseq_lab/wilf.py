"""Empirical c-Wilf classification and the structural conditions around it.

Two patterns are c-Wilf-equivalent when their avoidance counts agree at
every length (and, for words, every alphabet size); "strong" asks for
agreement at every occurrence count.  Only finite prefixes of those
sequences can be computed, so :func:`classify` returns a *candidate*
partition at a stated depth: deeper data can split blocks, never merge
them.
"""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .core import (Pattern, all_patterns, complement, is_nonoverlapping,
                   is_standard_form, overlap_set, reverse)
from .enumeration import PERMS, WORDS, dp_perm_counts, dp_word_counts


def khor_condition(v, w) -> bool:
    """Equal overlap sets, and for each overlap i equal first d-i and last d-i value sets."""
    v, w = Pattern.parse(v), Pattern.parse(w)
    if v.d != w.d:
        raise ValueError(f"length mismatch: {v.d} vs {w.d}")
    ov = overlap_set(v)
    if ov != overlap_set(w):
        return False
    d, a, b = v.d, v.entries, w.entries
    return all(set(a[:d - i]) == set(b[:d - i]) and set(a[i:]) == set(b[i:]) for i in ov)


def signature(v, universe: str = PERMS, n_max: int = 8, r_max: int = 0,
              k_max: int = 5) -> tuple:
    """Count rows g_0..g_{r_max} (plus overflow) for n = 1..n_max, per alphabet for words."""
    v = Pattern.parse(v)
    if universe == PERMS:
        t = dp_perm_counts(v, n_max, r_max)
        return tuple(tuple(t.rows[n]) for n in range(1, n_max + 1))
    if universe == WORDS:
        out = []
        for k in range(1, k_max + 1):
            t = dp_word_counts(v, k, n_max, r_max)
            out.append(tuple(tuple(t.rows[n]) for n in range(1, n_max + 1)))
        return tuple(out)
    raise ValueError(f"unknown universe {universe!r}")


def _signature_job(job) -> tuple:
    return signature(*job)


def _hash(sig) -> str:
    return hashlib.sha256(json.dumps(sig).encode()).hexdigest()[:16]


@dataclass
class WilfPartition:
    d: int
    universe: str
    n_max: int
    r_max: int
    k_max: int | None
    blocks: list[list[Pattern]]
    hashes: list[str]

    @property
    def label(self) -> str:
        depth = f"n_max={self.n_max}, r_max={self.r_max}"
        if self.k_max is not None:
            depth += f", k_max={self.k_max}"
        return f"candidate partition at depth ({depth})"

    def block_of(self, v) -> int:
        v = Pattern.parse(v)
        return next(i for i, b in enumerate(self.blocks) if v in b)

    def same_block(self, v, w) -> bool:
        return self.block_of(v) == self.block_of(w)

    def to_json_obj(self) -> dict:
        depth = {"n_max": self.n_max, "r_max": self.r_max}
        if self.k_max is not None:
            depth["k_max"] = self.k_max
        return {"d": self.d, "universe": self.universe, "depth": depth, "label": self.label,
                "blocks": [[str(v) for v in b] for b in self.blocks],
                "signature_hash_per_block": self.hashes}


def classify(d: int, universe: str = PERMS, n_max: int = 8, r_max: int = 0,
             k_max: int = 5, patterns=None, workers: int = 1) -> WilfPartition:
    """Group patterns of length ``d`` by equal count signatures.

    With ``workers > 1`` signatures are computed in a process pool; results
    are merged in input order, so the partition does not depend on timing.
    """
    pats = [Pattern.parse(v) for v in (patterns or all_patterns(d))]
    args = (universe, n_max, r_max, k_max)
    if workers > 1 and len(pats) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            sigs = list(pool.map(_signature_job, [(v,) + args for v in pats]))
    else:
        sigs = [signature(v, *args) for v in pats]
    groups: dict[tuple, list[Pattern]] = {}
    for v, sig in zip(pats, sigs):
        groups.setdefault(sig, []).append(v)
    items = sorted(((sorted(b), sig) for sig, b in groups.items()), key=lambda t: t[0][0])
    return WilfPartition(d, universe, n_max, r_max, k_max if universe == WORDS else None,
                         [b for b, _ in items], [_hash(sig) for _, sig in items])


def closed_under(partition: WilfPartition, op) -> bool:
    return all(partition.same_block(v, op(v)) for b in partition.blocks for v in b)


@dataclass
class SufficiencyReport:
    d: int
    pairs: list[tuple[str, str]]
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_obj(self) -> dict:
        return {"d": self.d, "khor_pairs": [list(p) for p in self.pairs],
                "violations": self.violations}


def check_sufficiency(d: int, n_max: int = 8, r_max: int = 2, k_max: int = 5) -> SufficiencyReport:
    """Every khor pair, and every (v, reverse v), must share a block in both universes."""
    parts = {PERMS: classify(d, PERMS, n_max, r_max),
             WORDS: classify(d, WORDS, n_max, r_max, k_max)}
    pats = all_patterns(d)
    pairs = [(v, w) for v, w in combinations(pats, 2) if khor_condition(v, w)]
    rev = [(v, reverse(v)) for v in pats if v < reverse(v)]
    rep = SufficiencyReport(d, [(str(v), str(w)) for v, w in pairs])
    for universe, part in parts.items():
        for v, w in pairs + rev:
            if not part.same_block(v, w):
                rep.violations.append({"universe": universe, "pair": [str(v), str(w)],
                                       "khor": khor_condition(v, w)})
    return rep


def nonoverlapping_signature_check(d: int, n_max: int = 8) -> dict:
    """Among standard-form non-overlapping patterns, blocks should match (v_1, v_d) classes."""
    if d < 3:
        raise ValueError("classification undefined for d<3")
    pats = [v for v in all_patterns(d) if is_nonoverlapping(v) and is_standard_form(v)]
    part = classify(d, PERMS, n_max, 0, patterns=pats)
    ends: dict[tuple[int, int], list[Pattern]] = {}
    for v in pats:
        ends.setdefault((v.entries[0], v.entries[-1]), []).append(v)
    split = [[str(v) for v in grp] for grp in ends.values()
             if len({part.block_of(v) for v in grp}) > 1]
    mixed = [[str(v) for v in b] for b in part.blocks
             if len({(v.entries[0], v.entries[-1]) for v in b}) > 1]
    return {"d": d, "n_max": n_max, "patterns": [str(v) for v in pats],
            "end_classes": {f"{a},{b}": [str(v) for v in grp] for (a, b), grp in ends.items()},
            "blocks": [[str(v) for v in b] for b in part.blocks],
            "equal_ends_split": split, "blocks_with_mixed_ends": mixed,
            "consistent": not split and not mixed}


def strong_from_plain_check(d: int, n_max: int = 8, r_max: int = 2) -> dict:
    """Non-overlapping patterns that agree at r = 0 should agree at every r <= r_max."""
    pats = [v for v in all_patterns(d) if is_nonoverlapping(v)]
    plain = classify(d, PERMS, n_max, 0, patterns=pats)
    strong = classify(d, PERMS, n_max, r_max, patterns=pats)
    bad = [[str(v) for v in b] for b in plain.blocks
           if len({strong.block_of(v) for v in b}) > 1]
    return {"d": d, "n_max": n_max, "r_max": r_max, "split_blocks": bad, "consistent": not bad}


def known_classes(d: int) -> list[list[Pattern]]:
    """Classes generated by reverse, complement and the khor condition."""
    pats = all_patterns(d)
    parent = {v: v for v in pats}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def join(a, b):
        parent[find(a)] = find(b)

    for v in pats:
        join(v, reverse(v))
        join(v, complement(v))
    for v, w in combinations(pats, 2):
        if khor_condition(v, w):
            join(v, w)
    classes: dict[Pattern, list[Pattern]] = {}
    for v in pats:
        classes.setdefault(find(v), []).append(v)
    return sorted((sorted(c) for c in classes.values()), key=lambda c: c[0])


def converse_candidates(d: int, n_max: int = 8, r_max: int = 0) -> list[tuple[str, str]]:
    """Pairs sharing a permutation block but not linked by symmetry or khor pairs.

    Found pairs are candidates only: the block is a finite-depth signature
    match, not a proof of equivalence.
    """
    part = classify(d, PERMS, n_max, r_max)
    cls = {v: i for i, c in enumerate(known_classes(d)) for v in c}
    out = []
    for b in part.blocks:
        for v, w in combinations(b, 2):
            if cls[v] != cls[w]:
                out.append((str(v), str(w)))
    return out


def nonoverlapping_fraction(d: int) -> Fraction:
    """Share of S_d made of non-overlapping patterns."""
    pats = all_patterns(d)
    return Fraction(sum(1 for v in pats if is_nonoverlapping(v)), len(pats))
