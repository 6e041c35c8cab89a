"""Cut-point similarity: per-cut profiles, optimal matching, netlist score.

The score replaces a proprietary equivalence-checker metric with an open
formula: a polarity-tolerant functional term blended with a structural term
built from cone-feature ratios and a gate-kind histogram distance. Scores
live in [0, 1]; unmatched cut-points dilute the overall score toward 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import sim
from .bench import write_bench
from .errors import EmptyCutSetError, SignatureLengthMismatchError
from .netlist import Netlist, fanin_cone


@dataclass(frozen=True)
class SimilarityConfig:
    patterns: int = 4096
    seed: int = 0
    patterns_per_key: int = 256   # one random key assignment per chunk
    alpha: float = 0.5            # functional vs structural blend
    key_mode: str = "sample-random-keys"


@dataclass(frozen=True)
class CutPointProfile:
    cut_id: str                   # "po:<i>" or "ff:<i>"
    cone_gates: int
    cone_depth: int
    support_pi: int
    support_ff: int
    support_key: int
    kind_histogram: dict
    signature: np.ndarray         # packed uint64 words
    patterns: int

    @property
    def support_total(self):
        return self.support_pi + self.support_ff + self.support_key


@dataclass
class MatchResult:
    assignment: list              # (index in A, index in B, pair score)
    unmatched_a: list
    unmatched_b: list
    overall: float


def profile_cutpoints(n: Netlist, cfg: SimilarityConfig = SimilarityConfig()):
    """One profile per PO and per FF data pin; signatures from one shared run."""
    table = sim.signatures(
        n,
        patterns=cfg.patterns,
        seed=cfg.seed,
        key_mode=cfg.key_mode,
        patterns_per_key=cfg.patterns_per_key,
    )
    profiles = []
    for kind, index, _name, cut_net in n.cut_points():
        cone = fanin_cone(n, cut_net)
        profiles.append(
            CutPointProfile(
                cut_id=f"{kind}:{index}",
                cone_gates=cone.gate_count,
                cone_depth=cone.depth,
                support_pi=len(cone.support_pi),
                support_ff=len(cone.support_ff),
                support_key=len(cone.support_key),
                kind_histogram=cone.kind_histogram,
                signature=table.bits(cut_net),
                patterns=cfg.patterns,
            )
        )
    return profiles


def _ratio(x, y):
    if x == y:
        return 1.0
    return min(x, y) / max(x, y)


def pair_similarity(p: CutPointProfile, q: CutPointProfile, alpha=0.5) -> float:
    """alpha * functional + (1 - alpha) * structural, both in [0, 1].

    functional = max(a, 1 - a) with a the fraction of equal signature bits,
    so an inverted-polarity twin still scores 1. structural multiplies the
    min/max ratios of cone size, depth, and support width by a histogram
    overlap factor (1 - L1/2).
    """
    if p.patterns != q.patterns:
        raise SignatureLengthMismatchError(p.patterns, q.patterns)
    diff = int(np.bitwise_count(p.signature ^ q.signature).sum())
    agreement = 1.0 - diff / p.patterns
    func = max(agreement, 1.0 - agreement)

    struct = (
        _ratio(p.cone_gates, q.cone_gates)
        * _ratio(p.cone_depth, q.cone_depth)
        * _ratio(p.support_total, q.support_total)
    )
    keys = set(p.kind_histogram) | set(q.kind_histogram)
    l1 = sum(abs(p.kind_histogram.get(k, 0.0) - q.kind_histogram.get(k, 0.0)) for k in keys)
    struct *= 1.0 - 0.5 * l1
    return alpha * func + (1.0 - alpha) * struct


def score_table(profiles_a, profiles_b, alpha=0.5) -> np.ndarray:
    m, n = len(profiles_a), len(profiles_b)
    s = np.empty((m, n))
    for i, p in enumerate(profiles_a):
        for j, q in enumerate(profiles_b):
            s[i, j] = pair_similarity(p, q, alpha)
    return s


def match_cutpoints(profiles_a, profiles_b, alpha=0.5) -> MatchResult:
    """Maximum-total-score assignment; overall = sum / max(|A|, |B|)."""
    if not profiles_a or not profiles_b:
        raise EmptyCutSetError()
    s = score_table(profiles_a, profiles_b, alpha)
    rows, cols = linear_sum_assignment(s, maximize=True)
    pairs = sorted(zip(rows.tolist(), cols.tolist()))
    assignment = [(i, j, float(s[i, j])) for i, j in pairs]
    matched_a = {i for i, _, _ in assignment}
    matched_b = {j for _, j, _ in assignment}
    total = math.fsum(sorted(score for _, _, score in assignment))
    overall = total / max(len(profiles_a), len(profiles_b))
    return MatchResult(
        assignment=assignment,
        unmatched_a=[i for i in range(len(profiles_a)) if i not in matched_a],
        unmatched_b=[j for j in range(len(profiles_b)) if j not in matched_b],
        overall=overall,
    )


def _canonical_key(n: Netlist):
    return (len(n.gates), len(n.inputs), write_bench(n))


def netlist_similarity(a: Netlist, b: Netlist, cfg: SimilarityConfig = SimilarityConfig()) -> float:
    """Overall cut-point similarity in [0, 1]; exactly symmetric in (a, b)."""
    if _canonical_key(b) < _canonical_key(a):
        a, b = b, a
    return match_cutpoints(
        profile_cutpoints(a, cfg), profile_cutpoints(b, cfg), cfg.alpha
    ).overall
