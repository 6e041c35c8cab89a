"""End-to-end recovery pipeline: curate candidates, build the m x n variant
library, score every pair against the protected target, and decide which
candidate is the original design."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EmptyLibraryError, NetreconError, TransformError
from .lock import LockConfig, transform
from .netlist import Netlist, extract_features, identify_key_inputs
from .similarity import SimilarityConfig, _canonical_key, match_cutpoints, profile_cutpoints


@dataclass(frozen=True)
class LibraryEntry:
    name: str
    netlist: Netlist
    provenance: str = ""


@dataclass(frozen=True)
class DesignLibrary:
    entries: tuple

    def __post_init__(self):
        names = [e.name for e in self.entries]
        assert len(names) == len(set(names)), "library names must be unique"

    @property
    def names(self):
        return [e.name for e in self.entries]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class AttackConfig:
    lock: LockConfig = LockConfig()
    variants: int = 4
    base_seed: int = 0
    sim: SimilarityConfig = SimilarityConfig()
    aggregate: str = "mean"       # "mean" | "max"
    tie_epsilon: float = 1e-6
    workers: int = 4
    key_pattern: str = "keyinput"


@dataclass
class SimilarityMatrix:
    rows: list                    # candidate names
    cols: list                    # variant seeds
    raw: np.ndarray               # m x n
    normalized: np.ndarray
    aggregates: np.ndarray        # per row, over raw scores


@dataclass
class AttackOutcome:
    verdict: str                  # "recovered" | "ambiguous"
    recovered: str | None
    tied: list
    matrix: SimilarityMatrix
    timing: dict = field(default_factory=dict)

    @property
    def is_recovered(self):
        return self.verdict == "recovered"


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except NetreconError as e:
        raise NetreconError(f"[stage {name}] {e}") from e


def curate_library(td0: Netlist, pool: DesignLibrary) -> DesignLibrary:
    """Keep candidates whose functional (PI, PO) counts match the target's.

    FF counts are deliberately not filtered; mismatched state structure is
    left to the similarity score to penalize.
    """
    feats = extract_features(td0)
    kept = []
    for entry in pool.entries:
        f = extract_features(entry.netlist)
        if (f.pi_count, f.po_count) == (feats.pi_count, feats.po_count):
            kept.append(entry)
    if not kept:
        raise EmptyLibraryError(feats.pi_count, feats.po_count)
    return DesignLibrary(tuple(kept))


def build_td_library(cands: DesignLibrary, cfg: AttackConfig):
    """Entry (i, j): candidate i transformed with seed base_seed + j."""
    lib = []
    for entry in cands.entries:
        row = []
        for j in range(cfg.variants):
            seed = cfg.base_seed + j
            try:
                td, _key = transform(entry.netlist, replace(cfg.lock, seed=seed))
            except NetreconError as e:
                raise TransformError(
                    f"transform failed for ({entry.name}, seed {seed}): {e}"
                ) from e
            td = td.renamed(f"{entry.name}.{cfg.lock.scheme}.s{seed}")
            row.append((seed, td))
        lib.append((entry.name, row))
    return lib


def _pair_overall(profiles_a, key_a, netlist_b, cfg: AttackConfig):
    profiles_b = profile_cutpoints(netlist_b, cfg.sim)
    key_b = _canonical_key(netlist_b)
    if key_b < key_a:
        result = match_cutpoints(profiles_b, profiles_a, cfg.sim.alpha)
    else:
        result = match_cutpoints(profiles_a, profiles_b, cfg.sim.alpha)
    return result.overall


def score_matrix(td0: Netlist, tdlib, cfg: AttackConfig) -> SimilarityMatrix:
    """Raw and min-max-normalized scores of td0 against every library entry.

    Cells are independent work items; results are merged by (i, j) order so
    the matrix is identical regardless of scheduling.
    """
    profiles_0 = profile_cutpoints(td0, cfg.sim)
    key_0 = _canonical_key(td0)
    rows = [name for name, _ in tdlib]
    cols = [seed for seed, _ in tdlib[0][1]] if tdlib else []
    cells = [
        (i, j, td)
        for i, (_, row) in enumerate(tdlib)
        for j, (_, td) in enumerate(row)
    ]
    raw = np.zeros((len(rows), len(cols)))
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as ex:
        scores = ex.map(lambda c: _pair_overall(profiles_0, key_0, c[2], cfg), cells)
        for (i, j, _), s in zip(cells, scores):
            raw[i, j] = s

    lo, hi = raw.min(), raw.max()
    if hi > lo:
        normalized = (raw - lo) / (hi - lo)
    else:
        normalized = np.ones_like(raw)

    if cfg.aggregate == "mean":
        aggregates = raw.mean(axis=1)
    elif cfg.aggregate == "max":
        aggregates = raw.max(axis=1)
    else:
        raise ValueError(f"unknown aggregate: {cfg.aggregate!r}")
    return SimilarityMatrix(rows, cols, raw, normalized, aggregates)


def decide(matrix: SimilarityMatrix, tie_epsilon=1e-6) -> AttackOutcome:
    """Unique aggregate maximum wins; near-ties signal a library update."""
    agg = matrix.aggregates
    order = np.argsort(-agg, kind="stable")
    best = int(order[0])
    tied = [matrix.rows[int(i)] for i in order if agg[best] - agg[int(i)] <= tie_epsilon]
    if len(tied) == 1:
        return AttackOutcome("recovered", matrix.rows[best], tied, matrix)
    return AttackOutcome("ambiguous", None, tied, matrix)


def run_attack(td0: Netlist, pool: DesignLibrary, cfg: AttackConfig) -> AttackOutcome:
    """Full pipeline; deterministic given (td0, pool, cfg)."""
    t0 = time.perf_counter()
    timing = {}
    td0 = _stage("identify-keys", identify_key_inputs, td0, "naming", cfg.key_pattern)
    cands = _stage("curate", curate_library, td0, pool)
    timing["curate_s"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    tdlib = _stage("build-library", build_td_library, cands, cfg)
    timing["build_s"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    matrix = _stage("score", score_matrix, td0, tdlib, cfg)
    timing["score_s"] = time.perf_counter() - t2

    outcome = decide(matrix, cfg.tie_epsilon)
    timing["total_s"] = time.perf_counter() - t0
    outcome.timing = timing
    return outcome


# -- artifacts -------------------------------------------------------------------


def matrix_csv(matrix: SimilarityMatrix, which="raw") -> str:
    data = matrix.raw if which == "raw" else matrix.normalized
    lines = ["design," + ",".join(f"seed{c}" for c in matrix.cols)]
    for name, row in zip(matrix.rows, data):
        lines.append(name + "," + ",".join(f"{v:.6f}" for v in row))
    return "\n".join(lines) + "\n"


def outcome_report(outcome: AttackOutcome) -> str:
    lines = []
    m = outcome.matrix
    for name, agg in zip(m.rows, m.aggregates):
        lines.append(f"aggregate {name} {agg:.6f}")
    for key in sorted(outcome.timing):
        lines.append(f"timing {key} {outcome.timing[key]:.3f}")
    if outcome.is_recovered:
        lines.append(f"RECOVERED {outcome.recovered}")
    else:
        lines.append("AMBIGUOUS " + " ".join(outcome.tied))
    return "\n".join(lines) + "\n"
