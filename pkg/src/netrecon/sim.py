"""Bit-parallel combinational-frame simulation and the equivalence oracle.

Sequential designs are handled in the scan model: FF outputs are pseudo
primary inputs, FF data pins pseudo primary outputs. All values are numpy
uint64 words carrying 64 patterns per word.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ExhaustiveTooLargeError,
    InterfaceMismatchError,
    MissingAssignmentError,
)
from .netlist import Netlist

WORD = 64
_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)

# lane patterns for the 6 lowest exhaustive enumeration bits
_LANES = [
    np.uint64(0xAAAAAAAAAAAAAAAA),
    np.uint64(0xCCCCCCCCCCCCCCCC),
    np.uint64(0xF0F0F0F0F0F0F0F0),
    np.uint64(0xFF00FF00FF00FF00),
    np.uint64(0xFFFF0000FFFF0000),
    np.uint64(0xFFFFFFFF00000000),
]

EXHAUSTIVE_LIMIT = 24


def evaluate(n: Netlist, assign: dict) -> dict:
    """Evaluate all nets given word arrays for every frame input.

    `assign` maps functional PIs, FF outputs, and key inputs to uint64
    arrays of equal length. Returns a dict with values for every net.
    """
    values = {}
    for name in list(n.functional_inputs) + list(n.ff_outputs) + sorted(n.key_inputs):
        if name not in assign:
            raise MissingAssignmentError(name)
        values[name] = np.asarray(assign[name], dtype=np.uint64)

    for g in n.topo_gates:
        ins = [values[p] for p in g.inputs]
        kind = g.kind
        if kind == "AND" or kind == "NAND":
            v = ins[0] & ins[1]
            for x in ins[2:]:
                v = v & x
            values[g.output] = ~v if kind == "NAND" else v
        elif kind == "OR" or kind == "NOR":
            v = ins[0] | ins[1]
            for x in ins[2:]:
                v = v | x
            values[g.output] = ~v if kind == "NOR" else v
        elif kind == "XOR":
            values[g.output] = ins[0] ^ ins[1]
        elif kind == "XNOR":
            values[g.output] = ~(ins[0] ^ ins[1])
        elif kind == "NOT":
            values[g.output] = ~ins[0]
        elif kind == "BUF":
            values[g.output] = ins[0]
        else:  # LUT
            w = g.lut_width
            data, cfg = ins[:w], ins[w:]
            ndata = [~d for d in data]
            out = np.zeros_like(data[0])
            for idx in range(1 << w):
                row = cfg[idx]
                for j in range(w):
                    row = row & (data[j] if (idx >> j) & 1 else ndata[j])
                out = out | row
            values[g.output] = out
    return values


def simulate(n: Netlist, frame: dict) -> dict:
    """Frame outputs only: {("po", name): words} and {("ff", ff_output): words}."""
    values = evaluate(n, frame)
    out = {("po", name): values[name] for name in n.outputs}
    for g in n.ff_gates:
        out[("ff", g.output)] = values[g.inputs[0]]
    return out


# -- canonical frame-input ordering ------------------------------------------


def structural_labels(n: Netlist, rounds=12) -> dict:
    """Name-independent structural label per net (WL-style refinement).

    Labels depend only on gate kinds, pin positions, and PO membership, so
    they are invariant under net renaming and gate reordering.
    """
    nodes = list(n.inputs) + [g.output for g in n.gates]
    base = {}
    for x in n.inputs:
        base[x] = "key" if x in n.key_inputs else "pi"
    for g in n.gates:
        base[g.output] = g.kind_label()
    po_set = set(n.outputs)
    fanin = {v: [] for v in nodes}
    fanout = {v: [] for v in nodes}
    for g in n.gates:
        for i, p in enumerate(g.inputs):
            fanin[g.output].append((i, p))
            fanout[p].append((i, g.output))

    def digest(s):
        return hashlib.blake2b(s.encode(), digest_size=8).hexdigest()

    cur = {v: digest(base[v] + ("|po" if v in po_set else "")) for v in nodes}
    for _ in range(rounds):
        nxt = {}
        for v in nodes:
            parts = [cur[v], "<"]
            parts += sorted(f"{i}:{cur[p]}" for i, p in fanin[v])
            parts.append(">")
            parts += sorted(f"{i}:{cur[q]}" for i, q in fanout[v])
            nxt[v] = digest("|".join(parts))
        if len(set(nxt.values())) == len(set(cur.values())):
            cur = nxt
            break
        cur = nxt
    return cur


def canonical_frame_order(n: Netlist):
    """Frame inputs ordered by structural label: (data inputs, key inputs).

    Declared list position breaks label ties, so the order is stable; on
    designs where labels are unique it is fully rename/reorder invariant.
    """
    labels = structural_labels(n)
    pis = sorted(n.functional_inputs, key=lambda x: (labels[x], n.inputs.index(x)))
    ffs = sorted(
        n.ff_outputs, key=lambda x: (labels[x], [g.output for g in n.ff_gates].index(x))
    )
    keys = sorted(
        (x for x in n.inputs if x in n.key_inputs),
        key=lambda x: (labels[x], n.inputs.index(x)),
    )
    return pis + ffs, keys


# -- signatures ---------------------------------------------------------------


@dataclass
class SignatureTable:
    values: dict            # net -> uint64 word array
    patterns: int
    seed: int
    key_mode: str

    def bits(self, net):
        return self.values[net]


def signatures(
    n: Netlist,
    patterns=4096,
    seed=0,
    key_mode="sample-random-keys",
    patterns_per_key=256,
) -> SignatureTable:
    """Per-net signatures over seeded random frames.

    Patterns are generated in fixed 'patterns_per_key'-sized chunks with
    chunk-local RNG streams, so a longer run extends a shorter one bit for
    bit. In sample-random-keys mode each chunk holds one random constant key
    assignment; in keys-as-inputs mode key bits vary per pattern.
    """
    if patterns % WORD or patterns % patterns_per_key or patterns_per_key % WORD:
        raise ValueError("patterns must be a multiple of patterns_per_key and 64")
    data_inputs, key_inputs = canonical_frame_order(n)
    nw = patterns // WORD
    cw = patterns_per_key // WORD
    arrays = {x: np.empty(nw, dtype=np.uint64) for x in data_inputs + key_inputs}
    for c in range(patterns // patterns_per_key):
        rng = np.random.default_rng(np.random.SeedSequence([seed, c]))
        sl = slice(c * cw, (c + 1) * cw)
        if data_inputs:
            block = rng.integers(0, _FULL, size=(len(data_inputs), cw),
                                 dtype=np.uint64, endpoint=True)
            for i, x in enumerate(data_inputs):
                arrays[x][sl] = block[i]
        if key_inputs:
            if key_mode == "sample-random-keys":
                bits = rng.integers(0, 2, size=len(key_inputs))
                for i, x in enumerate(key_inputs):
                    arrays[x][sl] = _FULL if bits[i] else np.uint64(0)
            elif key_mode == "keys-as-inputs":
                kblock = rng.integers(0, _FULL, size=(len(key_inputs), cw),
                                      dtype=np.uint64, endpoint=True)
                for i, x in enumerate(key_inputs):
                    arrays[x][sl] = kblock[i]
            else:
                raise ValueError(f"unknown key mode: {key_mode!r}")
    values = evaluate(n, arrays)
    return SignatureTable(values, patterns, seed, key_mode)


# -- equivalence oracle --------------------------------------------------------


@dataclass
class EquivalenceResult:
    equivalent: bool
    mode: str
    patterns: int
    counterexample: dict | None = None
    failing_output: str | None = None

    def __bool__(self):
        return self.equivalent


def _check_interfaces(a: Netlist, b: Netlist):
    if a.key_inputs or b.key_inputs:
        raise InterfaceMismatchError("unresolved key inputs", a.key_inputs, b.key_inputs)
    if set(a.functional_inputs) != set(b.functional_inputs):
        raise InterfaceMismatchError(
            "primary inputs", set(a.functional_inputs), set(b.functional_inputs)
        )
    if set(a.outputs) != set(b.outputs):
        raise InterfaceMismatchError("primary outputs", set(a.outputs), set(b.outputs))
    if set(a.ff_outputs) != set(b.ff_outputs):
        raise InterfaceMismatchError("flip-flops", set(a.ff_outputs), set(b.ff_outputs))


def _compare_block(a, b, arrays, frame_names, base_index, lanes_valid):
    va = simulate(a, arrays)
    vb = simulate(b, arrays)
    for key in sorted(va):
        diff = va[key] ^ vb[key]
        if lanes_valid < WORD:
            diff = diff & np.uint64((1 << lanes_valid) - 1)
        w = int(np.flatnonzero(diff)[0]) if diff.any() else None
        if w is None:
            continue
        bit = (int(diff[w]) & -int(diff[w])).bit_length() - 1
        frame = {
            x: (int(arrays[x][w]) >> bit) & 1 for x in frame_names
        }
        frame["_frame_index"] = base_index + w * WORD + bit
        return key, frame
    return None


def equivalence_check(
    a: Netlist,
    b: Netlist,
    mode="exhaustive",
    patterns=200_000,
    seed=0,
    exhaustive_limit=EXHAUSTIVE_LIMIT,
) -> EquivalenceResult:
    """Compare two key-free designs on the combinational frame.

    Exhaustive mode enumerates all 2^k frames (k = functional PIs + FFs,
    guarded at `exhaustive_limit`). Random mode draws `patterns` seeded
    frames; an Equivalent verdict then means no counterexample was found at
    that pattern count.
    """
    _check_interfaces(a, b)
    frame_names = list(a.functional_inputs) + list(a.ff_outputs)
    k = len(frame_names)

    if mode == "exhaustive":
        if k > exhaustive_limit:
            raise ExhaustiveTooLargeError(k, exhaustive_limit)
        total = 1 << k
        nwords = max(1, total // WORD)
        block = 16384
        for start in range(0, nwords, block):
            cnt = min(block, nwords - start)
            idx = np.arange(start, start + cnt, dtype=np.uint64)
            arrays = {}
            for i, x in enumerate(frame_names):
                if i < 6:
                    arrays[x] = np.full(cnt, _LANES[i], dtype=np.uint64)
                else:
                    arrays[x] = np.where(
                        (idx >> np.uint64(i - 6)) & np.uint64(1), _FULL, np.uint64(0)
                    )
            hit = _compare_block(a, b, arrays, frame_names, start * WORD,
                                 min(total, WORD))
            if hit is not None:
                key, frame = hit
                return EquivalenceResult(False, mode, total, frame, f"{key[0]}:{key[1]}")
        return EquivalenceResult(True, mode, total)

    if mode == "random":
        rng = np.random.default_rng(seed)
        nwords = (patterns + WORD - 1) // WORD
        block = 2048
        done = 0
        for start in range(0, nwords, block):
            cnt = min(block, nwords - start)
            arrays = {
                x: rng.integers(0, _FULL, size=cnt, dtype=np.uint64, endpoint=True)
                for x in frame_names
            }
            hit = _compare_block(a, b, arrays, frame_names, done, WORD)
            if hit is not None:
                key, frame = hit
                return EquivalenceResult(False, mode, done + cnt * WORD, frame,
                                         f"{key[0]}:{key[1]}")
            done += cnt * WORD
        return EquivalenceResult(True, mode, done)

    raise ValueError(f"unknown mode: {mode!r}")
