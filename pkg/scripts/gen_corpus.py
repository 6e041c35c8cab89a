#!/usr/bin/env python3
"""Generate the benchmark corpus under benchmarks/.

The canonical ISCAS89 distributions are not redistributable here, so the
corpus holds deterministic stand-in designs with the same published I/O,
flip-flop, and gate-count profiles (gate count = logic gates, FFs listed
separately). Designs are built in layers with bounded depth and are
screened so that inverting any single net is visible at some PO or FF data
pin within 10k random frames; regeneration is byte-stable.
"""

import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np  # noqa: E402

from netrecon import sim  # noqa: E402
from netrecon.bench import parse_bench, write_bench  # noqa: E402
from netrecon.netlist import Gate, Netlist, extract_features  # noqa: E402

# name, pi, po, ff, combinational gate count (FFs listed separately)
PROFILES = [
    ("s298", 3, 6, 14, 119),
    ("s382", 3, 6, 21, 162),
    ("s400", 3, 6, 21, 158),
    ("s444", 3, 6, 21, 181),
    ("s526", 3, 6, 21, 193),
]

TARGET_DEPTH = 9

KINDS = [
    ("NOT", 1, 0.26),
    ("AND", 2, 0.14), ("NAND", 2, 0.11),
    ("OR", 2, 0.12), ("NOR", 2, 0.11),
    ("XOR", 2, 0.11), ("XNOR", 2, 0.06),
    ("AND", 3, 0.03), ("OR", 3, 0.03), ("NAND", 3, 0.03),
]


def _pick_kind(rng):
    r = rng.random()
    acc = 0.0
    for kind, arity, w in KINDS:
        acc += w
        if r < acc:
            return kind, arity
    return "AND", 2


def _try_build(name, pi, po, ff, comb, seed):
    rng = random.Random(seed)
    pis = [f"G{i}" for i in range(pi)]
    ffs = [f"G{10 + i}" for i in range(ff)]
    width = max(1, (comb + TARGET_DEPTH - 1) // TARGET_DEPTH)

    levels = [list(pis + ffs)]          # level 0: sources
    unconsumed = {x: 0 for x in levels[0]}
    gates = []
    for j in range(comb):
        level = j // width + 1
        while len(levels) <= level:
            levels.append([])
        kind, arity = _pick_kind(rng)
        prev = levels[level - 1]
        earlier = [x for lv in levels[: level] for x in lv]
        fanins = []
        # first pin: drain an unconsumed net from the previous level if any
        pend = [x for x in prev if unconsumed.get(x, 1) == 0]
        fanins.append(rng.choice(pend) if pend else rng.choice(prev))
        while len(fanins) < arity:
            cand = rng.choice(earlier)
            if cand not in fanins:
                fanins.append(cand)
        out = f"G{100 + j}"
        gates.append(Gate(out, kind, tuple(fanins)))
        levels[level].append(out)
        unconsumed[out] = 0
        for c in fanins:
            unconsumed[c] = unconsumed.get(c, 0) + 1

    leftovers = [g.output for g in gates if unconsumed[g.output] == 0]
    sinks_needed = po + ff
    if len(leftovers) > sinks_needed:
        return None
    rng.shuffle(leftovers)
    sinks = list(leftovers)
    rest = [g.output for g in gates if g.output not in sinks]
    rng.shuffle(rest)
    sinks += rest[: sinks_needed - len(sinks)]
    outputs = sorted(sinks[:po])
    dffs = [Gate(q, "DFF", (d,)) for q, d in zip(ffs, sinks[po:])]
    return Netlist(name, pis, outputs, gates + dffs)


def _all_nets_observable(n, frame_seed, patterns=10048):
    """Inverting any net's loads must disturb some PO or FF data pin."""
    words = patterns // 64
    rng = np.random.default_rng(frame_seed)
    frames = {
        x: rng.integers(0, 2**64 - 1, size=words, dtype=np.uint64, endpoint=True)
        for x in list(n.inputs) + list(n.ff_outputs)
    }
    base = sim.simulate(n, frames)
    po_set = set(n.outputs)
    nets = set(n.inputs) | {g.output for g in n.gates}
    for x in sorted(nets):
        if x in po_set:
            continue  # a cut there re-drives the PO directly
        inv = x + "_invX"
        gates = [
            Gate(g.output, g.kind, tuple(inv if p == x else p for p in g.inputs),
                 g.lut_width)
            for g in n.gates
        ]
        gates.append(Gate(inv, "NOT", (x,)))
        m = Netlist(n.name, n.inputs, n.outputs, gates)
        vb = sim.simulate(m, frames)
        if all(np.array_equal(base[k], vb[k]) for k in base):
            return False
    return True


def build(name, pi, po, ff, total):
    base = sum(ord(c) for c in name) * 1000
    for attempt in range(500):
        n = _try_build(name, pi, po, ff, total, base + attempt)
        if n is None:
            continue
        f = extract_features(n)
        if (f.pi_count, f.po_count, f.ff_count, f.gate_count) != (pi, po, ff, total):
            continue
        if not (_all_nets_observable(n, 7) and _all_nets_observable(n, 99)):
            continue
        return n, base + attempt
    raise RuntimeError(f"could not generate {name}")


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "benchmarks")
    os.makedirs(out_dir, exist_ok=True)
    for name, pi, po, ff, total in PROFILES:
        n, seed = build(name, pi, po, ff, total)
        text = write_bench(n)
        header = (
            f"# profile: pi={pi} po={po} ff={ff} gates={total}\n"
            f"# synthetic stand-in generated by scripts/gen_corpus.py (seed {seed})\n"
        )
        body = header + text
        assert extract_features(parse_bench(body, name)).gate_count == total
        path = os.path.join(out_dir, f"{name}.bench")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(body)
        print(f"wrote {path} (seed {seed})")


if __name__ == "__main__":
    main()
