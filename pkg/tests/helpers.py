"""Shared test utilities: a scalar reference evaluator and netlist shufflers.

The scalar evaluator is an independent oracle for the bit-parallel engine:
it walks gates in topological order and computes one pattern at a time with
plain Python ints.
"""

import random

from netrecon.netlist import Gate, Netlist


def scalar_eval(n: Netlist, assign: dict) -> dict:
    """Evaluate every net for a single 0/1 assignment of the frame inputs."""
    vals = dict(assign)
    for g in n.topo_gates:
        ins = [vals[p] for p in g.inputs]
        kind = g.kind
        if kind == "AND":
            v = int(all(ins))
        elif kind == "NAND":
            v = int(not all(ins))
        elif kind == "OR":
            v = int(any(ins))
        elif kind == "NOR":
            v = int(not any(ins))
        elif kind == "XOR":
            v = ins[0] ^ ins[1]
        elif kind == "XNOR":
            v = 1 ^ ins[0] ^ ins[1]
        elif kind == "NOT":
            v = 1 ^ ins[0]
        elif kind == "BUF":
            v = ins[0]
        else:  # LUT
            w = g.lut_width
            idx = sum(ins[j] << j for j in range(w))
            v = ins[w + idx]
        vals[g.output] = v
    return vals


def scalar_frame(n: Netlist, assign: dict) -> dict:
    """Cut-point values for one frame: {("po"/"ff", name): bit}."""
    vals = scalar_eval(n, assign)
    out = {("po", name): vals[name] for name in n.outputs}
    for g in n.ff_gates:
        out[("ff", g.output)] = vals[g.inputs[0]]
    return out


def rename_permute(n: Netlist, seed=3) -> Netlist:
    """Bijectively rename every net and shuffle gate and input order."""
    rng = random.Random(seed)
    mapping = {x: f"N{i}_{x[::-1]}" for i, x in enumerate(n.nets)}
    gates = [
        Gate(mapping[g.output], g.kind, tuple(mapping[p] for p in g.inputs),
             g.lut_width)
        for g in n.gates
    ]
    rng.shuffle(gates)
    inputs = [mapping[x] for x in n.inputs]
    rng.shuffle(inputs)
    outputs = [mapping[x] for x in n.outputs]
    return Netlist(n.name + "_rp", inputs, outputs, gates,
                   [mapping[x] for x in n.key_inputs])
