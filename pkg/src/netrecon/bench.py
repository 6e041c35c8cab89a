"""ISCAS89 .bench reader/writer.

Grammar: `INPUT(x)`, `OUTPUT(y)`, `y = GATE(a, b, ...)`, `#` comments, blank
lines; gate names are case-insensitive. One extension: `y = LUT(d0..dw-1,
c0..c2^w-1)` carries a configurable cell with w data selects followed by 2^w
configuration inputs (index LSB = first data input).
"""

from __future__ import annotations

import re

from .errors import BenchSyntaxError
from .netlist import Gate, Netlist

_INPUT_RE = re.compile(r"INPUT\s*\(\s*([^\s()]+)\s*\)\s*$", re.IGNORECASE)
_OUTPUT_RE = re.compile(r"OUTPUT\s*\(\s*([^\s()]+)\s*\)\s*$", re.IGNORECASE)
_GATE_RE = re.compile(
    r"([^\s=()]+)\s*=\s*([A-Za-z][A-Za-z0-9]*)\s*\(\s*([^()]*?)\s*\)\s*$"
)

_KNOWN = {"AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUF", "BUFF", "DFF", "LUT"}


def _lut_width(n_operands):
    w = 1
    while w + (1 << w) < n_operands:
        w += 1
    return w if w + (1 << w) == n_operands else None


def parse_bench(text, name="netlist") -> Netlist:
    """Parse bench-format text into a validated Netlist (key_inputs empty)."""
    inputs, outputs, gates = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _INPUT_RE.match(line)
        if m:
            inputs.append(m.group(1))
            continue
        m = _OUTPUT_RE.match(line)
        if m:
            outputs.append(m.group(1))
            continue
        m = _GATE_RE.match(line)
        if m:
            out, kind, operand_str = m.group(1), m.group(2).upper(), m.group(3)
            operands = [t.strip() for t in operand_str.split(",")] if operand_str.strip() else []
            if any(not t or re.search(r"[\s()]", t) for t in operands):
                raise BenchSyntaxError("malformed operand list", lineno, line.find("(") + 1)
            if kind not in _KNOWN:
                raise BenchSyntaxError(f"unknown gate type '{kind}'", lineno, line.find("=") + 1)
            if kind == "BUFF":
                kind = "BUF"
            width = 0
            if kind == "LUT":
                width = _lut_width(len(operands))
                if width is None:
                    raise BenchSyntaxError(
                        f"LUT operand count {len(operands)} is not w + 2^w", lineno
                    )
            gates.append(Gate(out, kind, tuple(operands), width))
            continue
        raise BenchSyntaxError(f"unrecognized statement: '{line}'", lineno)
    return Netlist(name, inputs, outputs, gates)


def read_bench(path) -> Netlist:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    stem = str(path).rsplit("/", 1)[-1]
    if stem.endswith(".bench"):
        stem = stem[: -len(".bench")]
    return parse_bench(text, name=stem)


def write_bench(n: Netlist) -> str:
    """Serialize a netlist; parse_bench(write_bench(n)) is structurally identical."""
    lines = [f"# {n.name}"]
    lines += [f"INPUT({x})" for x in n.inputs]
    lines += [f"OUTPUT({x})" for x in n.outputs]
    lines.append("")
    for g in n.gates:
        lines.append(f"{g.output} = {g.kind}({', '.join(g.inputs)})")
    return "\n".join(lines) + "\n"


def save_bench(n: Netlist, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_bench(n))
