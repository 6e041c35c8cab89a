"""Gate-level netlist model: validation, hypergraph view, I/O features, fanin cones.

A netlist is immutable after construction and safe to share across threads.
Sequential elements (DFF) are modeled as unit-delay state elements: their
outputs act as pseudo primary inputs and their data pins as pseudo primary
outputs of the combinational frame.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import (
    BadArityError,
    CombinationalLoopError,
    MultipleDriversError,
    NotACutPointError,
    PolicyConflictError,
    UndrivenNetError,
)

# Gate kinds and their arity rules: (min_inputs, max_inputs); None = unbounded.
GATE_ARITY = {
    "AND": (2, None),
    "NAND": (2, None),
    "OR": (2, None),
    "NOR": (2, None),
    "XOR": (2, 2),
    "XNOR": (2, 2),
    "NOT": (1, 1),
    "BUF": (1, 1),
    "DFF": (1, 1),
}

DEFAULT_KEY_PREFIX = "keyinput"


@dataclass(frozen=True)
class Gate:
    """One assignment `output = KIND(inputs...)`.

    For kind == "LUT", the first `lut_width` inputs are data selects and the
    remaining 2**lut_width inputs are configuration bits; configuration index
    is the binary number whose LSB is the first data input.
    """

    output: str
    kind: str
    inputs: tuple
    lut_width: int = 0

    def check_arity(self):
        if self.kind == "LUT":
            w = self.lut_width
            expected = w + (1 << w)
            if w < 1 or len(self.inputs) != expected:
                raise BadArityError(self.output, f"LUT{w}", expected, len(self.inputs))
            return
        if self.kind not in GATE_ARITY:
            raise BadArityError(self.output, self.kind, "known kind", len(self.inputs))
        lo, hi = GATE_ARITY[self.kind]
        if len(self.inputs) < lo or (hi is not None and len(self.inputs) > hi):
            expected = str(lo) if hi == lo else f">={lo}"
            raise BadArityError(self.output, self.kind, expected, len(self.inputs))

    @property
    def data_inputs(self):
        if self.kind == "LUT":
            return self.inputs[: self.lut_width]
        return self.inputs

    @property
    def config_inputs(self):
        if self.kind == "LUT":
            return self.inputs[self.lut_width :]
        return ()

    def kind_label(self):
        return f"LUT{self.lut_width}" if self.kind == "LUT" else self.kind


@dataclass(frozen=True)
class IoFeatures:
    pi_count: int
    po_count: int
    ff_count: int
    gate_count: int


@dataclass(frozen=True)
class Hyperedge:
    net: str
    driver: str          # gate output name or primary input name
    sinks: frozenset     # gate ids consuming the net, plus "po:<name>" markers


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple      # gate ids (= gate output nets)
    edges: dict          # net -> Hyperedge


@dataclass(frozen=True)
class ConeSummary:
    """Transitive combinational fanin of a cut-point net."""

    cut: str
    gates: tuple                 # gate output names, topological order
    depth: int                   # gates on the longest path, 0 for passthrough
    support_pi: frozenset
    support_ff: frozenset
    support_key: frozenset
    kind_histogram: dict = field(default_factory=dict)   # label -> normalized share

    @property
    def gate_count(self):
        return len(self.gates)

    @property
    def support(self):
        return self.support_pi | self.support_ff | self.support_key


class Netlist:
    """Validated gate-level netlist.

    Invariants enforced at construction: unique drivers, all referenced nets
    driven, per-kind arity, and acyclicity of the combinational subgraph.
    """

    def __init__(self, name, inputs, outputs, gates, key_inputs=()):
        self.name = name
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        self.gates = tuple(gates)
        self.key_inputs = frozenset(key_inputs)
        self._validate()
        # derived, computed once
        self.driver = {g.output: g for g in self.gates}
        self.ff_gates = tuple(g for g in self.gates if g.kind == "DFF")
        self.ff_outputs = tuple(g.output for g in self.ff_gates)
        self.topo_gates = self._topo_sort()
        self._fanout = None

    # -- validation --------------------------------------------------------

    def _validate(self):
        if self.key_inputs - set(self.inputs):
            extra = sorted(self.key_inputs - set(self.inputs))
            raise UndrivenNetError(extra[0])
        seen = set(self.inputs)
        if len(seen) != len(self.inputs):
            dup = [x for x, c in Counter(self.inputs).items() if c > 1][0]
            raise MultipleDriversError(dup)
        for g in self.gates:
            g.check_arity()
            if g.output in seen:
                raise MultipleDriversError(g.output)
            seen.add(g.output)
        for g in self.gates:
            for pin in g.inputs:
                if pin not in seen:
                    raise UndrivenNetError(pin)
        for po in self.outputs:
            if po not in seen:
                raise UndrivenNetError(po)

    def _topo_sort(self):
        """Topological order of non-DFF gates; raises on combinational loops."""
        sources = set(self.inputs) | {g.output for g in self.ff_gates}
        comb = [g for g in self.gates if g.kind != "DFF"]
        remaining = {g.output: g for g in comb}
        indeg = {}
        users = {}
        for g in comb:
            deps = [p for p in set(g.inputs) if p in remaining]
            indeg[g.output] = len(deps)
            for p in deps:
                users.setdefault(p, []).append(g.output)
        order = []
        ready = deque(g.output for g in comb if indeg[g.output] == 0)
        while ready:
            out = ready.popleft()
            order.append(remaining[out])
            for u in users.get(out, ()):
                indeg[u] -= 1
                if indeg[u] == 0:
                    ready.append(u)
        if len(order) != len(comb):
            raise CombinationalLoopError(self._find_cycle(remaining, indeg, sources))
        return tuple(order)

    def _find_cycle(self, remaining, indeg, sources):
        stuck = {o for o, d in indeg.items() if d > 0}
        start = sorted(stuck)[0]
        path, seen = [], {}
        node = start
        while node not in seen:
            seen[node] = len(path)
            path.append(node)
            g = remaining[node]
            node = next(p for p in g.inputs if p in stuck)
        return path[seen[node] :] + [node]

    # -- views -------------------------------------------------------------

    @property
    def functional_inputs(self):
        return tuple(x for x in self.inputs if x not in self.key_inputs)

    @property
    def nets(self):
        return tuple(self.inputs) + tuple(g.output for g in self.gates)

    def fanout(self):
        """net -> list of (gate, pin index) uses; computed on first call."""
        if self._fanout is None:
            fo = {net: [] for net in self.nets}
            for g in self.gates:
                for i, pin in enumerate(g.inputs):
                    fo[pin].append((g, i))
            self._fanout = fo
        return self._fanout

    def cut_points(self):
        """Ordered cut ids: one per PO, one per FF (compared at its data pin)."""
        cuts = [("po", i, net, net) for i, net in enumerate(self.outputs)]
        cuts += [
            ("ff", i, g.output, g.inputs[0]) for i, g in enumerate(self.ff_gates)
        ]
        return cuts

    def with_key_inputs(self, key_inputs):
        return Netlist(self.name, self.inputs, self.outputs, self.gates, key_inputs)

    def renamed(self, name):
        nl = Netlist.__new__(Netlist)
        nl.__dict__.update(self.__dict__)
        nl.name = name
        return nl


# -- analyses ---------------------------------------------------------------


def build_hypergraph(n: Netlist) -> Hypergraph:
    """Combinational-frame hypergraph: one vertex per logic gate, one
    hyperedge per net. FFs appear as net endpoints only ("ff:<q>" sink
    markers at their data pins, FF output nets as drivers), matching their
    cut-point role."""
    sinks = {net: set() for net in n.nets}
    for g in n.gates:
        if g.kind == "DFF":
            sinks[g.inputs[0]].add(f"ff:{g.output}")
        else:
            for pin in g.inputs:
                sinks[pin].add(g.output)
    for po in n.outputs:
        sinks[po].add(f"po:{po}")
    edges = {
        net: Hyperedge(net, net, frozenset(sinks[net])) for net in n.nets
    }
    return Hypergraph(tuple(g.output for g in n.gates if g.kind != "DFF"), edges)


def extract_features(n: Netlist) -> IoFeatures:
    """I/O features; gate_count covers logic gates only (FFs counted apart,
    the convention of the published benchmark tables)."""
    return IoFeatures(
        pi_count=len(n.inputs) - len(n.key_inputs),
        po_count=len(n.outputs),
        ff_count=len(n.ff_gates),
        gate_count=len(n.gates) - len(n.ff_gates),
    )


def identify_key_inputs(n: Netlist, policy="naming", pattern=DEFAULT_KEY_PREFIX):
    """Return a copy of `n` with key_inputs assigned.

    policy "naming" flags inputs whose name starts with `pattern`;
    "structural" flags inputs used exclusively as XOR/XNOR second pins or LUT
    configuration pins; "both" requires agreement and raises PolicyConflictError
    otherwise.
    """
    by_name = {x for x in n.inputs if x.startswith(pattern)}
    if policy == "naming":
        return n.with_key_inputs(by_name)

    fanout = n.fanout()
    by_struct = set()
    for x in n.inputs:
        uses = fanout[x]
        if not uses:
            continue
        if all(_is_key_pin(g, i) for g, i in uses):
            by_struct.add(x)
    if policy == "structural":
        return n.with_key_inputs(by_struct)
    if policy == "both":
        if by_name != by_struct:
            raise PolicyConflictError(by_name - by_struct, by_struct - by_name)
        return n.with_key_inputs(by_name)
    raise ValueError(f"unknown key-input policy: {policy!r}")


def _is_key_pin(gate: Gate, pin: int) -> bool:
    if gate.kind in ("XOR", "XNOR") and pin == 1:
        return True
    if gate.kind == "LUT" and pin >= gate.lut_width:
        return True
    return False


def fanin_cone(n: Netlist, cut: str) -> ConeSummary:
    """Combinational fanin cone of a PO net or DFF data-input net.

    Traversal stops at primary inputs and FF outputs; depth counts gates on
    the longest path (0 when the cut is tied directly to a source).
    """
    valid = set(n.outputs) | {g.inputs[0] for g in n.ff_gates}
    if cut not in valid:
        raise NotACutPointError(cut)

    sources = set(n.inputs) | set(n.ff_outputs)
    cone = {}
    stack = [cut]
    while stack:
        net = stack.pop()
        if net in sources or net in cone:
            continue
        g = n.driver[net]
        if g.kind == "DFF":
            continue  # FF output reached through its own name only
        cone[net] = g
        stack.extend(p for p in g.inputs if p not in sources and p not in cone)

    # topological order restricted to the cone
    order = [g for g in n.topo_gates if g.output in cone]
    depth = {}
    for g in order:
        depth[g.output] = 1 + max((depth.get(p, 0) for p in g.inputs), default=0)

    support = set()
    for g in order:
        support.update(p for p in g.inputs if p in sources)
    if not order:
        support = {cut}

    hist = Counter(g.kind_label() for g in order)
    total = sum(hist.values())
    histogram = {k: v / total for k, v in sorted(hist.items())} if total else {}

    ffs = set(n.ff_outputs)
    return ConeSummary(
        cut=cut,
        gates=tuple(g.output for g in order),
        depth=depth.get(cut, 0),
        support_pi=frozenset(support - ffs - n.key_inputs),
        support_ff=frozenset(support & ffs),
        support_key=frozenset(support & n.key_inputs),
        kind_histogram=histogram,
    )
