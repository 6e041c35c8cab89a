"""IP-protection transforms: XOR/XNOR key-gate locking and LUT obfuscation.

Both transforms are pure functions of (netlist, config); identical configs
produce identical outputs. apply_key undoes a transform by substituting the
key bits as constants and folding them through the logic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

import numpy as np

from . import sim

from .errors import (
    ConeOverlapError,
    DuplicateKeyNameError,
    KeyMismatchError,
    NoEligibleConeError,
    TooManyKeyGatesError,
)
from .netlist import DEFAULT_KEY_PREFIX, Gate, Netlist

XOR_LOCK = "XOR_LOCK"
LUT_OBF = "LUT_OBF"


@dataclass(frozen=True)
class KeyVector:
    scheme: str
    bindings: tuple   # ordered (key input name, bit) pairs

    def as_dict(self):
        return dict(self.bindings)

    @property
    def width(self):
        return len(self.bindings)

    def flipped(self, index):
        bits = list(self.bindings)
        name, bit = bits[index]
        bits[index] = (name, bit ^ 1)
        return KeyVector(self.scheme, tuple(bits))


@dataclass(frozen=True)
class LockConfig:
    scheme: str = "xor"       # "xor" | "lut"
    key_width: int = 128      # xor scheme
    lut_count: int = 8        # lut scheme
    lut_width: int = 4
    seed: int = 0
    max_retries: int = 64

    @property
    def key_bits(self):
        if self.scheme == "xor":
            return self.key_width
        return self.lut_count * (1 << self.lut_width)


def _fresh(name, used):
    while name in used:
        name += "_"
    used.add(name)
    return name


# -- XOR locking ---------------------------------------------------------------


def xor_lock(od: Netlist, cfg: LockConfig):
    """Cut key_width nets and re-drive each through an XOR/XNOR key gate.

    Eligible cut locations: any gate output, primary input, or FF output
    net (a PO-listed source net is skipped since its name cannot move). The
    sampled key bit decides the gate: XOR for 0, XNOR for 1, so the correct
    key restores the original function.
    """
    assert not od.key_inputs, "design already carries key inputs"
    po_set = set(od.outputs)
    comb_outs = {g.output for g in od.gates if g.kind != "DFF"}
    eligible = [x for x in od.inputs if x not in po_set]
    eligible += [x for x in od.ff_outputs if x not in po_set]
    eligible += sorted(comb_outs)
    if cfg.key_width > len(eligible):
        raise TooManyKeyGatesError(cfg.key_width, len(eligible))

    rng = random.Random(cfg.seed)
    chosen = rng.sample(eligible, cfg.key_width)
    bits = [rng.getrandbits(1) for _ in chosen]

    used = set(od.nets)
    key_names = []
    for i in range(cfg.key_width):
        name = f"{DEFAULT_KEY_PREFIX}{i}"
        if name in used:
            raise DuplicateKeyNameError(name)
        used.add(name)
        key_names.append(name)

    # gate-output cuts rename the driver; source cuts (PI / FF output)
    # re-route every load through a fresh keyed net instead
    pre = {net: _fresh(f"{net}_pre", used) for net in chosen if net in comb_outs}
    keyed = {net: _fresh(f"{net}_keyed", used) for net in chosen if net not in comb_outs}

    gates = []
    for g in od.gates:
        out = pre.get(g.output, g.output)
        pins = tuple(keyed.get(p, p) for p in g.inputs)
        gates.append(replace(g, output=out, inputs=pins) if (out, pins) != (g.output, g.inputs) else g)
    for net, key, bit in zip(chosen, key_names, bits):
        kind = "XNOR" if bit else "XOR"
        if net in pre:
            gates.append(Gate(net, kind, (pre[net], key)))
        else:
            gates.append(Gate(keyed[net], kind, (net, key)))

    locked = Netlist(
        od.name, tuple(od.inputs) + tuple(key_names), od.outputs, gates, key_names
    )
    return locked, KeyVector(XOR_LOCK, tuple(zip(key_names, bits)))


# -- LUT obfuscation -------------------------------------------------------------


def _grow_cone(n: Netlist, seed_gate: Gate, width, banned, protected=frozenset()):
    """Max-fanout-free cone of seed_gate with support capped at `width`.

    Nets in `protected` are never absorbed (they feed logic outside `n`'s
    gate list, e.g. selects of an already-committed LUT). Returns (cone
    gate-output set, ordered support nets) or None if even the seed gate's
    own fanin exceeds the cap.
    """
    fanout = n.fanout()
    sources = set(n.inputs) | set(n.ff_outputs)
    po_set = set(n.outputs)
    cone = {seed_gate.output}
    support = list(dict.fromkeys(seed_gate.inputs))
    if len(support) > width:
        return None
    grown = True
    while grown:
        grown = False
        for s in list(support):
            if s in sources or s in po_set or s in protected:
                continue
            d = n.driver[s]
            if d.kind in ("DFF", "LUT") or d.output in banned or d.output in cone:
                continue
            if any(g.output not in cone for g, _ in fanout[s]):
                continue
            trial = [x for x in support if x != s]
            trial += [p for p in d.inputs if p not in trial]
            if len(trial) > width:
                continue
            cone.add(d.output)
            support = trial
            grown = True
    return cone, support


def _eval_cone(n: Netlist, cone, root, assign):
    order = [g for g in n.topo_gates if g.output in cone]
    vals = dict(assign)
    for g in order:
        ins = [vals[p] for p in g.inputs]
        k = g.kind
        if k == "AND":
            v = int(all(ins))
        elif k == "NAND":
            v = int(not all(ins))
        elif k == "OR":
            v = int(any(ins))
        elif k == "NOR":
            v = int(not any(ins))
        elif k == "XOR":
            v = ins[0] ^ ins[1]
        elif k == "XNOR":
            v = 1 ^ ins[0] ^ ins[1]
        elif k == "NOT":
            v = 1 ^ ins[0]
        else:  # BUF
            v = ins[0]
        vals[g.output] = v
    return vals[root]


_VET_WORDS = 128          # 8192 vetting frames per candidate cone
_VET_SEED = 0x5EEDF00D    # fixed: vetting must not perturb cfg.seed reproducibility
_MIN_ROW_HITS = 8         # every row must flip-propagate on at least this many frames


def lut_obfuscate(od: Netlist, cfg: LockConfig):
    """Replace lut_count single-output logic cones by configurable LUTs.

    Each selected cone's truth table becomes the correct bitstream; the
    configuration inputs are the new key inputs. Support narrower than the
    LUT is padded preferentially with frame inputs (PIs / FF outputs), whose
    values are independent of the cone support; a support net is duplicated
    only as a last resort, and rows made unreachable by duplication get PRNG
    filler bits.

    Candidate cones are vetted under fixed-seed random frames: every
    truth-table row must be exercised, and flipping the cone output on the
    frames hitting that row must disturb some PO or FF data pin. Among the
    retry budget the candidate with the best worst-row count wins, so a
    single corrupted configuration bit is observable with high probability.
    """
    assert not od.key_inputs, "design already carries key inputs"
    rng = random.Random(cfg.seed)
    w = cfg.lut_width
    comb = [g for g in od.gates if g.kind not in ("DFF", "LUT")]
    if not comb:
        raise NoEligibleConeError(w)

    frng = np.random.default_rng(_VET_SEED)
    frames = {
        x: frng.integers(0, 2**64 - 1, size=_VET_WORDS, dtype=np.uint64, endpoint=True)
        for x in list(od.inputs) + list(od.ff_outputs)
    }
    values = sim.evaluate(od, frames)
    base_cuts = sim.simulate(od, frames)
    po_set = set(od.outputs)
    frame_ins = list(od.inputs) + list(od.ff_outputs)
    all_ones = np.full(_VET_WORDS, np.uint64(2**64 - 1))
    prop_cache = {}

    def propagate_mask(root):
        """Frames on which inverting `root` at its loads disturbs a cut."""
        if root in prop_cache:
            return prop_cache[root]
        if root in po_set:
            mask = all_ones
        else:
            inv = root + "_invV"
            gates = [
                Gate(g.output, g.kind,
                     tuple(inv if p == root else p for p in g.inputs), g.lut_width)
                for g in od.gates
            ]
            gates.append(Gate(inv, "NOT", (root,)))
            m = Netlist(od.name, od.inputs, od.outputs, gates)
            new_cuts = sim.simulate(m, frames)
            mask = np.zeros(_VET_WORDS, dtype=np.uint64)
            for k, v in base_cuts.items():
                mask |= v ^ new_cuts[k]
        prop_cache[root] = mask
        return mask

    # net-level combinational dependencies, kept current as cones commit so
    # a pad can never close a cycle through its own LUT
    deps = {g.output: set(g.inputs) for g in od.gates if g.kind != "DFF"}

    def reaches(src, dst):
        stack, seen = [src], set()
        while stack:
            x = stack.pop()
            if x == dst:
                return True
            if x in seen:
                continue
            seen.add(x)
            stack.extend(deps.get(x, ()))
        return False

    used_gates = set()     # interiors and roots of committed cones
    protected = set()      # selects of committed cones; must stay driven
    cones = []

    def vet(root, cone, support):
        """Pad the support to width and score the worst truth-table row."""
        selects = list(support)
        pool = rng.sample(frame_ins, len(frame_ins))
        pool += sorted(
            g.output for g in comb if g.output not in used_gates and g.output not in cone
        )
        for cand in pool:
            if len(selects) >= w:
                break
            if cand in selects or cand in used_gates or cand in cone or cand == root:
                continue
            if cand not in frame_ins and reaches(cand, root):
                continue
            selects.append(cand)
        while len(selects) < w:
            selects.append(selects[0])  # last resort: duplicate a support net

        pmask = propagate_mask(root)
        worst = None
        for idx in range(1 << w):
            m = pmask
            for j, net in enumerate(selects):
                v = values[net]
                m = (m & v) if (idx >> j) & 1 else (m & ~v)
            hits = int(np.bitwise_count(m).sum())
            worst = hits if worst is None else min(worst, hits)
        return selects, worst

    for _ in range(cfg.lut_count):
        best = None
        overlap_hit = None
        for _ in range(cfg.max_retries):
            g = rng.choice(comb)
            if g.output in used_gates:
                overlap_hit = g.output
                continue
            grown = _grow_cone(od, g, w, used_gates, protected)
            if grown is None:
                continue
            cone, support = grown
            if cone & used_gates:
                overlap_hit = sorted(cone & used_gates)[0]
                continue
            selects, worst = vet(g.output, cone, support)
            if best is None or worst > best[0]:
                best = (worst, g.output, cone, selects)
            if worst >= _MIN_ROW_HITS:
                break
        if best is None:
            if overlap_hit is not None:
                raise ConeOverlapError(overlap_hit)
            raise NoEligibleConeError(w)
        _, root, cone, selects = best
        used_gates |= cone
        protected |= set(selects)
        deps[root] = set(selects)
        for net in cone - {root}:
            deps.pop(net, None)
        cones.append((root, cone, selects))

    interiors = set()
    for _, cone, _ in cones:
        interiors |= cone

    used_names = set(od.nets)
    key_names = []
    new_luts = {}
    bindings = []
    for root, cone, selects in cones:
        cfg_names = []
        tt = []
        for idx in range(1 << w):
            assign = {}
            reachable = True
            for j, net in enumerate(selects):
                bit = (idx >> j) & 1
                if net in assign and assign[net] != bit:
                    reachable = False
                    break
                assign[net] = bit
            bit = _eval_cone(od, cone, root, assign) if reachable else rng.getrandbits(1)
            name = f"{DEFAULT_KEY_PREFIX}{len(key_names)}"
            if name in used_names:
                raise DuplicateKeyNameError(name)
            used_names.add(name)
            key_names.append(name)
            cfg_names.append(name)
            tt.append(bit)
            bindings.append((name, bit))
        new_luts[root] = Gate(root, "LUT", tuple(selects) + tuple(cfg_names), w)

    gates = []
    for g in od.gates:
        if g.output in new_luts:
            gates.append(new_luts[g.output])
        elif g.output in interiors:
            continue
        else:
            gates.append(g)

    locked = Netlist(
        od.name, tuple(od.inputs) + tuple(key_names), od.outputs, gates, key_names
    )
    return locked, KeyVector(LUT_OBF, tuple(bindings))


# -- key application / constant folding ------------------------------------------


_TWO_INPUT_TT = {
    0b1000: "AND",
    0b0111: "NAND",
    0b1110: "OR",
    0b0001: "NOR",
    0b0110: "XOR",
    0b1001: "XNOR",
}


class _Folder:
    def __init__(self, td: Netlist, consts: dict):
        self.td = td
        self.const = dict(consts)      # net -> 0/1
        self.alias = {}                # net -> replacement net
        self.used = set(td.nets)
        self.extra = []                # materialized helper gates
        self.const_net = {}            # bit -> net name
        self.keep_named = set(td.outputs)
        self.decisions = {}            # gate output -> Gate | None

    def resolve(self, net):
        while net in self.alias:
            net = self.alias[net]
        return net

    def value(self, net):
        net = self.resolve(net)
        if net in self.const:
            return ("c", self.const[net])
        return ("n", net)

    def materialize_const(self, bit):
        if bit in self.const_net:
            return self.const_net[bit]
        src = (self.td.functional_inputs or self.td.ff_outputs)[0]
        name = _fresh(f"_const{bit}", self.used)
        self.extra.append(Gate(name, "XNOR" if bit else "XOR", (src, src)))
        self.const_net[bit] = name
        return name

    def emit_const(self, out, bit):
        if out in self.keep_named:
            self.decisions[out] = Gate(out, "BUF", (self.materialize_const(bit),))
        else:
            self.const[out] = bit
            self.decisions[out] = None

    def emit_alias(self, out, net):
        if out in self.keep_named:
            self.decisions[out] = Gate(out, "BUF", (net,))
        else:
            self.alias[out] = net
            self.decisions[out] = None

    def fold_gate(self, g: Gate):
        vals = [self.value(p) for p in g.inputs]
        kind = g.kind
        if kind in ("AND", "NAND", "OR", "NOR"):
            inverted = kind in ("NAND", "NOR")
            dominant = 0 if kind in ("AND", "NAND") else 1
            nets = []
            for tag, v in vals:
                if tag == "c":
                    if v == dominant:
                        self.emit_const(g.output, dominant ^ inverted)
                        return
                elif v not in nets:
                    nets.append(v)
            if not nets:
                self.emit_const(g.output, (1 ^ dominant) ^ inverted)
            elif len(nets) == 1:
                if inverted:
                    self.decisions[g.output] = Gate(g.output, "NOT", (nets[0],))
                else:
                    self.emit_alias(g.output, nets[0])
            else:
                base = "AND" if kind in ("AND", "NAND") else "OR"
                self.decisions[g.output] = Gate(
                    g.output, ("N" + base) if inverted else base, tuple(nets)
                )
        elif kind in ("XOR", "XNOR"):
            inv = 1 if kind == "XNOR" else 0
            (ta, va), (tb, vb) = vals
            if ta == "c" and tb == "c":
                self.emit_const(g.output, va ^ vb ^ inv)
            elif ta == "c" or tb == "c":
                cbit = va if ta == "c" else vb
                net = vb if ta == "c" else va
                if cbit ^ inv:
                    self.decisions[g.output] = Gate(g.output, "NOT", (net,))
                else:
                    self.emit_alias(g.output, net)
            elif va == vb:
                self.emit_const(g.output, inv)
            else:
                self.decisions[g.output] = Gate(g.output, kind, (va, vb))
        elif kind == "NOT":
            tag, v = vals[0]
            if tag == "c":
                self.emit_const(g.output, v ^ 1)
            else:
                self.decisions[g.output] = Gate(g.output, "NOT", (v,))
        elif kind == "BUF":
            tag, v = vals[0]
            if tag == "c":
                self.emit_const(g.output, v)
            else:
                self.emit_alias(g.output, v)
        else:  # LUT
            self.fold_lut(g, vals)

    def fold_lut(self, g: Gate, vals):
        w = g.lut_width
        data, cfg = vals[:w], vals[w:]
        if any(tag != "c" for tag, _ in cfg):
            # configuration not fully constant; keep the LUT, pin the constants
            pins = []
            for tag, v in vals:
                pins.append(self.materialize_const(v) if tag == "c" else v)
            self.decisions[g.output] = Gate(g.output, "LUT", tuple(pins), w)
            return
        tt = [v for _, v in cfg]

        # map each select to a constant or a deduplicated variable
        var_of = {}
        sel_map = []
        for tag, v in data:
            if tag == "c":
                sel_map.append(("c", v))
            else:
                if v not in var_of:
                    var_of[v] = len(var_of)
                sel_map.append(("v", var_of[v]))
        nvars = len(var_of)
        names = [None] * nvars
        for net, i in var_of.items():
            names[i] = net

        newtt = 0
        for m in range(1 << nvars):
            idx = 0
            for j, (tag, v) in enumerate(sel_map):
                bit = v if tag == "c" else (m >> v) & 1
                idx |= bit << j
            if tt[idx]:
                newtt |= 1 << m
        self.emit_function(g.output, names, newtt)

    def emit_function(self, out, names, tt):
        """Emit logic for a truth table after dropping vacuous variables."""
        k = len(names)
        j = 0
        while j < k:
            lo = hi = 0
            li = hii = 0
            for m in range(1 << k):
                bit = (tt >> m) & 1
                if (m >> j) & 1:
                    hi |= bit << hii
                    hii += 1
                else:
                    lo |= bit << li
                    li += 1
            if lo == hi:
                names = names[:j] + names[j + 1 :]
                tt = lo
                k -= 1
            else:
                j += 1

        if k == 0:
            self.emit_const(out, tt & 1)
            return
        if k == 1:
            if tt == 0b10:
                self.emit_alias(out, names[0])
            else:  # 0b01
                self.decisions[out] = Gate(out, "NOT", (names[0],))
            return
        full = (1 << (1 << k)) - 1
        if k == 2 and tt in _TWO_INPUT_TT:
            self.decisions[out] = Gate(out, _TWO_INPUT_TT[tt], tuple(names))
            return
        if tt == 1 << ((1 << k) - 1):
            self.decisions[out] = Gate(out, "AND", tuple(names))
            return
        if tt == (full ^ (1 << ((1 << k) - 1))):
            self.decisions[out] = Gate(out, "NAND", tuple(names))
            return
        if tt == full ^ 1:
            self.decisions[out] = Gate(out, "OR", tuple(names))
            return
        if tt == 1:
            self.decisions[out] = Gate(out, "NOR", tuple(names))
            return

        # fall back to a sum-of-products network
        minterms = [m for m in range(1 << k) if (tt >> m) & 1]
        inv = {}

        def literals(m):
            lits = []
            for j in range(k):
                if (m >> j) & 1:
                    lits.append(names[j])
                else:
                    if names[j] not in inv:
                        nn = _fresh(f"{out}_n{j}", self.used)
                        self.extra.append(Gate(nn, "NOT", (names[j],)))
                        inv[names[j]] = nn
                    lits.append(inv[names[j]])
            return tuple(lits)

        if len(minterms) == 1:
            self.decisions[out] = Gate(out, "AND", literals(minterms[0]))
            return
        terms = []
        for m in minterms:
            tn = _fresh(f"{out}_m{m}", self.used)
            self.extra.append(Gate(tn, "AND", literals(m)))
            terms.append(tn)
        self.decisions[out] = Gate(out, "OR", tuple(terms))


def apply_key(td: Netlist, key: KeyVector) -> Netlist:
    """Substitute key bits as constants and fold them out of the netlist."""
    kd = key.as_dict()
    if set(kd) != set(td.key_inputs) or len(kd) != key.width:
        raise KeyMismatchError(
            f"key covers {sorted(kd)} but design expects {sorted(td.key_inputs)}"
        )
    folder = _Folder(td, kd)
    for g in td.topo_gates:
        folder.fold_gate(g)

    gates = []
    for g in td.gates:
        if g.kind == "DFF":
            tag, v = folder.value(g.inputs[0])
            d = folder.materialize_const(v) if tag == "c" else v
            gates.append(Gate(g.output, "DFF", (d,)))
        else:
            kept = folder.decisions.get(g.output)
            if kept is not None:
                pins = tuple(
                    folder.materialize_const(folder.const[p])
                    if folder.resolve(p) in folder.const
                    else folder.resolve(p)
                    for p in kept.inputs
                )
                gates.append(replace(kept, inputs=pins) if pins != kept.inputs else kept)
    gates = folder.extra + gates

    inputs = tuple(x for x in td.inputs if x not in td.key_inputs)
    return Netlist(td.name, inputs, td.outputs, gates, ())


# -- variants and key files --------------------------------------------------------


def transform(od: Netlist, cfg: LockConfig):
    if cfg.scheme == "xor":
        return xor_lock(od, cfg)
    if cfg.scheme == "lut":
        return lut_obfuscate(od, cfg)
    raise ValueError(f"unknown scheme: {cfg.scheme!r}")


def generate_variants(od: Netlist, cfg: LockConfig, n: int, seed0: int):
    """n reproducible variants; variant j uses seed seed0 + j."""
    out = []
    for j in range(n):
        td, kv = transform(od, replace(cfg, seed=seed0 + j))
        out.append((td.renamed(f"{od.name}.{cfg.scheme}.s{seed0 + j}"), kv))
    return out


def write_key(key: KeyVector, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"scheme={key.scheme}\n")
        for name, bit in key.bindings:
            f.write(f"{name} {bit}\n")


def read_key(path) -> KeyVector:
    with open(path, "r", encoding="utf-8") as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if not lines or not lines[0].startswith("scheme="):
        raise KeyMismatchError(f"{path}: missing scheme header")
    scheme = lines[0].split("=", 1)[1]
    if scheme not in (XOR_LOCK, LUT_OBF):
        raise KeyMismatchError(f"{path}: unknown scheme '{scheme}'")
    bindings = []
    for ln in lines[1:]:
        name, bit = ln.split()
        bindings.append((name, int(bit)))
    return KeyVector(scheme, tuple(bindings))
