import pytest

from netrecon.errors import (
    BadArityError,
    CombinationalLoopError,
    MultipleDriversError,
    NotACutPointError,
    PolicyConflictError,
    UndrivenNetError,
)
from netrecon.bench import parse_bench
from netrecon.netlist import (
    Gate,
    Netlist,
    build_hypergraph,
    extract_features,
    fanin_cone,
    identify_key_inputs,
)

from helpers import rename_permute


# -- construction-time validation -------------------------------------------


def test_multiple_drivers_rejected():
    with pytest.raises(MultipleDriversError):
        Netlist("t", ["a"], ["y"], [Gate("y", "NOT", ("a",)), Gate("y", "BUF", ("a",))])


def test_duplicate_input_rejected():
    with pytest.raises(MultipleDriversError):
        Netlist("t", ["a", "a"], [], [])


def test_undriven_net_rejected():
    with pytest.raises(UndrivenNetError):
        Netlist("t", ["a"], ["y"], [Gate("y", "AND", ("a", "ghost"))])


def test_undriven_output_rejected():
    with pytest.raises(UndrivenNetError):
        Netlist("t", ["a"], ["ghost"], [Gate("y", "NOT", ("a",))])


def test_bad_arity_rejected():
    with pytest.raises(BadArityError):
        Netlist("t", ["a"], ["y"], [Gate("y", "NOT", ("a", "a"))])
    with pytest.raises(BadArityError):
        Netlist("t", ["a"], ["y"], [Gate("y", "AND", ("a",))])


def test_combinational_loop_reports_cycle():
    gates = [
        Gate("x", "NOT", ("y",)),
        Gate("y", "NOT", ("x",)),
        Gate("z", "AND", ("a", "x")),
    ]
    with pytest.raises(CombinationalLoopError) as ei:
        Netlist("t", ["a"], ["z"], gates)
    cyc = ei.value.cycle
    assert cyc[0] == cyc[-1]
    assert set(cyc) == {"x", "y"}


def test_dff_breaks_cycles():
    # x -> q (through a DFF) -> x is sequential, not combinational
    gates = [Gate("q", "DFF", ("x",)), Gate("x", "NOT", ("q",))]
    n = Netlist("t", [], ["x"], gates)
    assert n.ff_outputs == ("q",)


def test_topo_order_respects_dependencies(corpus):
    for n in corpus.values():
        seen = set(n.inputs) | set(n.ff_outputs)
        for g in n.topo_gates:
            assert all(p in seen for p in g.inputs)
            seen.add(g.output)


# -- views --------------------------------------------------------------------


def test_cut_points_order_pos_then_ffs(seq_demo):
    cuts = seq_demo.cut_points()
    assert cuts == [
        ("po", 0, "y", "y"),
        ("ff", 0, "q0", "n1"),
        ("ff", 1, "q1", "y"),
    ]


def test_fanout_lists_every_use(demo):
    fo = demo.fanout()
    assert [(g.output, i) for g, i in fo["n0"]] == [("n2", 0)]
    assert fo["n2"] == []


def test_features_demo(demo, seq_demo):
    f = extract_features(demo)
    assert (f.pi_count, f.po_count, f.ff_count, f.gate_count) == (4, 1, 0, 3)
    f = extract_features(seq_demo)
    assert (f.pi_count, f.po_count, f.ff_count, f.gate_count) == (2, 1, 2, 3)


def test_features_invariant_under_rename_permute(corpus):
    for n in corpus.values():
        assert extract_features(rename_permute(n)) == extract_features(n)


def test_hypergraph_vertices_are_logic_gates_only(seq_demo):
    hg = build_hypergraph(seq_demo)
    assert set(hg.vertices) == {"n0", "n1", "y"}
    # FF data pins appear as ff: sink markers, POs as po: markers
    assert "ff:q0" in hg.edges["n1"].sinks
    assert "po:y" in hg.edges["y"].sinks
    assert "ff:q1" in hg.edges["y"].sinks
    assert len(hg.edges) == len(seq_demo.nets)


# -- fanin cones ---------------------------------------------------------------


def test_fanin_cone_demo(demo):
    cone = fanin_cone(demo, "n2")
    assert set(cone.gates) == {"n0", "n1", "n2"}
    assert cone.depth == 2
    assert cone.support_pi == {"a", "b", "c", "d"}
    assert cone.support_ff == frozenset()
    assert cone.kind_histogram == {"AND": 1 / 3, "NAND": 1 / 3, "OR": 1 / 3}


def test_fanin_cone_stops_at_ff_outputs(seq_demo):
    cone = fanin_cone(seq_demo, "n1")
    assert set(cone.gates) == {"n1"}
    assert cone.support_pi == {"b"}
    assert cone.support_ff == {"q1"}
    assert cone.depth == 1


def test_fanin_cone_rejects_internal_net(demo):
    with pytest.raises(NotACutPointError):
        fanin_cone(demo, "n0")


def _bfs_cone_oracle(n, cut):
    """Independent reverse-BFS reference for cone membership and support."""
    sources = set(n.inputs) | set(n.ff_outputs)
    gates, support, queue = set(), set(), [cut]
    while queue:
        net = queue.pop()
        if net in sources:
            support.add(net)
            continue
        g = n.driver[net]
        if g.kind == "DFF" or net in gates:
            continue
        gates.add(net)
        queue.extend(g.inputs)
    return gates, support


def test_fanin_cone_matches_bfs_oracle(corpus):
    n = corpus["s298"]
    for _, _, _, cut_net in n.cut_points():
        cone = fanin_cone(n, cut_net)
        gates, support = _bfs_cone_oracle(n, cut_net)
        assert set(cone.gates) == gates
        assert cone.support == support or (not gates and cone.support == {cut_net})


# -- key-input identification ---------------------------------------------------


KEYED_TEXT = """\
INPUT(a)
INPUT(b)
INPUT(keyinput0)
OUTPUT(y)
n0 = AND(a, b)
y = XOR(n0, keyinput0)
"""


def test_identify_by_naming():
    n = identify_key_inputs(parse_bench(KEYED_TEXT), "naming")
    assert n.key_inputs == {"keyinput0"}
    assert n.functional_inputs == ("a", "b")


def test_identify_by_structure():
    n = identify_key_inputs(parse_bench(KEYED_TEXT), "structural")
    assert n.key_inputs == {"keyinput0"}


def test_policy_conflict_raised():
    # key-named input used as a plain AND fanin: naming says key, structure no
    text = "INPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\ny = AND(a, keyinput0)\n"
    with pytest.raises(PolicyConflictError):
        identify_key_inputs(parse_bench(text), "both")


def test_structural_flags_lut_config_pins():
    text = (
        "INPUT(a)\nINPUT(b)\nINPUT(k0)\nINPUT(k1)\nINPUT(k2)\nINPUT(k3)\n"
        "OUTPUT(y)\ny = LUT(a, b, k0, k1, k2, k3)\n"
    )
    n = identify_key_inputs(parse_bench(text), "structural")
    assert n.key_inputs == {"k0", "k1", "k2", "k3"}
