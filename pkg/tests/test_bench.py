import pytest

from netrecon.bench import parse_bench, read_bench, write_bench
from netrecon.errors import BenchSyntaxError


def test_round_trip_is_structurally_identical(corpus):
    for n in corpus.values():
        m = parse_bench(write_bench(n), n.name)
        assert m.inputs == n.inputs
        assert m.outputs == n.outputs
        assert m.gates == n.gates


def test_read_bench_names_netlist_from_stem(bench_dir):
    n = read_bench(f"{bench_dir}/s298.bench")
    assert n.name == "s298"


def test_keywords_are_case_insensitive():
    n = parse_bench("input(a)\noutput(y)\ny = nand(a, a)\n")
    assert n.inputs == ("a",)
    assert n.gates[0].kind == "NAND"


def test_buff_is_an_alias_for_buf():
    n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUFF(a)\n")
    assert n.gates[0].kind == "BUF"


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\nINPUT(a)  # trailing\nOUTPUT(y)\ny = NOT(a)\n\n"
    n = parse_bench(text)
    assert [g.kind for g in n.gates] == ["NOT"]


def test_whitespace_tolerance():
    n = parse_bench("INPUT( a )\nOUTPUT( y )\ny  =  AND( a ,  a )\n")
    assert n.gates[0].inputs == ("a", "a")


def test_lut_width_is_inferred_from_operand_count():
    text = (
        "INPUT(a)\nINPUT(b)\nINPUT(k0)\nINPUT(k1)\nINPUT(k2)\nINPUT(k3)\n"
        "OUTPUT(y)\ny = LUT(a, b, k0, k1, k2, k3)\n"
    )
    g = parse_bench(text).gates[0]
    assert g.kind == "LUT"
    assert g.lut_width == 2
    assert g.data_inputs == ("a", "b")
    assert g.config_inputs == ("k0", "k1", "k2", "k3")


def test_lut_bad_operand_count_is_rejected():
    # 4 operands fits neither w=1 (3 total) nor w=2 (6 total)
    text = "INPUT(a)\nINPUT(b)\nINPUT(k0)\nINPUT(k1)\nOUTPUT(y)\ny = LUT(a, b, k0, k1)\n"
    with pytest.raises(BenchSyntaxError):
        parse_bench(text)


def test_unknown_gate_type_reports_line_number():
    with pytest.raises(BenchSyntaxError) as ei:
        parse_bench("INPUT(a)\nOUTPUT(y)\ny = FROB(a)\n")
    assert ei.value.line == 3


def test_malformed_operand_list_is_rejected():
    with pytest.raises(BenchSyntaxError):
        parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, , a)\n")


def test_unrecognized_statement_is_rejected():
    with pytest.raises(BenchSyntaxError):
        parse_bench("INPUT(a)\nOUTPUT(y)\ny := AND(a, a)\n")
