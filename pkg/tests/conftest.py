import os

import pytest

from netrecon.bench import parse_bench, read_bench

BENCH_DIR = os.path.join(os.path.dirname(__file__), "..", "benchmarks")
CORPUS_NAMES = ["s298", "s382", "s400", "s444", "s526"]

DEMO_TEXT = """\
INPUT(a)
INPUT(b)
INPUT(c)
INPUT(d)
OUTPUT(n2)
n0 = AND(a, b)
n1 = OR(c, d)
n2 = NAND(n0, n1)
"""

SEQ_DEMO_TEXT = """\
INPUT(a)
INPUT(b)
OUTPUT(y)
q0 = DFF(n1)
q1 = DFF(y)
n0 = XOR(a, q0)
n1 = AND(b, q1)
y = NOR(n0, n1)
"""


@pytest.fixture(scope="session")
def bench_dir():
    return BENCH_DIR


@pytest.fixture(scope="session")
def corpus():
    return {
        name: read_bench(os.path.join(BENCH_DIR, f"{name}.bench"))
        for name in CORPUS_NAMES
    }


@pytest.fixture
def demo():
    return parse_bench(DEMO_TEXT, "demo")


@pytest.fixture
def seq_demo():
    return parse_bench(SEQ_DEMO_TEXT, "seqdemo")
