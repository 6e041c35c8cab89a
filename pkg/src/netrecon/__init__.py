"""netrecon: gate-level netlist locking and library-based design recovery."""

from .bench import parse_bench, read_bench, save_bench, write_bench
from .lock import KeyVector, LockConfig, apply_key, generate_variants, lut_obfuscate, xor_lock
from .netlist import (
    Gate,
    IoFeatures,
    Netlist,
    build_hypergraph,
    extract_features,
    fanin_cone,
    identify_key_inputs,
)
from .sim import equivalence_check, signatures, simulate
from .similarity import SimilarityConfig, match_cutpoints, netlist_similarity, pair_similarity, profile_cutpoints

__version__ = "0.1.0"

__all__ = [
    "Gate",
    "IoFeatures",
    "KeyVector",
    "LockConfig",
    "Netlist",
    "SimilarityConfig",
    "apply_key",
    "build_hypergraph",
    "equivalence_check",
    "extract_features",
    "fanin_cone",
    "generate_variants",
    "identify_key_inputs",
    "lut_obfuscate",
    "match_cutpoints",
    "netlist_similarity",
    "pair_similarity",
    "parse_bench",
    "profile_cutpoints",
    "read_bench",
    "save_bench",
    "signatures",
    "simulate",
    "write_bench",
    "xor_lock",
]
