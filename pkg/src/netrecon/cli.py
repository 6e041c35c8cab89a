"""Command-line surface: stats, lock, verify-key, attack.

Exit codes: 0 success, 1 inequivalence, 2 parse/config error, 3 transform
error, 4 ambiguous attack verdict.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import attack as atk
from .bench import read_bench, save_bench, write_bench
from .errors import ConfigError, NetreconError, TransformError
from .heatmap import heatmap_svg
from .lock import LockConfig, apply_key, read_key, transform, write_key
from .netlist import build_hypergraph, extract_features, identify_key_inputs
from .sim import EXHAUSTIVE_LIMIT, equivalence_check
from .similarity import SimilarityConfig

EXIT_OK = 0
EXIT_INEQUIVALENT = 1
EXIT_PARSE = 2
EXIT_TRANSFORM = 3
EXIT_AMBIGUOUS = 4


def cmd_stats(args):
    n = identify_key_inputs(read_bench(args.netlist), pattern=args.key_pattern)
    f = extract_features(n)
    hg = build_hypergraph(n)
    print(f"pi={f.pi_count} po={f.po_count} ff={f.ff_count} gates={f.gate_count} "
          f"keys={len(n.key_inputs)}")
    print(f"hypergraph: vertices={len(hg.vertices)} hyperedges={len(hg.edges)}")
    return EXIT_OK


def cmd_lock(args):
    od = read_bench(args.netlist)
    if args.scheme == "xor":
        cfg = LockConfig(scheme="xor", key_width=args.bits, seed=args.seed)
    else:
        cfg = LockConfig(scheme="lut", lut_count=args.luts, lut_width=args.width,
                         seed=args.seed)
    try:
        td, key = transform(od, cfg)
    except NetreconError as e:
        print(f"transform error: {e}", file=sys.stderr)
        return EXIT_TRANSFORM
    save_bench(td, args.out)
    write_key(key, args.keyout)
    fo, ft = extract_features(od), extract_features(td)
    print(f"locked {od.name}: scheme={key.scheme} key_bits={key.width} "
          f"gates {fo.gate_count} -> {ft.gate_count}")
    return EXIT_OK


def cmd_verify_key(args):
    locked = read_bench(args.locked)
    key = read_key(args.key)
    original = read_bench(args.original)
    locked = locked.with_key_inputs([name for name, _ in key.bindings])
    unlocked = apply_key(locked, key)

    k = len(unlocked.functional_inputs) + len(unlocked.ff_outputs)
    mode = args.mode
    if mode == "auto":
        mode = "exhaustive" if k <= EXHAUSTIVE_LIMIT else "random"
    res = equivalence_check(unlocked, original, mode=mode,
                            patterns=args.patterns, seed=args.seed)
    if res.equivalent:
        print(f"EQUIVALENT ({res.mode}, {res.patterns} frames)")
        return EXIT_OK
    print(f"NOT EQUIVALENT at {res.failing_output}")
    for name in sorted(res.counterexample):
        if not name.startswith("_"):
            print(f"  {name} = {res.counterexample[name]}")
    return EXIT_INEQUIVALENT


_REQUIRED = ("target", "library_dir", "out_dir")

_DEFAULTS = {
    "scheme": "xor",
    "key_bits": "128",
    "lut_count": "8",
    "lut_width": "4",
    "variants": "4",
    "base_seed": "0",
    "patterns": "4096",
    "patterns_per_key": "256",
    "sim_seed": "0",
    "alpha": "0.5",
    "aggregate": "mean",
    "tie_epsilon": "1e-6",
    "workers": "4",
    "key_pattern": "keyinput",
}


def load_run_config(path):
    """Flat key = value file; '#' starts a comment."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values = dict(_DEFAULTS)
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            k, v = (t.strip() for t in line.split("=", 1))
            if k not in _DEFAULTS and k not in _REQUIRED:
                raise ConfigError(f"{path}:{lineno}: unknown key '{k}'")
            values[k] = v
    for k in _REQUIRED:
        if k not in values:
            raise ConfigError(f"{path}: missing required key '{k}'")
    for k in ("target", "library_dir"):
        if not os.path.exists(values[k]):
            raise ConfigError(f"{k} does not exist: {values[k]}")
    return values


def _attack_config(v) -> atk.AttackConfig:
    lock = LockConfig(
        scheme=v["scheme"],
        key_width=int(v["key_bits"]),
        lut_count=int(v["lut_count"]),
        lut_width=int(v["lut_width"]),
    )
    sim = SimilarityConfig(
        patterns=int(v["patterns"]),
        seed=int(v["sim_seed"]),
        patterns_per_key=int(v["patterns_per_key"]),
        alpha=float(v["alpha"]),
    )
    return atk.AttackConfig(
        lock=lock,
        variants=int(v["variants"]),
        base_seed=int(v["base_seed"]),
        sim=sim,
        aggregate=v["aggregate"],
        tie_epsilon=float(v["tie_epsilon"]),
        workers=int(v["workers"]),
        key_pattern=v["key_pattern"],
    )


def load_pool(library_dir) -> atk.DesignLibrary:
    entries = []
    for fname in sorted(os.listdir(library_dir)):
        if not fname.endswith(".bench"):
            continue
        path = os.path.join(library_dir, fname)
        entries.append(atk.LibraryEntry(fname[: -len(".bench")], read_bench(path),
                                        provenance=path))
    return atk.DesignLibrary(tuple(entries))


def cmd_attack(args):
    values = load_run_config(args.config)
    cfg = _attack_config(values)
    td0 = read_bench(values["target"])
    pool = load_pool(values["library_dir"])

    outcome = atk.run_attack(td0, pool, cfg)

    out_dir = values["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    m = outcome.matrix
    with open(os.path.join(out_dir, "raw.csv"), "w", encoding="utf-8") as f:
        f.write(atk.matrix_csv(m, "raw"))
    with open(os.path.join(out_dir, "normalized.csv"), "w", encoding="utf-8") as f:
        f.write(atk.matrix_csv(m, "normalized"))
    cols = [f"seed{c}" for c in m.cols]
    with open(os.path.join(out_dir, "heatmap.svg"), "w", encoding="utf-8") as f:
        f.write(heatmap_svg(m.rows, cols, m.normalized, title=td0.name))
    report = atk.outcome_report(outcome)
    with open(os.path.join(out_dir, "report.txt"), "w", encoding="utf-8") as f:
        f.write(report)
    print(report, end="")
    return EXIT_OK if outcome.is_recovered else EXIT_AMBIGUOUS


def build_parser():
    p = argparse.ArgumentParser(prog="netrecon",
                                description="Netlist locking and design-recovery workbench")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("stats", help="print I/O features of a bench netlist")
    sp.add_argument("netlist")
    sp.add_argument("--key-pattern", default="keyinput", dest="key_pattern")
    sp.set_defaults(fn=cmd_stats)

    sp = sub.add_parser("lock", help="apply a locking transform")
    sp.add_argument("netlist")
    sp.add_argument("--scheme", choices=["xor", "lut"], required=True)
    sp.add_argument("--bits", type=int, default=128, help="xor: number of key gates")
    sp.add_argument("--luts", type=int, default=8, help="lut: number of LUTs")
    sp.add_argument("--width", type=int, default=4, help="lut: data inputs per LUT")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.add_argument("--keyout", required=True)
    sp.set_defaults(fn=cmd_lock)

    sp = sub.add_parser("verify-key", help="check that a key restores the original")
    sp.add_argument("locked")
    sp.add_argument("key")
    sp.add_argument("original")
    sp.add_argument("--mode", choices=["auto", "exhaustive", "random"], default="auto")
    sp.add_argument("--patterns", type=int, default=200_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_verify_key)

    sp = sub.add_parser("attack", help="run the full recovery pipeline")
    sp.add_argument("config")
    sp.set_defaults(fn=cmd_attack)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except TransformError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TRANSFORM
    except NetreconError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
