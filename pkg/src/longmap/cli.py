"""Command-line harness: differential fuzzing, trace replay, invariant
checking of serialized states, and occupancy benchmarks.

Exit codes: 0 success, 1 contract/invariant violation, 2 bad flags or
unparseable input. All output except bench latency figures is deterministic
given identical flags and seeds.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .bench import BenchReport, run_bench
from .conformance import (
    FuzzConfig,
    TraceParseError,
    equivalence_violation,
    generate_trace,
    read_trace,
    run_trace,
    write_trace,
)
from .core import MAX_MASK, FixedLongMap, is_valid_key
from .growable import GrowableLongMap
from .invariants import check as check_invariant


class StateParseError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def dump_state(m: FixedLongMap) -> str:
    """Serialize a map state: mask and extras headers, then nonzero slots."""
    lines = [f"mask {m.mask}", f"extra {m.extra_keys} {m.zero_value} {m.min_value}"]
    for i, k in enumerate(m.keys):
        v = m.values[i]
        if k != 0 or v != 0:
            lines.append(f"slot {i} {k} {v}")
    return "\n".join(lines) + "\n"


def save_state(m: FixedLongMap, path) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(dump_state(m))


def _parse_int(text: str, ln: int, what: str, lo: int, hi: int) -> int:
    try:
        v = int(text)
    except ValueError:
        raise StateParseError(ln, f"{what} is not an integer: {text!r}") from None
    if not lo <= v <= hi:
        raise StateParseError(ln, f"{what} {v} outside [{lo}, {hi}]")
    return v


I64_MIN = -(1 << 63)
I64_MAX = (1 << 63) - 1


def parse_state(text: str) -> FixedLongMap:
    """Parse a serialized state; the result may violate the invariant (that
    is for the checker to report), but must at least be buildable."""
    lines = text.splitlines()
    if len(lines) < 2:
        raise StateParseError(1, "expected 'mask' and 'extra' header lines")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "mask":
        raise StateParseError(1, f"expected 'mask <decimal>', got {lines[0]!r}")
    mask = _parse_int(head[1], 1, "mask", 0, MAX_MASK)
    extra_line = lines[1].split()
    if len(extra_line) != 4 or extra_line[0] != "extra":
        raise StateParseError(2, f"expected 'extra <keys> <zero> <min>', got {lines[1]!r}")
    extra_keys = _parse_int(extra_line[1], 2, "extra_keys", I64_MIN, I64_MAX)
    zero_value = _parse_int(extra_line[2], 2, "zero_value", I64_MIN, I64_MAX)
    min_value = _parse_int(extra_line[3], 2, "min_value", I64_MIN, I64_MAX)

    keys = [0] * (mask + 1)
    values = [0] * (mask + 1)
    seen: set = set()
    for ln, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "slot":
            raise StateParseError(ln, f"expected 'slot <i> <key> <value>', got {line!r}")
        i = _parse_int(parts[1], ln, "slot index", 0, mask)
        if i in seen:
            raise StateParseError(ln, f"slot {i} listed twice")
        seen.add(i)
        keys[i] = _parse_int(parts[2], ln, "key", I64_MIN, I64_MAX)
        values[i] = _parse_int(parts[3], ln, "value", I64_MIN, I64_MAX)

    array_size = sum(1 for k in keys if is_valid_key(k))
    return FixedLongMap.unchecked(mask, keys, values, array_size, extra_keys, zero_value, min_value)


def load_state(path) -> FixedLongMap:
    with open(path, "r", encoding="ascii") as f:
        return parse_state(f.read())


def _mask_exp(value: str) -> int:
    n = int(value)
    if not 0 <= n <= 30:
        raise argparse.ArgumentTypeError(f"mask exponent must be in 0..30, got {n}")
    return n


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longmap",
        description="Fuzz, replay, benchmark and check the 64-bit open-addressing map.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuzz", help="run a differential fuzz trace against the model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ops", type=int, default=10000)
    p.add_argument("--mask-exp", type=_mask_exp, required=True)
    p.add_argument("--sentinel-weight", type=float, default=0.05)
    p.add_argument("--pool", type=int, default=None, help="key pool size (default 2x capacity)")
    p.add_argument("--growable", action="store_true", help="drive a growable map (start exponent 1)")
    p.add_argument("--trace-out", default="divergence.trace", help="minimized trace on divergence")
    p.add_argument("--emit-trace", default=None, help="write the generated trace to this path")
    p.add_argument("--dump-state", default=None, help="write the final map state to this path")

    p = sub.add_parser("replay", help="replay a trace file with full contract checking")
    p.add_argument("trace")

    p = sub.add_parser("bench", help="occupancy-factor benchmark")
    p.add_argument("--mask-exp", type=_mask_exp, required=True)
    p.add_argument("--levels", default="0.1,0.25,0.5,0.7,0.9")
    p.add_argument("--ops-per-level", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--growable", action="store_true")
    p.add_argument("--out", default=None, help="write the report as JSON to this path")

    p = sub.add_parser("check", help="check invariants of a serialized map state")
    p.add_argument("state")
    return parser


def _growable_factory(mask: int, default_entry) -> GrowableLongMap:
    # Fuzz traces drive the growable map from the smallest useful capacity so
    # growth events actually happen; the trace mask only sizes the key pool.
    return GrowableLongMap(1, default_entry)


def cmd_fuzz(args) -> int:
    try:
        cfg = FuzzConfig(
            seed=args.seed,
            op_count=args.ops,
            mask_exponent=args.mask_exp,
            key_pool_size=args.pool,
            sentinel_weight=args.sentinel_weight,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    mask, ops = generate_trace(cfg)
    if args.emit_trace:
        write_trace(args.emit_trace, mask, ops)

    kwargs = {"seed": cfg.seed}
    if args.growable:
        kwargs["map_factory"] = _growable_factory
        kwargs["invariant_stride"] = 64
    result = run_trace(ops, mask, **kwargs)

    print(f"seed {cfg.seed}")
    print(f"mask-exponent {cfg.mask_exponent}")
    print(f"mode {'growable' if args.growable else 'fixed'}")
    print(f"ops {result.ops_run}")
    counts = " ".join(f"{k}={result.counts.get(k, 0)}" for k in ("U", "R", "G", "C"))
    print(f"counts {counts}")
    print(f"invariant-checks {result.invariant_checks}")
    print(f"equivalence-checks {result.equivalence_checks}")
    print(f"final-size {result.final_size}")

    if args.dump_state:
        final = getattr(result.final_map, "inner", result.final_map)
        save_state(final, args.dump_state)

    if result.divergence is None:
        print("result OK")
        return 0
    d = result.divergence
    print(f"result DIVERGENCE at op {d.op_index}: {d.message}")
    minimized = result.minimized or []
    write_trace(args.trace_out, mask, minimized)
    print(f"minimized {len(minimized)} ops -> {args.trace_out}")
    return 1


def cmd_replay(args) -> int:
    try:
        mask, ops = read_trace(args.trace)
    except TraceParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    result = run_trace(ops, mask, shrink=False)
    print(f"ops {result.ops_run}")
    print(f"final-size {result.final_size}")
    if result.divergence is None:
        print("result OK")
        return 0
    d = result.divergence
    print(f"result VIOLATION at op {d.op_index}: {d.message}")
    return 1


def cmd_bench(args) -> int:
    try:
        levels = [float(part) for part in args.levels.split(",") if part]
    except ValueError:
        print(f"error: bad --levels value {args.levels!r}", file=sys.stderr)
        return 2
    try:
        report = run_bench(
            args.mask_exp,
            levels,
            args.ops_per_level,
            seed=args.seed,
            growable=args.growable,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    _print_bench(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(_bench_json(report), f, indent=2)
        print(f"report -> {args.out}")
    return 0


def _print_bench(report: BenchReport) -> None:
    print(f"capacity {report.capacity}  mode {report.mode}  ops-per-level {report.ops_per_level}")
    header = f"{'target':>8} {'achieved':>9} {'mean-probe':>11} " + " ".join(
        f"{name:>18}" for name in ("get med/p99 ns", "upd med/p99 ns", "rm med/p99 ns")
    )
    print(header)
    for lv in report.levels:
        cells = []
        for op in ("get", "update", "remove"):
            lat = lv.latency_ns.get(op)
            cells.append(f"{lat['median']:.0f}/{lat['p99']:.0f}" if lat else "-")
        print(
            f"{lv.target_occupancy:>8.3f} {lv.achieved_occupancy:>9.3f} "
            f"{lv.mean_probe_length:>11.3f} " + " ".join(f"{c:>18}" for c in cells)
        )


def _bench_json(report: BenchReport) -> dict:
    doc = dataclasses.asdict(report)
    for lv in doc["levels"]:
        lv["probe_histogram"] = {str(k): v for k, v in sorted(lv["probe_histogram"].items())}
    return doc


def cmd_check(args) -> int:
    try:
        m = load_state(args.state)
    except StateParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = check_invariant(m)
    print(f"simple_valid {str(report.simple_valid).lower()}")
    print(f"count_matches_size {str(report.count_matches_size).lower()}")
    print(f"all_keys_seekable {str(report.all_keys_seekable).lower()}")
    print(f"no_duplicates {str(report.no_duplicates).lower()}")
    if report.first_violation:
        print(f"violation {report.first_violation}")

    eq = equivalence_violation(m)
    print(f"equivalence {'ok' if eq is None else eq}")
    print(f"valid {str(report.valid and eq is None).lower()}")
    return 0 if report.valid and eq is None else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "fuzz":
        return cmd_fuzz(args)
    if args.command == "replay":
        return cmd_replay(args)
    if args.command == "bench":
        return cmd_bench(args)
    return cmd_check(args)


if __name__ == "__main__":
    sys.exit(main())
