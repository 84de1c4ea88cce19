"""Differential checking of FixedLongMap against the ListMap model.

Provides model extraction from concrete map state, the array/model
equivalence conditions, agreement checks between the two seek functions, and
a deterministic randomized trace runner that executes every operation on both
the array map and the model twin, asserting the public-contract relations
after each step. A divergence is reported with its seed and op index and a
minimized reproducing trace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    LONG_MIN,
    Found,
    FixedLongMap,
    MissingVacant,
    MissingZero,
    Undefined,
    is_valid_key,
    seek_entry,
    seek_entry_or_open,
    valid_mask,
    zero_entry,
)
from .invariants import check as check_invariant
from .listmap import ListMap

OP_KINDS = ("U", "R", "G", "C")


@dataclass(frozen=True)
class TraceOp:
    """One replayable map operation: Update / Remove / Get / Contains."""

    kind: str
    key: int
    value: int = 0


@dataclass
class FuzzConfig:
    seed: int
    op_count: int
    mask_exponent: int
    key_pool_size: Optional[int] = None  # default: 2 * capacity
    sentinel_weight: float = 0.05  # probability of drawing each of 0 and LONG_MIN

    def __post_init__(self):
        if not 0 <= self.mask_exponent <= 30:
            raise ValueError(f"mask_exponent outside 0..30: {self.mask_exponent}")
        if self.op_count <= 0:
            raise ValueError("op_count must be positive")
        if not 0.0 <= self.sentinel_weight <= 0.5:
            raise ValueError("sentinel_weight must be in [0, 0.5]")
        if self.key_pool_size is not None and self.key_pool_size <= 0:
            raise ValueError("key_pool_size must be positive")

    @property
    def mask(self) -> int:
        return (1 << self.mask_exponent) - 1


@dataclass
class Divergence:
    op_index: int
    op: TraceOp
    message: str


@dataclass
class TraceResult:
    ops_run: int
    mask: int
    final_size: int
    counts: dict = field(default_factory=dict)
    invariant_checks: int = 0
    equivalence_checks: int = 0
    divergence: Optional[Divergence] = None
    minimized: Optional[list] = None
    seed: Optional[int] = None
    final_map: object = None

    @property
    def ok(self) -> bool:
        return self.divergence is None


def snapshot_model(m) -> ListMap:
    """Extract the ListMap mirroring the concrete state of ``m``.

    Folds every valid-key slot into the model (first occurrence wins, which
    matches folding recursively from the array end), then adds the sentinel
    pairs recorded in extra_keys.
    """
    pairs: dict[int, int] = {}
    values = m.values
    for i, k in enumerate(m.keys):
        if k != 0 and k != LONG_MIN and k not in pairs:
            pairs[k] = values[i]
    if m.extra_keys & 1:
        pairs[0] = m.zero_value
    if m.extra_keys & 2:
        pairs[LONG_MIN] = m.min_value
    return ListMap._from_sorted(tuple(sorted(pairs.items())))


def equivalence_violation(m, model: Optional[ListMap] = None) -> Optional[str]:
    """First violated array/model equivalence condition, or None.

    The four conditions tie ``model`` (by default the freshly extracted
    snapshot) to the arrays: model keys occur in the array, stored keys occur
    in the model (per index and per key), and the model value of each stored
    key equals the value array entry.
    """
    if model is None:
        model = snapshot_model(m)
    stored = {k for k in m.keys if is_valid_key(k)}

    for k, _ in model.items():
        if is_valid_key(k) and k not in stored:
            return f"model key {k} does not occur in the key array"
    for i, k in enumerate(m.keys):
        if not is_valid_key(k):
            continue
        if not model.contains(k):
            return f"key {k} at index {i} is missing from the model"
        if model.apply(k) != m.values[i]:
            return (
                f"value mismatch for key {k} at index {i}: "
                f"model {model.apply(k)} != array {m.values[i]}"
            )
    for k in stored:
        if not model.contains(k):
            return f"array key {k} is missing from the model"
    return None


def check_equivalence(m, model: Optional[ListMap] = None) -> bool:
    return equivalence_violation(m, model) is None


def seek_agreement_violation(keys, mask: int, k: int) -> Optional[str]:
    """Check the seek_entry / seek_entry_or_open agreement relation for ``k``.

    Requires an invariant-satisfying array (every stored key seekable, no
    duplicates) and a valid ``k``. Found and Undefined outcomes must
    coincide; a MissingVacant(i) from seek_entry_or_open must appear as
    MissingZero(i) from seek_entry; and a key present in the array must
    always be Found.
    """
    a = seek_entry(k, keys, mask)
    b = seek_entry_or_open(k, keys, mask)

    if isinstance(b, Found):
        if a != b:
            return f"found disagreement for {k}: seek_entry {a}, or_open {b}"
        if keys[b.index] != k:
            return f"Found({b.index}) for {k} but slot holds {keys[b.index]}"
    elif isinstance(b, Undefined):
        if not isinstance(a, Undefined):
            return f"undefined disagreement for {k}: seek_entry {a}"
    elif isinstance(b, MissingZero):
        if a != MissingZero(b.index):
            return f"missing-zero disagreement for {k}: seek_entry {a}, or_open {b}"
        if keys[b.index] != 0:
            return f"MissingZero({b.index}) for {k} but slot holds {keys[b.index]}"
    elif isinstance(b, MissingVacant):
        if a != MissingZero(b.index):
            return f"relabel disagreement for {k}: seek_entry {a}, or_open {b}"
        if keys[b.index] != LONG_MIN:
            return f"MissingVacant({b.index}) for {k} but slot holds {keys[b.index]}"

    if not isinstance(b, Found) and k in keys:
        return f"key {k} is present in the array but seek returned {b}"
    return None


def seek_agreement_property(keys, mask: int, k: int) -> bool:
    return seek_agreement_violation(keys, mask, k) is None


def generate_trace(cfg: FuzzConfig) -> tuple[int, list]:
    """Deterministically generate (mask, ops) from a fuzz config.

    Keys are drawn from a small fixed pool (default twice the capacity) so
    collisions, tombstone reuse and capacity exhaustion actually happen;
    sentinels 0 and LONG_MIN are drawn with elevated probability.
    """
    rng = random.Random(cfg.seed)
    mask = cfg.mask
    pool_size = cfg.key_pool_size or 2 * (mask + 1)
    pool: list[int] = []
    seen = {0, LONG_MIN}
    while len(pool) < pool_size:
        k = rng.getrandbits(64) - (1 << 63)
        if k not in seen:
            seen.add(k)
            pool.append(k)

    w = cfg.sentinel_weight

    def draw_key() -> int:
        r = rng.random()
        if r < w:
            return 0
        if r < 2 * w:
            return LONG_MIN
        return pool[rng.randrange(pool_size)]

    ops = []
    for _ in range(cfg.op_count):
        kind = rng.choices(OP_KINDS, weights=(45, 25, 15, 15))[0]
        key = draw_key()
        value = rng.getrandbits(64) - (1 << 63) if kind == "U" else 0
        ops.append(TraceOp(kind, key, value))
    return mask, ops


def _default_stride(capacity: int) -> int:
    return 1 if capacity <= 64 else 64


def _apply_checked(m, model: ListMap, op: TraceOp, default_entry) -> tuple[ListMap, Optional[str]]:
    """Run one op on both twins; return the new model and a divergence message."""
    k = op.key
    if op.kind == "U":
        ok = m.update(k, op.value)
        if ok:
            model = model.insert(k, op.value)
            if not m.contains(k):
                return model, f"update({k}) returned True but contains is False"
        # On False the model is unchanged; snapshot equality below verifies
        # the map was left untouched.
    elif op.kind == "R":
        ok = m.remove(k)
        if ok:
            model = model.remove(k)
    elif op.kind == "G":
        want = model.get(k)
        if want is None:
            want = default_entry(k)
        got = m.get(k)
        if got != want:
            return model, f"get({k}) = {got}, model expects {want}"
    elif op.kind == "C":
        got = m.contains(k)
        want = model.contains(k)
        if got != want:
            return model, f"contains({k}) = {got}, model expects {want}"
    else:
        return model, f"unknown op kind {op.kind!r}"
    return model, None


def run_trace(
    ops,
    mask: int,
    *,
    default_entry: Callable[[int], int] = zero_entry,
    map_factory: Optional[Callable] = None,
    invariant_stride: Optional[int] = None,
    equivalence_stride: Optional[int] = None,
    shrink: bool = True,
    seed: Optional[int] = None,
) -> TraceResult:
    """Execute ``ops`` differentially against the model, checking contracts.

    After every op the twins must agree observably and snapshot_model must
    equal the model; the invariant and the equivalence conditions are checked
    every ``stride`` ops (default 1 for capacity <= 64, else 64). The first
    divergence stops the run; with ``shrink`` a minimized reproducing trace
    is attached to the result.
    """
    ops = list(ops)
    if map_factory is None:
        map_factory = FixedLongMap
    if invariant_stride is None:
        invariant_stride = _default_stride(mask + 1)
    if equivalence_stride is None:
        equivalence_stride = invariant_stride

    m = map_factory(mask, default_entry)
    model = ListMap.empty()
    counts = {kind: 0 for kind in OP_KINDS}
    inv_checks = 0
    eq_checks = 0
    divergence = None

    for idx, op in enumerate(ops):
        counts[op.kind] = counts.get(op.kind, 0) + 1
        model, msg = _apply_checked(m, model, op, default_entry)
        inner = getattr(m, "inner", m)
        if msg is None:
            snap = snapshot_model(inner)
            if snap != model:
                msg = f"snapshot {snap} != model {model}"
        if msg is None and (idx + 1) % invariant_stride == 0:
            inv_checks += 1
            report = check_invariant(inner)
            if not report.valid:
                msg = f"invariant violated: {report.first_violation}"
        if msg is None and (idx + 1) % equivalence_stride == 0:
            eq_checks += 1
            eq = equivalence_violation(inner, model)
            if eq is not None:
                msg = f"equivalence violated: {eq}"
        if msg is not None:
            divergence = Divergence(idx, op, msg)
            break

    minimized = None
    if divergence is not None and shrink:
        minimized = _shrink_trace(
            list(ops[: divergence.op_index + 1]),
            mask,
            default_entry=default_entry,
            map_factory=map_factory,
            invariant_stride=invariant_stride,
            equivalence_stride=equivalence_stride,
        )

    return TraceResult(
        ops_run=(divergence.op_index + 1) if divergence else len(ops),
        mask=mask,
        final_size=m.size,
        counts=counts,
        invariant_checks=inv_checks,
        equivalence_checks=eq_checks,
        divergence=divergence,
        minimized=minimized,
        seed=seed,
        final_map=m,
    )


def _diverges(ops, mask, **kw) -> bool:
    return run_trace(ops, mask, shrink=False, **kw).divergence is not None


def _shrink_trace(ops, mask, **kw) -> list:
    """Greedy chunk removal keeping any candidate that still diverges."""
    current = ops
    chunk = max(1, len(current) // 2)
    while chunk >= 1:
        i = 0
        while i < len(current):
            candidate = current[:i] + current[i + chunk :]
            if candidate and _diverges(candidate, mask, **kw):
                current = candidate
            else:
                i += chunk
        chunk //= 2
    return current


def run_fuzz(cfg: FuzzConfig, **kwargs) -> TraceResult:
    """Generate a trace from ``cfg`` and run it; the seed rides along."""
    mask, ops = generate_trace(cfg)
    return run_trace(ops, mask, seed=cfg.seed, **kwargs)


class TraceParseError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def format_trace(mask: int, ops) -> str:
    """Render a trace in the line format consumed by read_trace."""
    lines = [f"mask {mask}"]
    for op in ops:
        if op.kind == "U":
            lines.append(f"U {op.key} {op.value}")
        else:
            lines.append(f"{op.kind} {op.key}")
    return "\n".join(lines) + "\n"


def write_trace(path, mask: int, ops) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(format_trace(mask, ops))


def _parse_i64(text: str, line_number: int, what: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise TraceParseError(line_number, f"{what} is not an integer: {text!r}") from None
    if not -(1 << 63) <= v < (1 << 63):
        raise TraceParseError(line_number, f"{what} outside signed 64-bit range: {v}")
    return v


def parse_trace(text: str) -> tuple[int, list]:
    """Parse trace text into (mask, ops); raises TraceParseError."""
    lines = text.splitlines()
    if not lines:
        raise TraceParseError(1, "empty trace")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "mask":
        raise TraceParseError(1, f"expected 'mask <decimal>', got {lines[0]!r}")
    mask = _parse_i64(header[1], 1, "mask")
    if not valid_mask(mask):
        raise TraceParseError(1, f"mask {mask} is not 2**n - 1 with n <= 30")

    ops = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "U":
            if len(parts) != 3:
                raise TraceParseError(ln, f"U takes key and value, got {line!r}")
            ops.append(
                TraceOp("U", _parse_i64(parts[1], ln, "key"), _parse_i64(parts[2], ln, "value"))
            )
        elif kind in ("R", "G", "C"):
            if len(parts) != 2:
                raise TraceParseError(ln, f"{kind} takes a key, got {line!r}")
            ops.append(TraceOp(kind, _parse_i64(parts[1], ln, "key")))
        else:
            raise TraceParseError(ln, f"unknown op {kind!r}")
    return mask, ops


def read_trace(path) -> tuple[int, list]:
    with open(path, "r", encoding="ascii") as f:
        return parse_trace(f.read())
