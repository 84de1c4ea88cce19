"""Fixed-capacity open-addressing hash map for 64-bit signed integer keys.

Keys and values are signed 64-bit integers. The backing arrays have a
power-of-two length ``mask + 1`` (at most 2**30); collisions are resolved by
quadratic probing. Two key values are unrepresentable in the key array
because they mark slot states: 0 means "never used" and LONG_MIN marks a
tombstone (a slot whose key was removed). Mappings for the keys 0 and
LONG_MIN therefore live in side fields (``extra_keys`` bits 0/1 plus
``zero_value`` / ``min_value``).

Every probe loop gives up after ``MAX_PROBES`` slot inspections and reports
``Undefined``; ``update`` surfaces this as a ``False`` return instead of
looping forever on a map with no reachable free slot.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Callable, Optional

LONG_MIN = -(1 << 63)
LONG_MAX = (1 << 63) - 1

MAX_MASK_EXPONENT = 30
MAX_MASK = (1 << MAX_MASK_EXPONENT) - 1

# Probe-loop iteration cap; reaching it yields Undefined.
MAX_PROBES = 2048

_U64 = (1 << 64) - 1
_U32 = (1 << 32) - 1


def zero_entry(key: int) -> int:
    """Default entry used by the test harness: every absent key maps to 0."""
    return 0


def valid_mask(mask: int) -> bool:
    """True iff mask == 2**n - 1 for some 0 <= n <= 30."""
    return 0 <= mask <= MAX_MASK and (mask & (mask + 1)) == 0


def is_valid_key(key: int) -> bool:
    """True iff ``key`` may be stored in the key array (not 0, not LONG_MIN)."""
    return key != 0 and key != LONG_MIN


def _is_zero_or_min(key: int) -> bool:
    # Wrapping-negation test: 0 and LONG_MIN are the only 64-bit values equal
    # to their own (wrapped) negation. Python negation does not wrap, so
    # compare the 64-bit patterns explicitly.
    return ((-key) & _U64) == (key & _U64)


def to_index(key: int, mask: int) -> int:
    """Hash a 64-bit key to a slot index in [0, mask].

    All shifts are logical and all 32-bit arithmetic wraps modulo 2**32.
    """
    k = key & _U64
    h = (k ^ (k >> 32)) & _U32
    x = ((h ^ (h >> 16)) * 0x85EBCA6B) & _U32
    return (x ^ (x >> 13)) & mask


def next_probe(e: int, x: int, mask: int) -> int:
    """Next slot after ``e`` on probe iteration ``x`` (caller pre-increments x)."""
    # mask + 1 divides 2**32, so masking directly matches 32-bit wraparound.
    return (e + 2 * (x + 1) * x - 3) & mask


class SeekResult:
    """Outcome of probing for a key."""

    __slots__ = ()


@dataclass(frozen=True)
class Found(SeekResult):
    index: int


@dataclass(frozen=True)
class MissingZero(SeekResult):
    index: int


@dataclass(frozen=True)
class MissingVacant(SeekResult):
    index: int


@dataclass(frozen=True)
class Undefined(SeekResult):
    pass


@dataclass(frozen=True)
class Intermediate(SeekResult):
    """Internal handoff between the two probe phases; never escapes the seeks."""

    undefined: bool
    index: int
    x: int


UNDEFINED = Undefined()

# Optional instrumentation hook: called as hook(result, iterations) by
# seek_entry / seek_entry_or_open. Must stay None in production paths.
probe_audit: Optional[Callable[[SeekResult, int], None]] = None


def seek_key_or_zero_or_min(x: int, e: int, k: int, keys, mask: int) -> Intermediate:
    """Probe from slot ``e`` until a slot holds ``k``, 0 or LONG_MIN.

    Returns Intermediate(False, stop_index, stop_x) for a stopping slot, or
    Intermediate(True, e, x) once ``MAX_PROBES`` iterations elapse.
    """
    while x < MAX_PROBES:
        q = keys[e]
        if q == k or q == 0 or q == LONG_MIN:
            return Intermediate(False, e, x)
        x += 1
        e = (e + 2 * (x + 1) * x - 3) & mask
    return Intermediate(True, e, x)


def _seek_vacant_traced(
    x: int, e: int, vacant: int, k: int, keys, mask: int
) -> tuple[SeekResult, int]:
    while x < MAX_PROBES:
        q = keys[e]
        if q == k:
            return Found(e), x
        if q == 0:
            return MissingVacant(vacant), x
        x += 1
        e = (e + 2 * (x + 1) * x - 3) & mask
    return UNDEFINED, x


def seek_key_or_zero_return_vacant(
    x: int, e: int, vacant: int, k: int, keys, mask: int
) -> SeekResult:
    """Second probe phase, entered after a tombstone was seen at ``vacant``.

    Finds ``k`` -> Found(index); finds 0 -> MissingVacant(vacant), i.e. the
    remembered tombstone is the slot to reuse; probe budget exhausted ->
    Undefined.
    """
    return _seek_vacant_traced(x, e, vacant, k, keys, mask)[0]


def _seek_entry_or_open_traced(k: int, keys, mask: int) -> tuple[SeekResult, int]:
    inter = seek_key_or_zero_or_min(0, to_index(k, mask), k, keys, mask)
    if inter.undefined:
        return UNDEFINED, inter.x
    q = keys[inter.index]
    if q == k:
        return Found(inter.index), inter.x
    if q == 0:
        return MissingZero(inter.index), inter.x
    # Tombstone: remember it and keep probing for k or a 0 slot, reusing the
    # iteration counter so the overall budget stays MAX_PROBES.
    return _seek_vacant_traced(inter.x, inter.index, inter.index, k, keys, mask)


def seek_entry_or_open(k: int, keys, mask: int) -> SeekResult:
    """Probe for ``k`` or for the slot an insert of ``k`` should use.

    Found(i): keys[i] == k. MissingZero(i): k absent, keys[i] == 0 and no
    tombstone was crossed. MissingVacant(i): k absent, keys[i] == LONG_MIN is
    the first tombstone crossed before the terminating 0. Undefined: probe
    budget exhausted.
    """
    res, iters = _seek_entry_or_open_traced(k, keys, mask)
    if probe_audit is not None:
        probe_audit(res, iters)
    return res


def seek_entry(k: int, keys, mask: int) -> SeekResult:
    """Probe for ``k`` only; misses are reported as MissingZero.

    Same probe sequence as seek_entry_or_open with every MissingVacant
    relabeled MissingZero. The index carried by MissingZero may point at a
    tombstone rather than a 0 slot and must not be used by callers.
    """
    res, iters = _seek_entry_or_open_traced(k, keys, mask)
    if isinstance(res, MissingVacant):
        res = MissingZero(res.index)
    if probe_audit is not None:
        probe_audit(res, iters)
    return res


def seek_entry_traced(k: int, keys, mask: int) -> tuple[SeekResult, int]:
    """seek_entry plus the number of probe iterations consumed."""
    res, iters = _seek_entry_or_open_traced(k, keys, mask)
    if isinstance(res, MissingVacant):
        res = MissingZero(res.index)
    return res, iters


def seek_entry_or_open_traced(k: int, keys, mask: int) -> tuple[SeekResult, int]:
    """seek_entry_or_open plus the number of probe iterations consumed."""
    return _seek_entry_or_open_traced(k, keys, mask)


class FixedLongMap:
    """Mutable fixed-capacity map from 64-bit int keys to 64-bit int values.

    ``default_entry`` is fixed at construction and returned by ``get`` for
    absent keys. Single-owner mutable state: no internal synchronization.
    """

    __slots__ = (
        "mask",
        "keys",
        "values",
        "array_size",
        "extra_keys",
        "zero_value",
        "min_value",
        "default_entry",
    )

    def __init__(self, mask: int, default_entry: Callable[[int], int] = zero_entry):
        if not valid_mask(mask):
            raise ValueError(
                f"mask must be 2**n - 1 with 0 <= n <= {MAX_MASK_EXPONENT}, got {mask}"
            )
        self.mask = mask
        self.keys = array("q", bytes(8 * (mask + 1)))
        self.values = array("q", bytes(8 * (mask + 1)))
        self.array_size = 0
        self.extra_keys = 0
        self.zero_value = 0
        self.min_value = 0
        self.default_entry = default_entry

    @classmethod
    def unchecked(
        cls,
        mask: int,
        keys,
        values,
        array_size: int,
        extra_keys: int,
        zero_value: int,
        min_value: int,
        default_entry: Callable[[int], int] = zero_entry,
    ) -> "FixedLongMap":
        """Assemble a map from raw parts without validation.

        For loading serialized states and building corrupt fixtures; the
        invariant checker is the judge of what comes out.
        """
        m = object.__new__(cls)
        m.mask = mask
        m.keys = array("q", keys)
        m.values = array("q", values)
        m.array_size = array_size
        m.extra_keys = extra_keys
        m.zero_value = zero_value
        m.min_value = min_value
        m.default_entry = default_entry
        return m

    @property
    def capacity(self) -> int:
        return self.mask + 1

    @property
    def size(self) -> int:
        return self.array_size + (self.extra_keys + 1) // 2

    @property
    def is_empty(self) -> bool:
        return self.size == 0

    def contains(self, key: int) -> bool:
        if _is_zero_or_min(key):
            bit = ((key & _U64) >> 63) + 1
            return (bit & self.extra_keys) != 0
        return isinstance(seek_entry(key, self.keys, self.mask), Found)

    def get(self, key: int) -> int:
        """Value mapped to ``key``, or ``default_entry(key)`` when absent."""
        if _is_zero_or_min(key):
            bit = ((key & _U64) >> 63) + 1
            if (bit & self.extra_keys) == 0:
                return self.default_entry(key)
            return self.zero_value if key == 0 else self.min_value
        res = seek_entry(key, self.keys, self.mask)
        if isinstance(res, Found):
            return self.values[res.index]
        return self.default_entry(key)

    def update(self, key: int, value: int) -> bool:
        """Insert or overwrite ``key -> value``.

        Returns False (leaving the map unchanged) only when the probe budget
        runs out without finding the key or a free slot.
        """
        if _is_zero_or_min(key):
            if key == 0:
                self.zero_value = value
                self.extra_keys |= 1
            else:
                self.min_value = value
                self.extra_keys |= 2
            return True
        res = seek_entry_or_open(key, self.keys, self.mask)
        if isinstance(res, Found):
            self.values[res.index] = value
            return True
        if isinstance(res, (MissingZero, MissingVacant)):
            i = res.index
            self.keys[i] = key
            self.values[i] = value
            self.array_size += 1
            return True
        return False

    def remove(self, key: int) -> bool:
        """Remove ``key`` if present; removing an absent key is a no-op.

        Returns False only when the probe budget runs out, in which case the
        map is unchanged.
        """
        if _is_zero_or_min(key):
            if key == 0:
                self.extra_keys &= 2
                self.zero_value = 0
            else:
                self.extra_keys &= 1
                self.min_value = 0
            return True
        res = seek_entry(key, self.keys, self.mask)
        if isinstance(res, Found):
            # Tombstone the slot; the value reset keeps state dumps
            # deterministic but is not observable through the interface.
            self.keys[res.index] = LONG_MIN
            self.values[res.index] = 0
            self.array_size -= 1
            return True
        if isinstance(res, MissingZero):
            return True
        return False

    def __len__(self) -> int:
        return self.size

    def __contains__(self, key: int) -> bool:
        return self.contains(key)

    def __repr__(self) -> str:
        return f"FixedLongMap(size={self.size}, capacity={self.capacity})"
