"""Bit-packed truth tables for functions in B_n.

A table for ``f`` on ``n`` variables is stored as a Python integer whose bit
``i`` is ``f(x)`` with ``i = sum(x_j * 2**(j-1))``, i.e. ``x_1`` is the least
significant bit of the index.  With this layout, fixing the trailing
variables to zero keeps a contiguous prefix of the table.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, DimensionError, ParseError

MAX_VARS = 24

_HEX = "0123456789abcdef"


def _check_n(n: int) -> None:
    if n < 0:
        raise DimensionError(f"variable count must be non-negative, got {n}")
    if n > MAX_VARS:
        raise CapExceeded("truth_table", "n", n, MAX_VARS)


def var_bits(j: int, n: int) -> int:
    """Packed table of the projection ``x_j`` (1-based) on ``n`` variables."""
    if not 1 <= j <= n:
        raise DimensionError(f"variable x{j} out of range for n={n}")
    size = 1 << n
    block = 1 << (j - 1)
    # one period is `block` zeros followed by `block` ones; double it up to size
    out = ((1 << block) - 1) << block
    width = 2 * block
    while width < size:
        out |= out << width
        width *= 2
    return out


def index_of(x: Sequence[int]) -> int:
    """Table index of the assignment ``x = (x_1, ..., x_n)``."""
    idx = 0
    for j, b in enumerate(x):
        if b not in (0, 1):
            raise ValueError(f"assignment entries must be bits, got {b!r}")
        idx |= b << j
    return idx


def assignment_of(index: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`index_of`."""
    return tuple((index >> j) & 1 for j in range(n))


@dataclass(frozen=True)
class TruthTable:
    n: int
    bits: int

    def __post_init__(self):
        _check_n(self.n)
        if self.bits < 0 or self.bits >> (1 << self.n):
            raise ValueError(f"bits do not fit in a table of length 2^{self.n}")

    # ---- construction ----

    @classmethod
    def from_text(cls, s: str, n: int) -> TruthTable:
        """Parse a binary (``2^n`` chars) or hex (``2^n/4`` digits, n >= 2) table."""
        _check_n(n)
        s = s.strip()
        size = 1 << n
        if len(s) == size and set(s) <= {"0", "1"}:
            bits = 0
            for i, ch in enumerate(s):
                if ch == "1":
                    bits |= 1 << i
            return cls(n, bits)
        if n >= 2 and len(s) == size // 4:
            bits = 0
            for k, ch in enumerate(s.lower()):
                v = _HEX.find(ch)
                if v < 0:
                    raise ParseError(f"illegal hex digit {ch!r} in truth table")
                bits |= v << (4 * k)
            return cls(n, bits)
        if len(s) == size:
            bad = next(ch for ch in s if ch not in "01")
            raise ParseError(f"illegal character {bad!r} in binary truth table")
        expected = f"{size}" + (f" (binary) or {size // 4} (hex)" if n >= 2 else "")
        raise ParseError(f"truth table of length {len(s)} for n={n}; expected {expected}")

    @classmethod
    def from_bits(cls, values: Iterable[int], n: int | None = None) -> TruthTable:
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        if n is None:
            n = int(arr.size).bit_length() - 1
        if arr.size != 1 << n:
            raise DimensionError(f"need {1 << n} values for n={n}, got {arr.size}")
        return cls.from_array(arr.astype(np.uint8), n)

    @classmethod
    def from_array(cls, arr: np.ndarray, n: int) -> TruthTable:
        packed = np.packbits(np.asarray(arr, dtype=np.uint8) & 1, bitorder="little")
        return cls(n, int.from_bytes(packed.tobytes(), "little"))

    @classmethod
    def constant(cls, value: int, n: int) -> TruthTable:
        _check_n(n)
        return cls(n, ((1 << (1 << n)) - 1) if value else 0)

    @classmethod
    def variable(cls, j: int, n: int) -> TruthTable:
        _check_n(n)
        return cls(n, var_bits(j, n))

    # ---- views ----

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def mask(self) -> int:
        return (1 << self.size) - 1

    def to_array(self) -> np.ndarray:
        """Unpacked ``uint8`` array of length ``2^n``."""
        nbytes = max(1, self.size // 8)
        raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.size]

    def to_text(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.size))

    def to_hex(self) -> str:
        if self.n < 2:
            raise ValueError("hex form needs n >= 2")
        return "".join(_HEX[(self.bits >> (4 * k)) & 0xF] for k in range(self.size // 4))

    def weight(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.size:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __invert__(self) -> TruthTable:
        return TruthTable(self.n, self.bits ^ self.mask)

    def __xor__(self, other: TruthTable) -> TruthTable:
        _same_n(self, other)
        return TruthTable(self.n, self.bits ^ other.bits)

    def __and__(self, other: TruthTable) -> TruthTable:
        _same_n(self, other)
        return TruthTable(self.n, self.bits & other.bits)

    def __str__(self) -> str:
        return self.to_text()


def _same_n(a: TruthTable, b: TruthTable) -> None:
    if a.n != b.n:
        raise DimensionError(f"tables on {a.n} and {b.n} variables")


def evaluate(tt: TruthTable, x: Sequence[int]) -> int:
    if len(x) != tt.n:
        raise DimensionError(f"assignment has {len(x)} entries, table has n={tt.n}")
    return tt[index_of(x)]


def restrict(tt: TruthTable, fixed: Mapping[int, int]) -> TruthTable:
    """Fix the variables in ``fixed`` (1-based index -> bit).

    The free variables keep their relative order and are renumbered
    ``1..k``.
    """
    fixed = _check_fixed(fixed, tt.n)
    if not fixed:
        return tt
    arr = tt.to_array().reshape((2,) * tt.n) if tt.n else tt.to_array()
    # C-order reshape: axis 0 is the most significant bit, i.e. x_n
    index = tuple(fixed.get(tt.n - axis, slice(None)) for axis in range(tt.n))
    sub = arr[index]
    k = tt.n - len(fixed)
    return TruthTable.from_array(np.ravel(sub), k)


def _check_fixed(fixed: Mapping[int, int] | Iterable[tuple[int, int]], n: int) -> dict[int, int]:
    items = list(fixed.items()) if isinstance(fixed, Mapping) else list(fixed)
    out: dict[int, int] = {}
    for j, b in items:
        if not 1 <= j <= n:
            raise DimensionError(f"variable x{j} out of range for n={n}")
        if j in out:
            raise ValueError(f"variable x{j} assigned twice")
        if b not in (0, 1):
            raise ValueError(f"x{j} must be fixed to a bit, got {b!r}")
        out[j] = b
    return out


def hamming_distance(a: TruthTable, b: TruthTable) -> int:
    _same_n(a, b)
    return (a.bits ^ b.bits).bit_count()


def affine_table(a: Sequence[int], c: int, n: int) -> TruthTable:
    """Table of ``x -> <a, x> + c`` over F_2."""
    _check_n(n)
    if len(a) != n:
        raise DimensionError(f"coefficient vector has {len(a)} entries, n={n}")
    bits = 0
    for j, aj in enumerate(a, start=1):
        if aj:
            bits ^= var_bits(j, n)
    if c:
        bits ^= (1 << (1 << n)) - 1
    return TruthTable(n, bits)


def random_table(n: int, seed: int) -> TruthTable:
    """Seeded uniform table; bits are drawn from the generator in index order."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    return TruthTable.from_array(rng.integers(0, 2, size=1 << n, dtype=np.uint8), n)


def format_table_line(tt: TruthTable) -> str:
    return f"n:{tt.n} tt:{tt.to_text()}"


def parse_table_line(line: str) -> TruthTable:
    """Parse one ``n:<int> tt:<string>`` record."""
    fields = dict(part.split(":", 1) for part in line.split() if ":" in part)
    if "n" not in fields or "tt" not in fields:
        raise ParseError(f"expected 'n:<int> tt:<string>', got {line!r}")
    try:
        n = int(fields["n"])
    except ValueError:
        raise ParseError(f"bad variable count {fields['n']!r}") from None
    return TruthTable.from_text(fields["tt"], n)


def read_tables(text: str) -> list[TruthTable]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_table_line(line))
    return out
