"""XOR-AND circuits over the basis (AND, XOR, 1) and their normal form.

Wires ``w1..wn`` are the inputs; every gate defines one new wire whose
number is larger than anything it reads.  The text format is::

    INPUTS 2
    w3 = AND w1 w2
    OUTPUT w3

A :class:`NormalForm` is the same computation written as M AND gates whose
operands, and the final output, are F_2-sums over the constant 1, the inputs
and earlier AND outputs.  Masks are integers: bit 0 is the constant, bit
``j`` is ``x_j`` and bit ``n+i`` is the output of AND gate ``i``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import CapExceeded, DimensionError, ParseError
from .truth_table import MAX_VARS, TruthTable, _check_fixed, var_bits

AND, XOR, ONE = "AND", "XOR", "ONE"


@dataclass(frozen=True)
class Gate:
    wire: int
    op: str
    a: int | None = None
    b: int | None = None

    def operands(self) -> tuple[int, ...]:
        return () if self.op == ONE else (self.a, self.b)


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("negative input count")
        defined = set(range(1, self.n + 1))
        last = self.n
        for g in self.gates:
            if g.wire <= last:
                raise ParseError(f"wire w{g.wire} is not numbered after w{last}")
            if g.op not in (AND, XOR, ONE):
                raise ParseError(f"unknown opcode {g.op!r}")
            for u in g.operands():
                if u not in defined:
                    raise ParseError(f"w{g.wire} reads w{u}, which is not defined before it")
            defined.add(g.wire)
            last = g.wire
        if self.output not in defined:
            raise ParseError(f"output w{self.output} is not a wire of the circuit")

    @property
    def size(self) -> int:
        return len(self.gates)

    def wires(self) -> list[int]:
        return list(range(1, self.n + 1)) + [g.wire for g in self.gates]

    def serialize(self) -> str:
        lines = [f"INPUTS {self.n}"]
        for g in self.gates:
            if g.op == ONE:
                lines.append(f"w{g.wire} = ONE")
            else:
                lines.append(f"w{g.wire} = {g.op} w{g.a} w{g.b}")
        lines.append(f"OUTPUT w{self.output}")
        return "\n".join(lines) + "\n"

    __str__ = serialize


_GATE_RE = re.compile(r"^w(\d+)\s*=\s*(\w+)((?:\s+\S+)*)$")
_WIRE_RE = re.compile(r"^w(\d+)$")


def _wire(tok: str) -> int:
    m = _WIRE_RE.match(tok)
    if not m:
        raise ParseError(f"bad wire name {tok!r}")
    return int(m.group(1))


def parse(text: str) -> Circuit:
    """Parse the line format described in the module docstring."""
    n = None
    gates: list[Gate] = []
    output = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if output is not None:
            raise ParseError(f"line {lineno}: content after OUTPUT")
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "INPUTS" or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: expected 'INPUTS <n>', got {line!r}")
            n = int(parts[1])
            continue
        if line.startswith("OUTPUT"):
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'OUTPUT w<k>'")
            output = _wire(parts[1])
            continue
        m = _GATE_RE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: cannot parse gate {line!r}")
        wire, op, rest = int(m.group(1)), m.group(2), m.group(3).split()
        if op == ONE:
            if rest:
                raise ParseError(f"line {lineno}: ONE takes no operands")
            gates.append(Gate(wire, ONE))
        elif op in (AND, XOR):
            if len(rest) != 2:
                raise ParseError(f"line {lineno}: {op} takes two operands")
            gates.append(Gate(wire, op, _wire(rest[0]), _wire(rest[1])))
        else:
            raise ParseError(f"line {lineno}: unknown opcode {op!r}")
    if n is None:
        raise ParseError("missing 'INPUTS <n>' line")
    if output is None:
        raise ParseError("missing OUTPUT line")
    try:
        return Circuit(n, tuple(gates), output)
    except ParseError as exc:
        raise ParseError(f"invalid circuit: {exc}") from None


class CircuitBuilder:
    """Incremental construction with consecutive wire numbers.

    ``not_`` and ``or_`` are desugared into the basis: ``~u = u + 1`` and
    ``u | v = u + v + uv`` (one AND per OR).
    """

    def __init__(self, n: int):
        self.n = n
        self.gates: list[Gate] = []
        self._one: int | None = None

    def input(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise DimensionError(f"input x{j} out of range for n={self.n}")
        return j

    def _add(self, op, a=None, b=None) -> int:
        wire = self.n + len(self.gates) + 1
        self.gates.append(Gate(wire, op, a, b))
        return wire

    def one(self) -> int:
        if self._one is None:
            self._one = self._add(ONE)
        return self._one

    def zero(self) -> int:
        one = self.one()
        return self._add(XOR, one, one)

    def and_(self, u: int, v: int) -> int:
        return self._add(AND, u, v)

    def xor(self, u: int, v: int) -> int:
        return self._add(XOR, u, v)

    def not_(self, u: int) -> int:
        return self.xor(u, self.one())

    def or_(self, u: int, v: int) -> int:
        return self.xor(self.xor(u, v), self.and_(u, v))

    def build(self, output: int) -> Circuit:
        return Circuit(self.n, tuple(self.gates), output)


# ---- formulas ------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(x\d+|[01]|[~!()&|^])")


def parse_formula(text: str, n: int | None = None) -> Circuit:
    """Compile a propositional formula into a circuit.

    Grammar: variables ``x1..xn``, constants ``0``/``1``, unary ``~``, and
    binary ``&`` > ``^`` > ``|`` in decreasing precedence.  ``n`` defaults to
    the largest variable index that appears.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos} in formula {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    used = [int(t[1:]) for t in tokens if t.startswith("x")]
    if any(j == 0 for j in used):
        raise ParseError("variables are numbered from x1")
    if n is None:
        n = max(used, default=0)
    elif used and max(used) > n:
        raise ParseError(f"formula uses x{max(used)} but n={n}")
    b = CircuitBuilder(n)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'operand'} in formula {text!r}")
        i += 1
        return tok

    def atom():
        tok = take()
        if tok in ("~", "!"):
            return b.not_(atom())
        if tok == "(":
            w = disj()
            take(")")
            return w
        if tok == "1":
            return b.one()
        if tok == "0":
            return b.zero()
        if tok.startswith("x"):
            return b.input(int(tok[1:]))
        raise ParseError(f"unexpected {tok!r} in formula {text!r}")

    def binary(sub, op, emit):
        def rule():
            w = sub()
            while peek() == op:
                take()
                w = emit(w, sub())
            return w

        return rule

    conj = binary(atom, "&", b.and_)
    xor = binary(conj, "^", b.xor)
    disj = binary(xor, "|", b.or_)
    out = disj()
    if peek() is not None:
        raise ParseError(f"trailing {peek()!r} in formula {text!r}")
    return b.build(out)


# ---- evaluation ----------------------------------------------------------

def evaluate_circuit(c: Circuit, x: Sequence[int]) -> int:
    if len(x) != c.n:
        raise DimensionError(f"assignment has {len(x)} entries, circuit has {c.n} inputs")
    val = {j: int(b) & 1 for j, b in enumerate(x, start=1)}
    for g in c.gates:
        if g.op == ONE:
            val[g.wire] = 1
        elif g.op == AND:
            val[g.wire] = val[g.a] & val[g.b]
        else:
            val[g.wire] = val[g.a] ^ val[g.b]
    return val[c.output]


def _wire_tables(c: Circuit) -> dict[int, int]:
    """Bit-parallel evaluation: each wire's packed truth table."""
    if c.n > MAX_VARS:
        raise CapExceeded("circuit", "n", c.n, MAX_VARS)
    full = (1 << (1 << c.n)) - 1
    val = {j: var_bits(j, c.n) for j in range(1, c.n + 1)}
    for g in c.gates:
        if g.op == ONE:
            val[g.wire] = full
        elif g.op == AND:
            val[g.wire] = val[g.a] & val[g.b]
        else:
            val[g.wire] = val[g.a] ^ val[g.b]
    return val


def circuit_truth_table(c: Circuit) -> TruthTable:
    return TruthTable(c.n, _wire_tables(c)[c.output])


def count_and(c: Circuit) -> int:
    """Syntactic AND count; unreachable gates are counted too."""
    return sum(1 for g in c.gates if g.op == AND)


def count_xor(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.op == XOR)


def eliminate_dead(c: Circuit) -> Circuit:
    """Drop gates outside the output's cone, renumbering wires consecutively."""
    live = {c.output}
    for g in reversed(c.gates):
        if g.wire in live:
            live.update(g.operands())
    kept = [g for g in c.gates if g.wire in live]
    return _renumber(c.n, kept, c.output)


def _renumber(n: int, gates: list[Gate], output: int) -> Circuit:
    rename = {j: j for j in range(1, n + 1)}
    out = []
    for g in gates:
        w = n + len(out) + 1
        out.append(Gate(w, g.op, rename.get(g.a), rename.get(g.b)))
        rename[g.wire] = w
    return Circuit(n, tuple(out), rename[output])


def restrict_circuit(c: Circuit, fixed: Mapping[int, int]) -> Circuit:
    """Fix some inputs and propagate constants.

    Free inputs are renumbered ``1..k`` in their original order.  Every
    gate with a constant operand is folded away, so the AND count can only
    drop.
    """
    fixed = _check_fixed(fixed, c.n)
    free = [j for j in range(1, c.n + 1) if j not in fixed]
    b = CircuitBuilder(len(free))
    # value is ("c", bit) for a constant or ("w", wire) for a new wire
    val: dict[int, tuple[str, int]] = {}
    for j in range(1, c.n + 1):
        val[j] = ("c", fixed[j]) if j in fixed else ("w", free.index(j) + 1)
    for g in c.gates:
        if g.op == ONE:
            val[g.wire] = ("c", 1)
            continue
        (ka, va), (kb, vb) = val[g.a], val[g.b]
        if ka == "c" and kb == "c":
            val[g.wire] = ("c", va & vb if g.op == AND else va ^ vb)
        elif ka == "c" or kb == "c":
            const, wire = (va, vb) if ka == "c" else (vb, va)
            if g.op == AND:
                val[g.wire] = ("w", wire) if const else ("c", 0)
            else:
                val[g.wire] = ("w", b.not_(wire)) if const else ("w", wire)
        else:
            emit = b.and_ if g.op == AND else b.xor
            val[g.wire] = ("w", emit(va, vb))
    kind, v = val[c.output]
    if kind == "c":
        v = b.one() if v else b.zero()
    return b.build(v)


# ---- normal form ---------------------------------------------------------

def _mask_terms(mask: int, n: int) -> list[str]:
    names = []
    for bit in range(mask.bit_length()):
        if (mask >> bit) & 1:
            names.append("1" if bit == 0 else f"x{bit}" if bit <= n else f"o{bit - n}")
    return names


@dataclass(frozen=True)
class NormalForm:
    n: int
    ands: tuple[tuple[int, int], ...]  # (L_i, R_i) operand masks
    out_mask: int

    def __post_init__(self):
        for i, (l, r) in enumerate(self.ands, start=1):
            limit = 1 << (self.n + i)  # may use const, x_1..x_n, o_1..o_{i-1}
            if l >= limit or r >= limit or l < 0 or r < 0:
                raise ValueError(f"AND gate {i} references a later gate")
        if not 0 <= self.out_mask < 1 << (self.n + self.M + 1):
            raise ValueError("output mask out of range")

    @property
    def M(self) -> int:
        return len(self.ands)

    def describe(self) -> str:
        def fmt(mask):
            terms = _mask_terms(mask, self.n)
            return " + ".join(terms) if terms else "0"

        lines = [f"n={self.n} M={self.M}"]
        for i, (l, r) in enumerate(self.ands, start=1):
            lines.append(f"o{i} = ({fmt(l)}) & ({fmt(r)})")
        lines.append(f"out = {fmt(self.out_mask)}")
        return "\n".join(lines)

    def truth_table(self) -> TruthTable:
        full = (1 << (1 << self.n)) - 1
        span = [full] + [var_bits(j, self.n) for j in range(1, self.n + 1)]

        def value(mask):
            acc = 0
            for bit in range(mask.bit_length()):
                if (mask >> bit) & 1:
                    acc ^= span[bit]
            return acc

        for l, r in self.ands:
            span.append(value(l) & value(r))
        return TruthTable(self.n, value(self.out_mask))


def to_normal_form(c: Circuit) -> NormalForm:
    """Forward-propagate each wire's affine mask over the AND outputs."""
    mask = {j: 1 << j for j in range(1, c.n + 1)}
    ands = []
    for g in c.gates:
        if g.op == ONE:
            mask[g.wire] = 1
        elif g.op == XOR:
            mask[g.wire] = mask[g.a] ^ mask[g.b]
        else:
            ands.append((mask[g.a], mask[g.b]))
            mask[g.wire] = 1 << (c.n + len(ands))
    return NormalForm(c.n, tuple(ands), mask[c.output])


def from_normal_form(nf: NormalForm) -> Circuit:
    """Realise every mask as a left-deep XOR chain.

    Uses exactly M AND gates, at most one ONE gate, and at most
    ``(2M+1)(n+M+1)`` XOR gates.
    """
    b = CircuitBuilder(nf.n)
    wire_of = {j: j for j in range(1, nf.n + 1)}

    def realise(mask: int) -> int:
        terms = [bit for bit in range(mask.bit_length()) if (mask >> bit) & 1]
        if not terms:
            return b.zero()
        wires = [b.one() if t == 0 else wire_of[t] for t in terms]
        acc = wires[0]
        for w in wires[1:]:
            acc = b.xor(acc, w)
        return acc

    for i, (l, r) in enumerate(nf.ands, start=1):
        wire_of[nf.n + i] = b.and_(realise(l), realise(r))
    return b.build(realise(nf.out_mask))


def xor_bound(n: int, M: int) -> int:
    """XOR gates sufficient for the 2M+1 affine sums of a normal form."""
    return (2 * M + 1) * (n + M + 1)


def size_bound(n: int, M: int) -> int:
    """Total-size bound ``2(M+n)^2 + M`` (valid for n >= 3)."""
    return 2 * (M + n) ** 2 + M


def iter_assignments(n: int) -> Iterator[tuple[int, ...]]:
    for i in range(1 << n):
        yield tuple((i >> j) & 1 for j in range(n))


def random_circuit(n: int, m: int, rng, p_and: float = 0.4, p_one: float = 0.05) -> Circuit:
    """Random topologically ordered circuit; the last gate is the output.

    ``rng`` is a ``numpy.random.Generator``.
    """
    b = CircuitBuilder(n)
    if n == 0 and m:
        b.one()
    while len(b.gates) < m:
        top = n + len(b.gates)
        r = rng.random()
        if r < p_one or top == 0:
            b._add(ONE)
        else:
            if top >= 2:
                u, v = (int(t) + 1 for t in rng.choice(top, size=2, replace=False))
            else:
                u = v = 1
            (b.and_ if r < p_one + p_and else b.xor)(u, v)
    out = n + len(b.gates) if b.gates else (1 if n else None)
    if out is None:
        out = b.one()
    return b.build(out)


__all__ = [
    "AND", "XOR", "ONE", "Gate", "Circuit", "CircuitBuilder", "NormalForm",
    "parse", "parse_formula", "evaluate_circuit", "circuit_truth_table", "count_and",
    "count_xor", "eliminate_dead", "restrict_circuit", "to_normal_form",
    "from_normal_form", "xor_bound", "size_bound", "random_circuit",
]
