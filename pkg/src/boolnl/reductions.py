"""Executable reductions: the AFFINE certificate, TAUTOLOGY -> AFFINE, and
the #SAT -> nonlinearity padding gadget."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circuit import (
    AND,
    Circuit,
    CircuitBuilder,
    Gate,
    circuit_truth_table,
    count_and,
    evaluate_circuit,
)
from .errors import CapExceeded, DimensionError
from .truth_table import MAX_VARS, assignment_of
from .walsh import nonlinearity

AFFINE_MAX_VARS = 16


@dataclass(frozen=True)
class NonAffineWitness:
    x: tuple[int, ...]
    y: tuple[int, ...]


@dataclass(frozen=True)
class GadgetInstance:
    original: Circuit
    padded: Circuit
    t: int


def _xor(x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    return tuple(a ^ b for a, b in zip(x, y))


def check_affine_certificate(c: Circuit, x: Sequence[int], y: Sequence[int]) -> bool:
    """True iff ``f(x+y) + f(x) + f(y) + f(0) = 1``, i.e. (x, y) shows f is not affine."""
    if len(x) != c.n or len(y) != c.n:
        raise DimensionError(f"certificate vectors must have {c.n} entries")
    zero = (0,) * c.n
    return bool(
        evaluate_circuit(c, _xor(x, y))
        ^ evaluate_circuit(c, x)
        ^ evaluate_circuit(c, y)
        ^ evaluate_circuit(c, zero)
    )


def is_affine(c: Circuit) -> tuple[bool, NonAffineWitness | None]:
    """Decide affineness by exhausting the truth table.

    For a non-affine circuit the witness is built from the first index z at
    which f+f(0) departs from its linear fit on the unit vectors; with
    ``x = e_i`` for the lowest set bit of z and ``y = z + e_i`` the
    certificate identity fails.
    """
    if c.n > AFFINE_MAX_VARS:
        raise CapExceeded("reductions", "n", c.n, AFFINE_MAX_VARS)
    tt = circuit_truth_table(c)
    if nonlinearity(tt) == 0:
        return True, None
    f0 = tt[0]
    slope = [tt[1 << j] ^ f0 for j in range(c.n)]
    for z in range(tt.size):
        fit = 0
        for j in range(c.n):
            if (z >> j) & 1:
                fit ^= slope[j]
        if tt[z] ^ f0 != fit:
            low = z & -z
            w = NonAffineWitness(assignment_of(low, c.n), assignment_of(z ^ low, c.n))
            assert check_affine_certificate(c, w.x, w.y)
            return False, w
    raise AssertionError("non-zero nonlinearity but no departure from the linear fit")


def canonical_non_affine(n: int) -> Circuit:
    """x1 AND x2, with inputs up to max(n, 2) present but unused."""
    b = CircuitBuilder(max(n, 2))
    return b.build(b.and_(1, 2))


def tautology_to_affine(f: Circuit) -> Circuit:
    """Map a formula to a circuit that is affine iff the formula is a tautology.

    Probe ``F(0)`` and ``F(e_i)`` for every unit vector; a 0 anywhere means F
    is no tautology and a fixed non-affine circuit is returned.  Otherwise F
    itself is returned: an affine F with all probes equal to 1 is constant.
    """
    zero = [0] * f.n
    probes = [evaluate_circuit(f, zero)]
    for i in range(f.n):
        e = list(zero)
        e[i] = 1
        probes.append(evaluate_circuit(f, e))
    if not all(probes):
        return canonical_non_affine(f.n)
    return f


def is_tautology(f: Circuit) -> bool:
    tt = circuit_truth_table(f)
    return tt.bits == tt.mask


def sat_count_gadget(c: Circuit, t: int = 10) -> GadgetInstance:
    """Pad ``c`` to ``c(x) & x_{n+1} & ... & x_{n+t}`` on n+t inputs."""
    if t < 1:
        raise ValueError("padding width t must be at least 1")
    if c.n + t > MAX_VARS:
        raise CapExceeded("reductions", "n+t", c.n + t, MAX_VARS)
    n = c.n

    def shift(w):
        return None if w is None else (w if w <= n else w + t)

    gates = [Gate(g.wire + t, g.op, shift(g.a), shift(g.b)) for g in c.gates]
    acc = shift(c.output)
    wire = n + t + len(gates)
    for j in range(n + 1, n + t + 1):
        wire += 1
        gates.append(Gate(wire, AND, acc, j))
        acc = wire
    padded = Circuit(n + t, tuple(gates), acc)
    assert count_and(padded) == count_and(c) + t
    return GadgetInstance(c, padded, t)


def sat_count_bruteforce(c: Circuit) -> int:
    return circuit_truth_table(c).weight()


def count_sat_via_nl(c: Circuit, t: int = 10) -> int:
    """Number of satisfying assignments of ``c``, read off as a nonlinearity.

    Needs ``t >= 2``.  With S satisfying assignments the constant 0 agrees
    with the padded function on 2^(n+t) - S points and any balanced affine
    function on at most 2^(n+t-1) + S, so 0 is a best approximation exactly
    when 2^(n+t-1) >= 2S; S can reach 2^n.  For t = 1 the gadget's
    nonlinearity is min(S, 2^n - S).
    """
    if t < 2:
        raise ValueError("the nonlinearity equals the satisfying count only for t >= 2")
    g = sat_count_gadget(c, t)
    return nonlinearity(circuit_truth_table(g.padded))
