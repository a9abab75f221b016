"""Exact multiplicative complexity for small n.

The search runs over normal forms.  After k AND gates the functions a
normal form can output are exactly the span V_k of the constant 1, the
inputs, and the k AND outputs, so a search state is the span itself and
states with equal spans are merged.  Spans always contain the affine
functions; they are identified by the reduced row-echelon basis of their
AND outputs in algebraic normal form with the affine monomials dropped.

Two facts keep the last step small.  Modulo V, ``(L+1)&R = L&R`` and
``L&(L+R) = L&R``, so the new AND output only depends on the 2-dimensional
subspace ``{L, R, L+R}`` of V/<1>, and each such subspace is visited once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .circuit import NormalForm, circuit_truth_table, from_normal_form
from .errors import CapExceeded
from .truth_table import TruthTable, var_bits

MC_MAX_VARS = 5
CENSUS_MAX_VARS = 4
_WORD = np.uint32  # packed tables on n <= 5 variables fit in 32 bits
# spans kept in memory per level; deeper levels are walked depth-first
_CACHE_LEVELS = {0: 3, 1: 3, 2: 3, 3: 3, 4: 2, 5: 2}


def counting_bound(s: int, k: int) -> int:
    """Upper bound ``2^(k^2+2k+2ks+s+1)`` on |{f in B_s : c_and(f) <= k}|."""
    if s < 0 or k < 0:
        raise ValueError("s and k must be non-negative")
    return 1 << (k * k + 2 * k + 2 * k * s + s + 1)


@dataclass(frozen=True)
class McResult:
    value: int
    witness: NormalForm
    nodes_explored: int = 0


@dataclass
class McCensus:
    s: int
    counts: dict[int, int]
    table: np.ndarray = field(repr=False, default=None)  # c_and indexed by packed table

    @property
    def max_value(self) -> int:
        return max(self.counts)

    def cumulative(self, k: int) -> int:
        return sum(c for j, c in self.counts.items() if j <= k)

    def tail(self, budget: int) -> float:
        """Fraction of B_s with c_and strictly above ``budget``."""
        total = 1 << (1 << self.s)
        return sum(c for j, c in self.counts.items() if j > budget) / total


# ---- linear algebra over F_2 in ANF coordinates --------------------------

class _Space:
    """Precomputed masks for packed tables on n <= 5 variables."""

    def __init__(self, n: int):
        self.n = n
        self.size = 1 << n
        self.full = (1 << self.size) - 1
        self.basis = [self.full] + [var_bits(j, n) for j in range(1, n + 1)]
        self.affine = _span(self.basis)
        self.mobius = []
        for i in range(n):
            low = sum(1 << p for p in range(self.size) if not (p >> i) & 1)
            self.mobius.append((_WORD(low), _WORD(1 << i)))
        self.nonaffine = _WORD(
            sum(1 << p for p in range(self.size) if bin(p).count("1") >= 2)
        )

    def anf(self, t: np.ndarray) -> np.ndarray:
        t = t.copy()
        for low, sh in self.mobius:
            t ^= (t & low) << sh
        return t

    def quotient(self, t: np.ndarray) -> np.ndarray:
        """Coordinates of ``t`` modulo the affine functions."""
        return self.anf(t) & self.nonaffine


@lru_cache(maxsize=None)
def _space(n: int) -> _Space:
    return _Space(n)


def _span(vectors) -> np.ndarray:
    """All F_2 combinations; entry ``m`` is the sum of vectors selected by ``m``."""
    e = np.zeros(1, dtype=_WORD)
    for v in vectors:
        e = np.concatenate([e, e ^ _WORD(v)])
    return e


def _bit_length(v: np.ndarray) -> np.ndarray:
    # exact: tables have at most 32 bits, well inside float64's mantissa
    return np.frexp(v.astype(np.float64))[1].astype(_WORD)


def _reduce(vals: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Reduce ``vals`` (S, P) modulo per-state RREF ``rows`` (S, k)."""
    for j in range(rows.shape[1]):
        row = rows[:, j][:, None]
        pivot = _bit_length(row) - _WORD(1)
        vals = vals ^ (((vals >> pivot) & _WORD(1)) * row)
    return vals


@lru_cache(maxsize=None)
def _plane_pairs(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """One pair (i, j) per 2-dim subspace of F_2^dim: i < j < i^j."""
    idx = np.arange(1, 1 << dim, dtype=np.int64)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    keep = (i < j) & (j < (i ^ j))
    return i[keep], j[keep]


@dataclass
class _Batch:
    """S spans built from k AND gates each."""

    gates: np.ndarray  # (S, k, 2) operand masks, constant bit clear
    rows: np.ndarray  # (S, k) RREF basis of the AND outputs modulo affine, descending

    def __len__(self):
        return self.gates.shape[0]

    @property
    def k(self) -> int:
        return self.gates.shape[1]

    def elements(self, sp: _Space) -> np.ndarray:
        """(S, 2^(1+n+k)); column m is the span element selected by mask m."""
        s = len(self)
        e = np.broadcast_to(sp.affine, (s, sp.affine.size))
        at = np.arange(s)
        for g in range(self.k):
            o = e[at, self.gates[:, g, 0]] & e[at, self.gates[:, g, 1]]
            e = np.concatenate([e, e ^ o[:, None]], axis=1)
        return e

    def take(self, idx) -> _Batch:
        return _Batch(self.gates[idx], self.rows[idx])


def _candidates(batch: _Batch, sp: _Space):
    """New AND outputs over every plane of every span, reduced modulo the span.

    Planes live in V/<1>, so operand masks have the constant bit clear.
    """
    e = batch.elements(sp)
    pi, pj = _plane_pairs(sp.n + batch.k)
    li, ri = pi << 1, pj << 1
    o = e[:, li] & e[:, ri]
    red = _reduce(sp.quotient(o), batch.rows)
    return e, li, ri, o, red


def _chunks(batch: _Batch, sp: _Space, budget: int = 1 << 21):
    """Slices of ``batch`` whose candidate arrays stay under ``budget``
    entries; sizes start small and double so early hits stay cheap."""
    pairs = _plane_pairs(sp.n + batch.k)[0].size
    cap = max(1, budget // max(pairs, 1))
    step, lo = min(4, cap), 0
    while lo < len(batch):
        yield batch.take(slice(lo, lo + step))
        lo += step
        step = min(2 * step, cap)


def _children(batch: _Batch, sp: _Space) -> _Batch:
    """All distinct one-gate extensions of the spans in ``batch``."""
    _, li, ri, _, red = _candidates(batch, sp)
    s_idx, p_idx = np.nonzero(red)
    r = red[s_idx, p_idx]
    parent_rows = batch.rows[s_idx]
    pivot = _bit_length(r) - _WORD(1)
    hit = (parent_rows >> pivot[:, None]) & _WORD(1)
    rows = np.concatenate([parent_rows ^ (hit * r[:, None]), r[:, None]], axis=1)
    rows = -np.sort(-rows.astype(np.int64), axis=1)  # values < 2^32, so int64 is exact
    _, first = np.unique(rows, axis=0, return_index=True)
    first.sort()
    new_gate = np.stack([li[p_idx[first]], ri[p_idx[first]]], axis=1)[:, None, :]
    gates = np.concatenate([batch.gates[s_idx[first]], new_gate], axis=1)
    return _Batch(gates, rows[first].astype(_WORD))


class _Levels:
    """Distinct spans reachable with exactly k AND gates."""

    def __init__(self, n: int):
        self.sp = _space(n)
        root = _Batch(np.zeros((1, 0, 2), dtype=np.int64), np.zeros((1, 0), dtype=_WORD))
        self.levels: list[_Batch] = [root]
        self.cache_depth = _CACHE_LEVELS[n]

    def level(self, k: int) -> _Batch:
        while len(self.levels) <= k:
            parts = [_children(chunk, self.sp) for chunk in _chunks(self.levels[-1], self.sp)]
            merged = _Batch(np.concatenate([p.gates for p in parts]), np.concatenate([p.rows for p in parts]))
            _, first = np.unique(merged.rows.astype(np.int64), axis=0, return_index=True)
            first.sort()
            self.levels.append(merged.take(first))
        return self.levels[k]

    def walk(self, k: int) -> Iterator[_Batch]:
        """Spans with k AND gates in chunks; levels past the cache are
        generated lazily and only de-duplicated within a chunk."""
        if k <= self.cache_depth:
            yield from _chunks(self.level(k), self.sp)
            return
        for parents in self.walk(k - 1):
            for chunk in _chunks(parents, self.sp, budget=1 << 16):
                yield from _chunks(_children(chunk, self.sp), self.sp)


@lru_cache(maxsize=None)
def _levels(n: int) -> _Levels:
    return _Levels(n)


# ---- decision and exact value --------------------------------------------

def _check_mc_n(n: int) -> None:
    if n > MC_MAX_VARS:
        raise CapExceeded("mc_solver", "n", n, MC_MAX_VARS)


def algebraic_degree(tt: TruthTable) -> int:
    """Degree of the algebraic normal form (0 for constants)."""
    arr = tt.to_array().copy()
    h = 1
    while h < arr.size:
        blocks = arr.reshape(-1, 2, h)
        blocks[:, 1, :] ^= blocks[:, 0, :]
        h *= 2
    return max((bin(int(p)).count("1") for p in np.nonzero(arr)[0]), default=0)


def _affine_witness(tt: TruthTable, sp: _Space) -> NormalForm | None:
    anf = int(sp.anf(np.array([tt.bits], dtype=_WORD))[0])
    if anf & int(sp.nonaffine):
        return None
    mask = anf & 1
    for j in range(1, tt.n + 1):
        if (anf >> (1 << (j - 1))) & 1:
            mask |= 1 << j
    return NormalForm(tt.n, (), mask)


def _witness_at(tt: TruthTable, k: int, stats: list[int]) -> NormalForm | None:
    """Normal form with exactly k AND gates computing ``tt``, or ``None``
    when no span of k-1 gates extends to ``tt`` with one more gate."""
    sp = _space(tt.n)
    if k == 0:
        stats[0] += 1
        return _affine_witness(tt, sp)
    target = sp.quotient(np.array([tt.bits], dtype=_WORD))
    for batch in _levels(tt.n).walk(k - 1):
        rf = _reduce(np.broadcast_to(target, (len(batch), 1)), batch.rows)
        live = np.nonzero(rf[:, 0])[0]  # rf == 0: tt already in the span
        if live.size == 0:
            stats[0] += len(batch)
            continue
        sub = batch.take(live)
        e, li, ri, o, red = _candidates(sub, sp)
        hits = np.argwhere(red == rf[live])
        if hits.size == 0:
            stats[0] += len(batch)
            continue
        s_at, p_at = (int(v) for v in hits[0])
        stats[0] += int(live[s_at]) + 1
        rest = _WORD(tt.bits) ^ o[s_at, p_at]
        vmask = int(np.nonzero(e[s_at] == rest)[0][0])
        gates = tuple((int(l), int(r)) for l, r in sub.gates[s_at]) + ((int(li[p_at]), int(ri[p_at])),)
        return NormalForm(tt.n, gates, vmask | (1 << (tt.n + k)))
    return None


def mc_decision(tt: TruthTable, k: int) -> tuple[bool, NormalForm | None]:
    """Is c_and(tt) <= k?  Returns the verdict and, when true, a witness."""
    _check_mc_n(tt.n)
    if k < 0:
        return False, None
    stats = [0]
    lower = _lower_bound(tt)
    for j in range(lower, k + 1):
        w = _witness_at(tt, j, stats)
        if w is not None:
            return True, w
    return False, None


def _lower_bound(tt: TruthTable) -> int:
    # c_and(f) >= deg(f) - 1
    return max(0, algebraic_degree(tt) - 1)


def mc_exact(tt: TruthTable) -> McResult:
    """Smallest AND count over all XOR-AND circuits computing ``tt``."""
    _check_mc_n(tt.n)
    stats = [0]
    cap = 1 << tt.n
    for k in range(_lower_bound(tt), cap + 1):
        w = _witness_at(tt, k, stats)
        if w is not None:
            if w.truth_table() != tt:
                raise AssertionError("mc_solver produced an invalid witness")
            return McResult(k, w, stats[0])
    raise AssertionError(f"no witness with at most {cap} AND gates")


def verify_witness(tt: TruthTable, result: McResult) -> bool:
    w = result.witness
    return w.M == result.value and circuit_truth_table(from_normal_form(w)) == tt


# ---- census --------------------------------------------------------------

@lru_cache(maxsize=None)
def _census(s: int) -> McCensus:
    sp = _space(s)
    total = 1 << sp.size
    mc = np.full(total, -1, dtype=np.int8)
    mc[sp.affine.astype(np.int64)] = 0
    remaining = total - int((mc == 0).sum())
    k = 0
    levels = _levels(s)
    while remaining:
        k += 1
        if k > sp.size:
            raise AssertionError(f"census of B_{s} did not close within {sp.size} AND gates")
        for batch in levels.walk(k - 1):
            e, li, ri, o, red = _candidates(batch, sp)
            s_idx, p_idx = np.nonzero(red)
            # one representative per (span, coset)
            key = (s_idx.astype(np.uint64) << np.uint64(32)) | red[s_idx, p_idx].astype(np.uint64)
            _, first = np.unique(key, return_index=True)
            s_idx, p_idx = s_idx[first], p_idx[first]
            reached = (o[s_idx, p_idx][:, None] ^ e[s_idx]).ravel().astype(np.int64)
            fresh = reached[mc[reached] < 0]
            if fresh.size:
                mc[fresh] = k
                remaining = int((mc < 0).sum())
                if not remaining:
                    break
    values, counts = np.unique(mc, return_counts=True)
    return McCensus(s, {int(v): int(c) for v, c in zip(values, counts)}, mc)


def classify(s: int) -> McCensus:
    """Exact distribution of c_and over all of B_s, by forward closure."""
    if s > CENSUS_MAX_VARS:
        raise CapExceeded("mc_solver", "s", s, CENSUS_MAX_VARS)
    if s < 0:
        raise ValueError("s must be non-negative")
    return _census(s)


@dataclass(frozen=True)
class BoundRow:
    k: int
    count: int
    cumulative: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.cumulative <= self.bound

    @property
    def slack(self) -> int:
        return self.bound - self.cumulative

    def line(self) -> str:
        return (f"k={self.k} count={self.count} cumulative={self.cumulative} "
                f"bound={self.bound} ok={'true' if self.ok else 'false'}")


def verify_counting_bound(s: int, k_max: int) -> list[BoundRow]:
    """Compare cumulative census counts with the counting bound for k <= k_max."""
    census = classify(s)
    rows = []
    for k in range(k_max + 1):
        rows.append(BoundRow(k, census.counts.get(k, 0), census.cumulative(k), counting_bound(s, k)))
    bad = [r for r in rows if not r.ok]
    if bad:
        raise AssertionError(f"counting bound violated: {bad[0].line()}")
    return rows
