import itertools

import numpy as np
import pytest

from boolnl.circuit import circuit_truth_table, count_and, random_circuit, restrict_circuit
from boolnl.errors import CapExceeded
from boolnl.mc_solver import (
    algebraic_degree,
    classify,
    counting_bound,
    mc_decision,
    mc_exact,
    verify_counting_bound,
    verify_witness,
)
from boolnl.truth_table import TruthTable, affine_table, random_table, restrict
from boolnl.walsh import nonlinearity
from oracles import degree_direct, reachable_naive

MAJ3 = TruthTable.from_text("00010111", 3)
BENT4 = TruthTable.from_text("0001000100011110", 4)


def census_naive(s, k_max):
    """Cumulative counts from literal normal-form enumeration."""
    return [int(reachable_naive(s, k).sum()) for k in range(k_max + 1)]


class TestCountingBound:
    @pytest.mark.parametrize("s,k,expect", [(2, 0, 8), (2, 1, 1024), (5, 3, 2 ** 51), (3, 0, 16)])
    def test_values(self, s, k, expect):
        assert counting_bound(s, k) == expect

    def test_big(self):
        assert counting_bound(10, 10) == 2 ** (100 + 20 + 200 + 10 + 1)


class TestDecision:
    def test_affine_zero(self):
        for a in itertools.product((0, 1), repeat=3):
            ok, w = mc_decision(affine_table(a, 1, 3), 0)
            assert ok and w.M == 0

    def test_and_needs_one(self, and2):
        assert mc_decision(and2, 0) == (False, None)
        ok, w = mc_decision(and2, 1)
        assert ok and w.truth_table() == and2

    def test_bent4(self):
        assert mc_decision(BENT4, 1)[0] is False
        ok, w = mc_decision(BENT4, 2)
        assert ok and w.truth_table() == BENT4

    def test_bent4_one_and_by_enumeration(self):
        assert not reachable_naive(4, 1)[BENT4.bits]

    def test_monotone(self):
        for seed in range(30):
            t = random_table(4, seed)
            verdicts = [mc_decision(t, k)[0] for k in range(5)]
            assert verdicts == sorted(verdicts)

    def test_cap(self):
        with pytest.raises(CapExceeded, match="mc_solver"):
            mc_decision(TruthTable.constant(0, 6), 1)


class TestExact:
    def test_examples(self, and2):
        assert mc_exact(TruthTable.constant(1, 3)).value == 0
        assert mc_exact(and2).value == 1

    def test_majority_is_one(self):
        # x1x2 + x1x3 + x2x3 = (x1 + x2)(x1 + x3) + x1
        res = mc_exact(MAJ3)
        assert res.value == 1
        assert verify_witness(MAJ3, res)
        assert reachable_naive(3, 1)[MAJ3.bits]

    def test_and3_is_two(self):
        t = TruthTable.from_text("00000001", 3)
        assert mc_exact(t).value == 2
        assert not reachable_naive(3, 1)[t.bits]

    def test_matches_census_on_b3(self):
        census = classify(3)
        for bits in range(256):
            t = TruthTable(3, bits)
            res = mc_exact(t)
            assert res.value == census.table[bits]
            assert verify_witness(t, res)

    def test_matches_census_on_b4_sample(self):
        census = classify(4)
        for seed in range(300):
            t = random_table(4, seed)
            res = mc_exact(t)
            assert res.value == census.table[t.bits]
            assert verify_witness(t, res)
            assert res.witness.M == res.value

    def test_n5_structured(self):
        x = [TruthTable.variable(j, 5) for j in range(1, 6)]
        prod = x[0] & x[1] & x[2] & x[3] & x[4]
        quad = (x[0] & x[1]) ^ (x[2] & x[3]) ^ x[4]
        for t, expect in [(prod, 4), (quad, 2), (x[0] ^ x[4], 0)]:
            res = mc_exact(t)
            assert res.value == expect
            assert verify_witness(t, res)

    @pytest.mark.slow
    def test_n5_random(self):
        for seed in range(3):
            t = random_table(5, 100 + seed)
            res = mc_exact(t)
            assert verify_witness(t, res)
            assert algebraic_degree(t) - 1 <= res.value <= 4

    def test_zero_iff_affine(self):
        for bits in range(256):
            t = TruthTable(3, bits)
            assert (mc_exact(t).value == 0) == (nonlinearity(t) == 0)

    def test_affine_shift_invariance(self, rng):
        for _ in range(40):
            t = TruthTable(3, int(rng.integers(0, 256)))
            a = tuple(int(v) for v in rng.integers(0, 2, 3))
            c = int(rng.integers(0, 2))
            assert mc_exact(t ^ affine_table(a, c, 3)).value == mc_exact(t).value

    def test_restriction_monotone(self, rng):
        for _ in range(60):
            n = int(rng.integers(1, 5))
            c = random_circuit(n, int(rng.integers(1, 20)), rng)
            k = int(rng.integers(0, n + 1))
            fixed = {int(j): int(rng.integers(0, 2)) for j in rng.choice(np.arange(1, n + 1), k, replace=False)}
            r = restrict_circuit(c, fixed)
            assert circuit_truth_table(r) == restrict(circuit_truth_table(c), fixed)
            assert mc_exact(circuit_truth_table(r)).value <= count_and(c)

    def test_degree(self):
        for bits in range(0, 1 << 16, 997):
            t = TruthTable(4, bits)
            assert algebraic_degree(t) == degree_direct(t)


class TestCensus:
    def test_small(self):
        assert classify(0).counts == {0: 2}
        assert classify(1).counts == {0: 4}
        assert classify(2).counts == {0: 8, 1: 8}

    def test_matches_naive_enumeration(self):
        for s, k_max in [(2, 1), (3, 2)]:
            census = classify(s)
            assert [census.cumulative(k) for k in range(k_max + 1)] == census_naive(s, k_max)
            assert census.max_value == k_max

    def test_b4_low_levels_match_naive(self):
        census = classify(4)
        assert [census.cumulative(k) for k in range(3)] == census_naive(4, 2)

    def test_b4(self):
        census = classify(4)
        assert sum(census.counts.values()) == 1 << 16
        assert census.counts[0] == 32
        # every degree-4 function needs at least 3 ANDs
        assert census.counts[3] >= 1 << 15

    def test_table_agrees_with_counts(self):
        census = classify(3)
        values, counts = np.unique(census.table, return_counts=True)
        assert dict(zip(values.tolist(), counts.tolist())) == census.counts

    def test_tail(self):
        assert classify(2).tail(0) == 0.5
        assert classify(2).tail(1) == 0.0

    def test_cap(self):
        with pytest.raises(CapExceeded, match="mc_solver"):
            classify(5)


class TestVerifyBound:
    def test_s2(self):
        rows = verify_counting_bound(2, 1)
        assert [(r.cumulative, r.bound) for r in rows] == [(8, 8), (16, 1024)]
        assert rows[0].slack == 0

    def test_s3_k0_tight(self):
        (row,) = verify_counting_bound(3, 0)
        assert row.cumulative == row.bound == 16
        assert row.line() == "k=0 count=16 cumulative=16 bound=16 ok=true"

    @pytest.mark.parametrize("s", [0, 1, 2, 3, 4])
    def test_affine_count_equals_k0_bound(self, s):
        assert classify(s).cumulative(0) == counting_bound(s, 0) == 2 ** (s + 1)
