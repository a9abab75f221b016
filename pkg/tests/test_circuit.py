import itertools

import numpy as np
import pytest

from boolnl.circuit import (
    AND,
    ONE,
    XOR,
    Circuit,
    CircuitBuilder,
    Gate,
    NormalForm,
    circuit_truth_table,
    count_and,
    count_xor,
    eliminate_dead,
    evaluate_circuit,
    from_normal_form,
    parse,
    parse_formula,
    random_circuit,
    restrict_circuit,
    size_bound,
    to_normal_form,
    xor_bound,
)
from boolnl.errors import DimensionError, ParseError
from boolnl.truth_table import TruthTable, restrict

NOT1 = "INPUTS 1\nw2 = ONE\nw3 = XOR w1 w2\nOUTPUT w3\n"
X1X3_1 = "INPUTS 3\nw4 = ONE\nw5 = XOR w1 w3\nw6 = XOR w5 w4\nOUTPUT w6\n"


class TestParse:
    def test_and(self, and2_circuit):
        assert and2_circuit.n == 2
        assert and2_circuit.gates == (Gate(3, AND, 1, 2),)
        assert and2_circuit.output == 3

    def test_not(self):
        c = parse(NOT1)
        assert [evaluate_circuit(c, (b,)) for b in (0, 1)] == [1, 0]

    def test_comments_and_whitespace(self):
        c = parse("# and gate\nINPUTS 2   \n\n  w3 =  AND   w1 w2  # the gate\nOUTPUT w3")
        assert c.serialize() == "INPUTS 2\nw3 = AND w1 w2\nOUTPUT w3\n"

    def test_roundtrip(self, rng):
        for _ in range(50):
            c = random_circuit(5, 20, rng)
            assert parse(c.serialize()) == c

    def test_gaps_in_wire_numbers_preserved(self):
        text = "INPUTS 1\nw5 = ONE\nw9 = XOR w1 w5\nOUTPUT w9\n"
        assert parse(text).serialize() == text

    @pytest.mark.parametrize("text,msg", [
        ("INPUTS 2\nw3 = AND w1 w4\nw4 = ONE\nOUTPUT w3", "not defined"),
        ("INPUTS 2\nw3 = NAND w1 w2\nOUTPUT w3", "opcode"),
        ("INPUTS 2\nw3 = AND w1 w2", "OUTPUT"),
        ("INPUTS 2\nw3 = AND w1 x2\nOUTPUT w3", "wire name"),
        ("w3 = AND w1 w2\nOUTPUT w3", "INPUTS"),
        ("INPUTS 2\nw2 = ONE\nOUTPUT w2", "numbered"),
        ("INPUTS 2\nw3 = ONE\nOUTPUT w7", "output"),
        ("INPUTS 2\nw3 = AND w1\nOUTPUT w3", "two operands"),
    ])
    def test_errors(self, text, msg):
        with pytest.raises(ParseError, match=msg):
            parse(text)


class TestEvaluation:
    def test_and(self, and2_circuit):
        assert evaluate_circuit(and2_circuit, (1, 1)) == 1
        assert evaluate_circuit(and2_circuit, (0, 1)) == 0

    def test_mismatch(self, and2_circuit):
        with pytest.raises(DimensionError):
            evaluate_circuit(and2_circuit, (1,))

    def test_truth_tables(self, and2_circuit):
        assert circuit_truth_table(and2_circuit).to_text() == "0001"
        c = parse("INPUTS 2\nw3 = ONE\nw4 = XOR w1 w2\nw5 = XOR w4 w3\nOUTPUT w5")
        assert circuit_truth_table(c).to_text() == "1001"
        one = parse("INPUTS 3\nw4 = ONE\nOUTPUT w4")
        assert circuit_truth_table(one) == TruthTable.constant(1, 3)

    def test_table_matches_pointwise(self, rng):
        for _ in range(30):
            c = random_circuit(6, 25, rng)
            tt = circuit_truth_table(c)
            for i in range(64):
                x = tuple((i >> j) & 1 for j in range(6))
                assert tt[i] == evaluate_circuit(c, x)


class TestCountAnd:
    def test_examples(self, and2_circuit, xor2_circuit):
        assert count_and(and2_circuit) == 1
        assert count_and(xor2_circuit) == 0
        dead = parse("INPUTS 2\nw3 = AND w1 w2\nw4 = AND w1 w1\nOUTPUT w3")
        assert count_and(dead) == 2
        assert count_and(eliminate_dead(dead)) == 1
        assert circuit_truth_table(eliminate_dead(dead)) == circuit_truth_table(dead)


class TestRestrictCircuit:
    def test_examples(self, and2_circuit):
        r1 = restrict_circuit(and2_circuit, {2: 1})
        assert r1.n == 1 and count_and(r1) == 0
        assert circuit_truth_table(r1).to_text() == "01"
        r0 = restrict_circuit(and2_circuit, {2: 0})
        assert count_and(r0) == 0
        assert circuit_truth_table(r0).to_text() == "00"

    def test_random_commuting_diagram(self, rng):
        for _ in range(40):
            c = random_circuit(8, int(rng.integers(1, 65)), rng)
            tt = circuit_truth_table(c)
            fixed = {int(j): int(rng.integers(0, 2)) for j in rng.choice(np.arange(1, 9), 4, replace=False)}
            r = restrict_circuit(c, fixed)
            assert circuit_truth_table(r) == restrict(tt, fixed)
            assert count_and(r) <= count_and(c)

    def test_all_single_variable_restrictions(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 9))
            c = random_circuit(n, int(rng.integers(1, 65)), rng)
            tt = circuit_truth_table(c)
            for j in range(1, n + 1):
                for b in (0, 1):
                    r = restrict_circuit(c, {j: b})
                    assert circuit_truth_table(r) == restrict(tt, {j: b})
                    assert count_and(r) <= count_and(c)

    def test_and_with_constant_disappears(self):
        c = parse("INPUTS 3\nw4 = AND w1 w2\nw5 = AND w4 w3\nOUTPUT w5")
        assert count_and(restrict_circuit(c, {1: 1})) == 1
        assert count_and(restrict_circuit(c, {1: 1, 3: 1})) == 0


class TestNormalForm:
    def test_pure_xor(self):
        nf = to_normal_form(parse(X1X3_1))
        assert nf.M == 0
        assert nf.out_mask == 0b1011  # {1, x1, x3}

    def test_and(self, and2_circuit):
        nf = to_normal_form(and2_circuit)
        assert nf.ands == ((0b010, 0b100),)
        assert nf.out_mask == 1 << 3

    def test_mixed(self):
        # (x1 + x2) & (x2 + 1) + x1
        c = parse("INPUTS 2\nw3 = ONE\nw4 = XOR w1 w2\nw5 = XOR w2 w3\n"
                  "w6 = AND w4 w5\nw7 = XOR w6 w1\nOUTPUT w7")
        nf = to_normal_form(c)
        assert nf.ands == ((0b110, 0b101),)
        assert nf.out_mask == (1 << 3) | 0b10
        assert nf.truth_table() == circuit_truth_table(c)
        assert "o1 = (x1 + x2) & (1 + x2)" in nf.describe()

    def test_identity(self):
        c = from_normal_form(NormalForm(1, (), 0b10))
        assert c.size == 0 and c.output == 1

    def test_xor_bound_example(self):
        nf = NormalForm(3, ((0b1111, 0b1110),), 0b11111)
        c = from_normal_form(nf)
        assert count_xor(c) <= 15 == xor_bound(3, 1)
        assert count_and(c) == 1
        assert circuit_truth_table(c) == nf.truth_table()

    def test_rejects_forward_reference(self):
        with pytest.raises(ValueError):
            NormalForm(2, ((1 << 3, 0b10),), 0)

    def test_exhaustive_small_circuits(self):
        # every 2-input circuit of up to 4 gates, output on the last wire
        def extend(gates, depth):
            yield gates
            if depth == 4:
                return
            w = 2 + len(gates) + 1
            options = [Gate(w, ONE)]
            for u, v in itertools.combinations_with_replacement(range(1, w), 2):
                options += [Gate(w, AND, u, v), Gate(w, XOR, u, v)]
            for g in options:
                yield from extend(gates + (g,), depth + 1)

        count = 0
        for gates in extend((), 0):
            c = Circuit(2, gates, gates[-1].wire if gates else 1)
            nf = to_normal_form(c)
            back = from_normal_form(nf)
            tt = circuit_truth_table(c)
            assert circuit_truth_table(back) == tt
            assert count_and(back) == nf.M == count_and(c)
            count += 1
        assert count > 50000

    def test_random_bounds(self, rng):
        for _ in range(100):
            n = int(rng.integers(3, 9))
            c = random_circuit(n, int(rng.integers(1, 65)), rng)
            nf = to_normal_form(c)
            back = from_normal_form(nf)
            assert nf.truth_table() == circuit_truth_table(c) == circuit_truth_table(back)
            assert nf.M == count_and(c) == count_and(back)
            assert count_xor(back) <= xor_bound(n, nf.M)
            assert back.size <= size_bound(n, nf.M)


class TestFormula:
    def test_or_desugars_with_one_and(self):
        c = parse_formula("x1 | x2")
        assert circuit_truth_table(c).to_text() == "0111"
        assert count_and(c) == 1

    def test_precedence(self):
        c = parse_formula("x1 | x2 & x3", 3)
        expect = [a | (b & d) for d in (0, 1) for b in (0, 1) for a in (0, 1)]
        assert [int(ch) for ch in circuit_truth_table(c).to_text()] == expect

    def test_constants_and_negation(self):
        assert circuit_truth_table(parse_formula("~x1 ^ 1", 1)).to_text() == "01"
        assert circuit_truth_table(parse_formula("0", 2)) == TruthTable.constant(0, 2)

    def test_errors(self):
        with pytest.raises(ParseError):
            parse_formula("x1 &")
        with pytest.raises(ParseError):
            parse_formula("x3", 2)
        with pytest.raises(ParseError):
            parse_formula("(x1")


def test_builder_numbering():
    b = CircuitBuilder(2)
    w = b.or_(1, b.not_(2))
    c = b.build(w)
    assert [g.wire for g in c.gates] == list(range(3, 3 + c.size))
