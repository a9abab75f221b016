"""Nonlinearity and multiplicative complexity of Boolean functions."""
from .circuit import (
    Circuit,
    CircuitBuilder,
    NormalForm,
    circuit_truth_table,
    count_and,
    evaluate_circuit,
    from_normal_form,
    parse,
    parse_formula,
    restrict_circuit,
    to_normal_form,
)
from .errors import BoolNLError, CapExceeded, DimensionError, ParseError
from .mc_solver import McCensus, McResult, classify, counting_bound, mc_decision, mc_exact, verify_counting_bound
from .truth_table import TruthTable, affine_table, evaluate, hamming_distance, random_table, restrict
from .walsh import AffineApproximation, WalshSpectrum, best_affine_approximation, fwt, nonlinearity, nonlinearity_bruteforce

__version__ = "0.1.0"
