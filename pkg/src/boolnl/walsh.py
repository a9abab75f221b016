"""Walsh spectrum, nonlinearity and best affine approximation.

``fwt`` is the usual in-place butterfly on the +-1 sign vector.  The
brute-force nonlinearity scan is kept in the library so callers (and the
CLI's ``--paranoid`` mode) can cross-check the fast path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded
from .truth_table import TruthTable, assignment_of, var_bits

BRUTEFORCE_MAX_VARS = 16


@dataclass(frozen=True)
class WalshSpectrum:
    n: int
    coefficients: np.ndarray  # int32, index a holds W_f(a)

    def __getitem__(self, a: int) -> int:
        return int(self.coefficients[a])

    def max_abs(self) -> int:
        return int(np.abs(self.coefficients).max())

    def lines(self):
        """``a=<a_1..a_n> W=<int>`` rows, ``a_1`` printed first."""
        for a, w in enumerate(self.coefficients.tolist()):
            bits = "".join(str(b) for b in assignment_of(a, self.n))
            yield f"a={bits} W={w}"


@dataclass(frozen=True)
class AffineApproximation:
    a: tuple[int, ...]
    c: int
    agreements: int

    def table(self) -> TruthTable:
        from .truth_table import affine_table

        return affine_table(self.a, self.c, len(self.a))


def walsh_transform(values: np.ndarray) -> np.ndarray:
    """Unnormalised Hadamard transform of a length-2^n integer vector."""
    out = np.array(values, dtype=np.int32, copy=True)
    size = out.size
    h = 1
    while h < size:
        blocks = out.reshape(-1, 2, h)
        lo = blocks[:, 0, :].copy()
        hi = blocks[:, 1, :]
        blocks[:, 0, :] += hi
        blocks[:, 1, :] = lo - hi
        h *= 2
    return out


def fwt(tt: TruthTable) -> WalshSpectrum:
    signs = 1 - 2 * tt.to_array().astype(np.int32)
    return WalshSpectrum(tt.n, walsh_transform(signs))


def nonlinearity(tt: TruthTable) -> int:
    """Distance from ``tt`` to the nearest affine function, via the FWT."""
    return (tt.size - fwt(tt).max_abs()) // 2


def best_affine_approximation(tt: TruthTable) -> AffineApproximation:
    """Closest affine function; ties go to the smallest ``a``, then ``c=0``."""
    spec = fwt(tt).coefficients
    absw = np.abs(spec)
    top = int(absw.max())
    a = int(np.argmax(absw == top))
    c = 0 if spec[a] == top else 1
    return AffineApproximation(assignment_of(a, tt.n), c, (tt.size + top) // 2)


def nonlinearity_bruteforce(tt: TruthTable) -> int:
    """Literal scan over all 2^(n+1) affine functions."""
    if tt.n > BRUTEFORCE_MAX_VARS:
        raise CapExceeded("walsh", "n", tt.n, BRUTEFORCE_MAX_VARS)
    size = tt.size
    cols = [var_bits(j, tt.n) for j in range(1, tt.n + 1)]
    best = 0
    lin = 0
    # Gray-code walk: consecutive linear functions differ in one variable
    for step in range(size):
        if step:
            lin ^= cols[(step & -step).bit_length() - 1]
        d = (tt.bits ^ lin).bit_count()
        best = max(best, size - d, d)  # d disagreements with lin, size-d with lin+1
    return size - best
