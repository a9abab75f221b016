"""Small-scale restriction distinguisher against a keyed circuit family.

The algorithm reads the oracle ``H`` on the 2^s points ``x 0^(n-s)``,
computes the multiplicative complexity of that restriction and answers 1
when it exceeds the AND budget of the family.  A keyed oracle restricted
this way can never exceed the budget, so its answer is always 0; a random
oracle exceeds it with the probability given by the census of B_s.

The toy family below is *not* pseudorandom.  It only has the property the
argument relies on: a public circuit with a known AND count, so that every
key and every restriction yields a function of bounded multiplicative
complexity.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .circuit import Circuit, CircuitBuilder, count_and, evaluate_circuit, restrict_circuit
from .errors import CapExceeded
from .mc_solver import CENSUS_MAX_VARS, MC_MAX_VARS, classify, mc_exact
from .truth_table import TruthTable, assignment_of

FAMILY_MAX_VARS = 16


@dataclass(frozen=True)
class KeyedFamily:
    n: int
    rounds: int
    circuit: Circuit  # inputs 1..n are data, n+1..2n are key

    @property
    def and_count(self) -> int:
        return count_and(self.circuit)

    def keyed(self, key: int) -> Circuit:
        """Data-only circuit with the key inputs fixed (bit j-1 of key is k_j)."""
        fixed = {self.n + j: (key >> (j - 1)) & 1 for j in range(1, self.n + 1)}
        return restrict_circuit(self.circuit, fixed)


def toy_family(n: int, rounds: int = 2) -> KeyedFamily:
    """Key-alternating toy family with ceil(n/2) AND gates per round.

    Each round XORs the key (rotated by the round number) into the state and
    applies ``s[i] += s[i+1] & s[i+2]`` (indices mod n) for the first
    ceil(n/2) positions, then rotates the state by one.  The output is the
    XOR of the first two state bits (just ``s[0]`` when n = 1).
    """
    if not 1 <= n <= FAMILY_MAX_VARS:
        raise CapExceeded("distinguisher", "n", n, FAMILY_MAX_VARS)
    b = CircuitBuilder(2 * n)
    state = list(range(1, n + 1))
    key = list(range(n + 1, 2 * n + 1))
    for r in range(rounds):
        state = [b.xor(state[i], key[(i + r) % n]) for i in range(n)]
        for i in range((n + 1) // 2):
            state[i] = b.xor(state[i], b.and_(state[(i + 1) % n], state[(i + 2) % n]))
        state = state[1:] + state[:1]
    out = state[0] if n == 1 else b.xor(state[0], state[1])
    return KeyedFamily(n, rounds, b.build(out))


# ---- oracles -------------------------------------------------------------

class Oracle:
    n: int

    def query(self, x: tuple[int, ...]) -> int:
        raise NotImplementedError


class KeyedOracle(Oracle):
    def __init__(self, family: KeyedFamily, key: int):
        self.n = family.n
        self.key = key
        self._circuit = family.keyed(key)

    def query(self, x):
        return evaluate_circuit(self._circuit, x)


class RandomOracle(Oracle):
    """Uniform random function, sampled lazily and memoised."""

    def __init__(self, n: int, seed):
        self.n = n
        self._rng = np.random.default_rng(seed)
        self._answers: dict[tuple[int, ...], int] = {}

    def query(self, x):
        x = tuple(x)
        if x not in self._answers:
            self._answers[x] = int(self._rng.integers(0, 2))
        return self._answers[x]


class TableOracle(Oracle):
    """Oracle answering from a fixed truth table."""

    def __init__(self, tt: TruthTable):
        self.n = tt.n
        self.tt = tt

    def query(self, x):
        from .truth_table import evaluate

        return evaluate(self.tt, x)


@dataclass(frozen=True)
class OracleSpec:
    mode: str  # "keyed-family" | "random"
    n: int
    key_or_seed: int
    rounds: int = 2

    def build(self) -> Oracle:
        if self.mode == "keyed-family":
            return KeyedOracle(toy_family(self.n, self.rounds), self.key_or_seed)
        if self.mode == "random":
            return RandomOracle(self.n, self.key_or_seed)
        raise ValueError(f"unknown oracle mode {self.mode!r}")


# ---- configuration and algorithms ----------------------------------------

@dataclass(frozen=True)
class DistinguisherConfig:
    s: int = 4
    and_budget: int = 4
    rho: float = 1.0
    epsilon: float | None = None

    def __post_init__(self):
        if not 1 <= self.s <= MC_MAX_VARS:
            raise CapExceeded("distinguisher", "s", self.s, MC_MAX_VARS)
        if self.and_budget < 0:
            raise ValueError("AND budget must be non-negative")
        if self.rho < 1:
            raise ValueError("approximation factor rho must be >= 1")

    @classmethod
    def from_epsilon(cls, s: int, and_budget: int, epsilon: float, n: int) -> DistinguisherConfig:
        """Set rho = (2 - epsilon)^(n/2)."""
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        return cls(s, and_budget, (2 - epsilon) ** (n / 2), epsilon)

    @property
    def threshold(self) -> float:
        return (self.and_budget + 1) * self.rho


def restricted_table(oracle: Oracle, s: int) -> TruthTable:
    """Query H at every ``x 0^(n-s)`` and return the table of the restriction."""
    if s > oracle.n:
        raise ValueError(f"restriction size s={s} exceeds oracle input length {oracle.n}")
    pad = (0,) * (oracle.n - s)
    return TruthTable.from_bits([oracle.query(assignment_of(i, s) + pad) for i in range(1 << s)], s)


def distinguish_exact(oracle: Oracle, cfg: DistinguisherConfig) -> int:
    h = restricted_table(oracle, cfg.s)
    return int(mc_exact(h).value > cfg.and_budget)


def distinguish_approx(oracle: Oracle, cfg: DistinguisherConfig,
                       approx: Callable[[TruthTable], float]) -> int:
    h = restricted_table(oracle, cfg.s)
    return int(approx(h) >= cfg.threshold)


def inflating_approximator(rho: float) -> Callable[[TruthTable], float]:
    """Worst admissible approximator: always reports rho times the true value."""

    def approx(tt: TruthTable) -> float:
        return rho * mc_exact(tt).value

    return approx


def validate_approximator(approx: Callable[[TruthTable], float], rho: float,
                          sizes=(2, 3)) -> None:
    """Reject ``approx`` unless exact <= approx <= rho*exact on all of B_s."""
    for s in sizes:
        census = classify(s)
        for bits in range(1 << (1 << s)):
            exact = int(census.table[bits])
            got = approx(TruthTable(s, bits))
            if not exact <= got <= rho * exact + 1e-9:
                raise ValueError(
                    f"approximator returned {got} on {TruthTable(s, bits)} (n={s}); "
                    f"must lie in [{exact}, {rho * exact}]"
                )


# ---- experiments ---------------------------------------------------------

@dataclass
class ExperimentReport:
    n: int
    s: int
    budget: int
    trials: int
    freq_keyed: float
    freq_random: float
    advantage: float
    census_expectation: float | None
    mc_keyed: list[int] = field(default_factory=list)
    mc_random: list[int] = field(default_factory=list)

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("mc_keyed")
        d.pop("mc_random")
        return d

    def to_json(self, full: bool = False) -> str:
        return json.dumps(asdict(self) if full else self.summary(), sort_keys=True, allow_nan=False)

    def within_binomial(self, sigmas: float = 4.0) -> bool:
        """Random-arm frequency against the census expectation."""
        if self.census_expectation is None:
            return True
        p = self.census_expectation
        sd = math.sqrt(p * (1 - p) / self.trials)
        return abs(self.freq_random - p) <= sigmas * sd


def run_experiment(n: int, cfg: DistinguisherConfig, trials: int, seed: int,
                   rounds: int = 2) -> ExperimentReport:
    """Run the exact distinguisher on ``trials`` keyed and ``trials`` random oracles.

    Trial ``i`` draws its key from ``SeedSequence([seed, i, 0])`` and its
    random oracle from ``SeedSequence([seed, i, 1])``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if cfg.s > n:
        raise ValueError(f"restriction size s={cfg.s} exceeds n={n}")
    family = toy_family(n, rounds)
    mc_keyed, mc_random = [], []
    for i in range(trials):
        key = int(np.random.default_rng(np.random.SeedSequence([seed, i, 0])).integers(0, 1 << n))
        mc_keyed.append(mc_exact(restricted_table(KeyedOracle(family, key), cfg.s)).value)
        oracle = RandomOracle(n, np.random.SeedSequence([seed, i, 1]))
        mc_random.append(mc_exact(restricted_table(oracle, cfg.s)).value)
    freq_keyed = sum(v > cfg.and_budget for v in mc_keyed) / trials
    freq_random = sum(v > cfg.and_budget for v in mc_random) / trials
    expectation = classify(cfg.s).tail(cfg.and_budget) if cfg.s <= CENSUS_MAX_VARS else None
    return ExperimentReport(
        n=n, s=cfg.s, budget=cfg.and_budget, trials=trials,
        freq_keyed=freq_keyed, freq_random=freq_random,
        advantage=abs(freq_random - freq_keyed),
        census_expectation=expectation,
        mc_keyed=mc_keyed, mc_random=mc_random,
    )
