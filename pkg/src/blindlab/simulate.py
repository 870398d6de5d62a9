"""Exact simulation of circuits and the two sampling models.

The engine stores 4-tuples of integers per basis index (coefficients over the
basis 1, w, w^2, w^3 with w = exp(i*pi/4)) and one global sqrt(2) exponent for
the whole state: only H changes the denominator, and it does so uniformly.
All returned probabilities are exact.

One-clean-qubit (DQC1) output distributions are computed by enumerating every
basis input of the maximally mixed register, never by density matrices; a
separate floating-point density-matrix oracle lives in floatsim.py purely for
cross-checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .circuit import Circuit, IqpForm
from .exact import ExactAmplitude, ExactProbability, abs2_parts, omega_mul

_ZERO = (0, 0, 0, 0)


class EnumerationBudgetError(RuntimeError):
    """Exact enumeration would exceed the configured qubit budget."""


class _Engine:
    """Dense exact statevector; qubit 0 is the most significant index bit."""

    __slots__ = ("n", "amps", "e")

    def __init__(self, n: int, basis_index: int = 0):
        self.n = n
        self.amps: list[tuple[int, int, int, int]] = [_ZERO] * (1 << n)
        self.amps[basis_index] = (1, 0, 0, 0)
        self.e = 0

    def _mask(self, q: int) -> int:
        return 1 << (self.n - 1 - q)

    def apply(self, gate) -> None:
        kind = gate.kind
        amps = self.amps
        if kind == "H":
            m = self._mask(gate.qubits[0])
            step = m << 1
            for base in range(0, len(amps), step):
                for i in range(base, base + m):
                    j = i + m
                    a = amps[i]
                    b = amps[j]
                    if a == _ZERO and b == _ZERO:
                        continue
                    amps[i] = (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
                    amps[j] = (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])
            self.e += 1
            return
        if kind == "X":
            m = self._mask(gate.qubits[0])
            step = m << 1
            for base in range(0, len(amps), step):
                for i in range(base, base + m):
                    j = i + m
                    if amps[i] != amps[j]:
                        amps[i], amps[j] = amps[j], amps[i]
            return
        if kind == "Z":
            m = self._mask(gate.qubits[0])
            self._negate_where(m)
            return
        if kind == "S":
            self._phase_on_ones(self._mask(gate.qubits[0]), 2)
            return
        if kind == "T":
            self._phase_on_ones(self._mask(gate.qubits[0]), 1)
            return
        if kind == "PZ":
            k = gate.k
            if k == 0:
                return
            m = self._mask(gate.qubits[0])
            k_clear, k_set = k, (8 - k) % 8
            for i, a in enumerate(amps):
                if a == _ZERO:
                    continue
                amps[i] = omega_mul(a, k_set if i & m else k_clear)
            return
        if kind == "CNOT":
            mc = self._mask(gate.qubits[0])
            mt = self._mask(gate.qubits[1])
            for i, a in enumerate(amps):
                if i & mc and not i & mt:
                    j = i | mt
                    if a != amps[j]:
                        amps[i], amps[j] = amps[j], a
            return
        if kind == "CZ":
            m = self._mask(gate.qubits[0]) | self._mask(gate.qubits[1])
            self._negate_where(m)
            return
        if kind == "CCZ":
            m = (
                self._mask(gate.qubits[0])
                | self._mask(gate.qubits[1])
                | self._mask(gate.qubits[2])
            )
            self._negate_where(m)
            return
        if kind == "TOFFOLI":
            mc = self._mask(gate.qubits[0]) | self._mask(gate.qubits[1])
            mt = self._mask(gate.qubits[2])
            for i, a in enumerate(amps):
                if (i & mc) == mc and not i & mt:
                    j = i | mt
                    if a != amps[j]:
                        amps[i], amps[j] = amps[j], a
            return
        raise ValueError(f"unknown gate kind {kind!r}")

    def _negate_where(self, mask: int) -> None:
        amps = self.amps
        for i, a in enumerate(amps):
            if (i & mask) == mask and a != _ZERO:
                amps[i] = (-a[0], -a[1], -a[2], -a[3])

    def _phase_on_ones(self, mask: int, k: int) -> None:
        amps = self.amps
        for i, a in enumerate(amps):
            if i & mask and a != _ZERO:
                amps[i] = omega_mul(a, k)

    def run(self, circuit: Circuit) -> "_Engine":
        for gate in circuit.gates:
            self.apply(gate)
        return self

    def masked_probability(self, mask: int, value: int) -> ExactProbability:
        """Exact probability of the basis event (index & mask) == value."""
        u = v = 0
        for i, a in enumerate(self.amps):
            if (i & mask) == value and a != _ZERO:
                du, dv = abs2_parts(a)
                u += du
                v += dv
        return ExactProbability.from_dyadic(u, v, self.e)

    def amplitude_tuples(self) -> list[tuple[tuple[int, int, int, int], int]]:
        return [(a, self.e) for a in self.amps]


@dataclass(frozen=True)
class Statevector:
    """Exact amplitudes indexed by basis string; qubit 0 is the leading bit."""

    n_qubits: int
    amplitudes: tuple[ExactAmplitude, ...]

    def __post_init__(self):
        if len(self.amplitudes) != 1 << self.n_qubits:
            raise ValueError("amplitude count does not match qubit count")

    def amplitude(self, basis: str) -> ExactAmplitude:
        if len(basis) != self.n_qubits or set(basis) - {"0", "1"}:
            raise ValueError(f"bad basis string {basis!r}")
        return self.amplitudes[int(basis, 2)]

    def norm_squared(self) -> ExactProbability:
        total = ExactProbability.zero()
        for amp in self.amplitudes:
            total = total + amp.abs2()
        return total

    def to_complex_list(self) -> list[complex]:
        return [a.to_complex() for a in self.amplitudes]


@dataclass(frozen=True)
class BinaryDistribution:
    """Exact distribution of one output bit; p0 + p1 = 1 is enforced."""

    p0: ExactProbability
    p1: ExactProbability

    def __post_init__(self):
        if not (self.p0 + self.p1) == ExactProbability.one():
            raise ValueError("probabilities must sum to one exactly")
        if not (self.p0.is_probability() and self.p1.is_probability()):
            raise ValueError("probabilities must lie in [0, 1]")

    @classmethod
    def from_p1(cls, p1: ExactProbability) -> "BinaryDistribution":
        return cls(ExactProbability.one() - p1, p1)

    def as_pair(self) -> tuple[ExactProbability, ExactProbability]:
        return (self.p0, self.p1)

    def __getitem__(self, bit: int) -> ExactProbability:
        if bit == 0:
            return self.p0
        if bit == 1:
            return self.p1
        raise KeyError(bit)


def _engine_for(circuit: Circuit, basis_index: int, max_sim_qubits: int) -> _Engine:
    if circuit.n_qubits > max_sim_qubits:
        raise EnumerationBudgetError(
            f"{circuit.n_qubits} qubits exceeds the simulation budget "
            f"of {max_sim_qubits}"
        )
    return _Engine(circuit.n_qubits, basis_index).run(circuit)


def run_statevector(
    circuit: Circuit, basis: str | None = None, *, max_sim_qubits: int = 22
) -> Statevector:
    """Exact statevector of `circuit` applied to a computational basis state."""
    n = circuit.n_qubits
    if basis is None:
        index = 0
    else:
        if len(basis) != n or set(basis) - {"0", "1"}:
            raise ValueError(f"bad basis string {basis!r}")
        index = int(basis, 2)
    engine = _engine_for(circuit, index, max_sim_qubits)
    amps = tuple(ExactAmplitude(a, engine.e) for a in engine.amps)
    return Statevector(n, amps)


def acceptance_probability(
    circuit: Circuit, basis: str | None = None, *, max_sim_qubits: int = 22
) -> ExactProbability:
    """Exact probability that qubit 0 measures 1 after running on a basis input."""
    n = circuit.n_qubits
    index = 0 if basis is None else int(basis, 2)
    engine = _engine_for(circuit, index, max_sim_qubits)
    msb = 1 << (n - 1)
    return engine.masked_probability(msb, msb)


def dqc1_distribution(
    circuit: Circuit, *, max_enumeration_qubits: int = 20
) -> BinaryDistribution:
    """Output distribution of qubit 0 in the one-clean-qubit model.

    Qubit 0 starts in |0>, every other qubit is maximally mixed.  Computed
    exactly by enumerating all 2^(n-1) basis inputs of the mixed register.
    """
    n = circuit.n_qubits
    if n > max_enumeration_qubits:
        raise EnumerationBudgetError(
            f"{n} qubits exceeds the exact enumeration budget of "
            f"{max_enumeration_qubits}"
        )
    msb = 1 << (n - 1)
    total_u = 0
    total_v = 0
    e = 0
    for y in range(1 << (n - 1)):
        engine = _Engine(n, y).run(circuit)  # index y < 2^(n-1) has qubit 0 clear
        u = v = 0
        for i in range(msb, msb << 1):
            a = engine.amps[i]
            if a != _ZERO:
                du, dv = abs2_parts(a)
                u += du
                v += dv
        total_u += u
        total_v += v
        e = engine.e
    p1 = ExactProbability.from_dyadic(total_u, total_v, e + n - 1)
    return BinaryDistribution.from_p1(p1)


def iqp_marginal_distribution(
    form: IqpForm, m: int, *, max_sim_qubits: int = 22
) -> BinaryDistribution:
    """Distribution of the all-ones event on the first m wires of an IQP circuit,
    run on the all-zeros input."""
    n = form.n_qubits
    if not 1 <= m <= n:
        raise ValueError(f"marginal width m={m} out of range 1..{n}")
    engine = _engine_for(form.to_circuit(), 0, max_sim_qubits)
    mask = ((1 << m) - 1) << (n - m)
    p1 = engine.masked_probability(mask, mask)
    return BinaryDistribution.from_p1(p1)


def sample_outcome(
    dist: BinaryDistribution, rng: random.Random, *, precision_bits: int = 128
) -> int:
    """Draw 0 or 1 with the exact probabilities of `dist`.

    The uniform draw is compared against the binary expansion of p1 bit by
    bit, so no floating point is involved; after `precision_bits` agreeing
    bits the draw is truncated (a 2^-precision_bits bias toward 0).
    """
    x = dist.p1
    for _ in range(precision_bits):
        x = x.doubled()
        if (x - 1).sign() >= 0:
            p_bit = 1
            x = x - 1
        else:
            p_bit = 0
        u_bit = rng.getrandbits(1)
        if u_bit != p_bit:
            return 1 if u_bit < p_bit else 0
    return 0


def sample_from_distribution(
    dist: dict[str, ExactProbability],
    rng: random.Random,
    *,
    precision_bits: int = 128,
) -> str:
    """Draw a key of `dist` with its exact probability (same truncation rule)."""
    if not dist:
        raise ValueError("cannot sample from an empty distribution")
    keys = sorted(dist)
    total = ExactProbability.zero()
    for key in keys:
        total = total + dist[key]
    if total != ExactProbability.one():
        raise ValueError(f"distribution sums to {total!r}, not 1")
    u = Fraction(rng.getrandbits(precision_bits), 1 << precision_bits)
    cumulative = ExactProbability.zero()
    for key in keys:
        cumulative = cumulative + dist[key]
        if cumulative > u:
            return key
    return keys[-1]


@dataclass(frozen=True)
class MultiplicativeErrorReport:
    """Outcome of the per-outcome relative-error test |q_z - p_z| <= eps * p_z."""

    ideal: BinaryDistribution
    claimed: BinaryDistribution
    epsilon: Fraction
    residuals: tuple[ExactProbability, ExactProbability]
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "ideal": {
                "p0": self.ideal.p0.triple_string(),
                "p1": self.ideal.p1.triple_string(),
            },
            "claimed": {
                "p0": self.claimed.p0.triple_string(),
                "p1": self.claimed.p1.triple_string(),
            },
            "epsilon": str(self.epsilon),
            "residuals": [r.triple_string() for r in self.residuals],
            "pass": self.passed,
            "approx": {
                "ideal": [float(self.ideal.p0), float(self.ideal.p1)],
                "claimed": [float(self.claimed.p0), float(self.claimed.p1)],
                "residuals": [float(r) for r in self.residuals],
            },
        }


def check_multiplicative_error(
    ideal: BinaryDistribution,
    claimed: BinaryDistribution,
    epsilon: Fraction | int | str,
) -> MultiplicativeErrorReport:
    """Exact multiplicative-error audit of `claimed` against `ideal`.

    Passes iff |claimed_z - ideal_z| <= epsilon * ideal_z for both outcomes;
    in particular any ideal zero must be matched exactly.
    """
    eps = Fraction(epsilon)
    if not 0 <= eps < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {eps}")
    residuals = tuple(
        abs(claimed[z] - ideal[z]) for z in (0, 1)
    )
    passed = all(residuals[z] <= ideal[z] * eps for z in (0, 1))
    return MultiplicativeErrorReport(ideal, claimed, eps, residuals, passed)
