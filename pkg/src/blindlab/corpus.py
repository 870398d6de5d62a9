"""Seeded circuit corpora for the verification suites.

Draws stay honest: a redraw only happens when the compiled sandwich would
exceed the exact-simulation budget, never based on any computed probability.
Zero-acceptance circuits are built to be zero by construction (no gate ever
reaches qubit 0 other than through an explicitly cancelled block), so they
exercise the exact-zero chain without thresholds.
"""

from __future__ import annotations

import random

from .circuit import Circuit, DIAGONAL_KINDS, GATE_ARITY, Gate, random_circuit
from .reductions import build_iqp_reduction


def draw_corpus_circuit(
    rng: random.Random,
    n_qubits: int,
    *,
    min_gates: int | None = None,
    max_gates: int | None = None,
    max_compiled_qubits: int = 16,
) -> Circuit:
    """One random circuit over the full gate set, redrawn while its sandwich
    compilation needs more than `max_compiled_qubits` wires."""
    lo = n_qubits if min_gates is None else min_gates
    hi = n_qubits + 6 if max_gates is None else max_gates
    while True:
        c = random_circuit(n_qubits, rng.randint(lo, hi), rng)
        if build_iqp_reduction(c).iqp.n_qubits <= max_compiled_qubits:
            return c


def reduction_corpus(
    count: int,
    seed: int,
    *,
    max_n: int = 4,
    max_compiled_qubits: int = 16,
) -> list[Circuit]:
    """Deterministic corpus cycling the qubit count through 1..max_n."""
    rng = random.Random(seed)
    return [
        draw_corpus_circuit(
            rng, 1 + i % max_n, max_compiled_qubits=max_compiled_qubits
        )
        for i in range(count)
    ]


def draw_zero_acceptance_circuit(
    rng: random.Random,
    n_qubits: int,
    *,
    max_compiled_qubits: int = 16,
) -> Circuit:
    """A circuit with acceptance probability exactly zero, by construction.

    Three shapes: gates that never touch qubit 0; a purely diagonal circuit
    (the all-zeros input stays put up to phase); or a block followed by its
    exact inverse with one of the former appended.
    """
    while True:
        style = rng.randrange(3)
        gates: list[Gate] = []
        if style == 2:
            block = random_circuit(n_qubits, rng.randint(1, n_qubits + 2), rng)
            gates += list(block.gates) + list(block.inverse().gates)
            style = rng.randrange(2)
        if style == 0 and n_qubits >= 2:
            sub = random_circuit(n_qubits - 1, rng.randint(1, n_qubits + 4), rng)
            gates += [g.shifted(1) for g in sub.gates]
        else:
            diag = tuple(k for k in GATE_ARITY if k in DIAGONAL_KINDS)
            sub = random_circuit(n_qubits, rng.randint(1, n_qubits + 4), rng, diag)
            gates += list(sub.gates)
        c = Circuit(n_qubits, tuple(gates))
        if build_iqp_reduction(c).iqp.n_qubits <= max_compiled_qubits:
            return c
