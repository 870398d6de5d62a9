"""Instance families: maps from a classical bitstring to a circuit.

These are the "problems" a client delegates.  The toy family is the audit
workhorse — its four branches hit both deterministic corners, the uniform
coin, and an irrational acceptance probability, so a scheme cannot pass by
accident.  The degenerate families answer the converse question: blindness
becomes easy exactly when the family stops depending on its input.
"""

from __future__ import annotations

from .circuit import CNOT, Circuit, H, T, X
from .reductions import build_dqc1_reduction


def _require_bits(x: str) -> str:
    if not x or any(ch not in "01" for ch in x):
        raise ValueError(f"instance must be a non-empty bitstring, got {x!r}")
    return x


def toy_family(x: str) -> Circuit:
    """Branch on the instance value mod 4.

    Acceptance probabilities of the four branches: 1, 0, 1/2, and
    (2 - sqrt(2))/4 — two certain outcomes, one fair coin, one irrational.
    """
    branch = int(_require_bits(x), 2) % 4
    if branch == 0:
        return Circuit(2, (X(0),))
    if branch == 1:
        return Circuit(2, ())
    if branch == 2:
        return Circuit(2, (H(0),))
    return Circuit(2, (H(0), T(0), H(0)))


def constant_family(circuit: Circuit, name: str):
    """Every instance selects the same circuit."""

    def family(x: str) -> Circuit:
        _require_bits(x)
        return circuit

    family.__name__ = name
    return family


# A circuit whose clean-qubit output is an exact fair coin, one whose output
# is never 1, and a five-qubit compiled instance whose output probability is
# exactly 3/32 — handy as a fixed non-dyadic sampling target.
degenerate_half = constant_family(Circuit(2, (CNOT(1, 0),)), "degenerate_half")
degenerate_zero = constant_family(Circuit(2, ()), "degenerate_zero")
degenerate_compiled = constant_family(
    build_dqc1_reduction(Circuit(1, (H(0),))).dqc1_circuit, "degenerate_compiled"
)

FAMILIES = {
    "toy": toy_family,
    "deg-half": degenerate_half,
    "deg-zero": degenerate_zero,
    "deg-compiled": degenerate_compiled,
}
