"""Immutable gate-list circuits over the fixed gate set and their text format.

Gate set: H, X, Z, S, T, CNOT, CZ, CCZ, TOFFOLI and the diagonal phase
family PZ(k) = diag(w^k, w^-k) for k in 0..7, w = exp(i*pi/4).  Qubit 0 is
the measured/output qubit and the most significant bit of basis strings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

GATE_ARITY = {
    "H": 1,
    "X": 1,
    "Z": 1,
    "S": 1,
    "T": 1,
    "PZ": 1,
    "CNOT": 2,
    "CZ": 2,
    "CCZ": 3,
    "TOFFOLI": 3,
}

# gates diagonal in the computational basis
DIAGONAL_KINDS = frozenset({"Z", "S", "T", "PZ", "CZ", "CCZ"})

SELF_INVERSE_KINDS = frozenset({"H", "X", "Z", "CNOT", "CZ", "CCZ", "TOFFOLI"})


class CircuitFormatError(ValueError):
    """Raised on malformed circuit text; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    k: int = 0  # phase octant, PZ only

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = GATE_ARITY[self.kind]
        if len(self.qubits) != arity:
            raise ValueError(
                f"{self.kind} expects {arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} qubits must be distinct: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if self.kind == "PZ":
            if not 0 <= self.k <= 7:
                raise ValueError(f"PZ phase octant must be in 0..7, got {self.k}")
        elif self.k != 0:
            raise ValueError(f"{self.kind} takes no phase parameter")

    def is_diagonal(self) -> bool:
        return self.kind in DIAGONAL_KINDS

    def shifted(self, offset: int) -> "Gate":
        return Gate(self.kind, tuple(q + offset for q in self.qubits), self.k)

    def remapped(self, wire_map) -> "Gate":
        return Gate(self.kind, tuple(wire_map[q] for q in self.qubits), self.k)

    def inverse_gates(self) -> tuple["Gate", ...]:
        """Inverse as a short sequence drawn from the same gate set."""
        if self.kind in SELF_INVERSE_KINDS:
            return (self,)
        q = self.qubits[0]
        if self.kind == "S":
            # S dagger = diag(1, -i) = Z S
            return (S(q), Z(q))
        if self.kind == "T":
            # T dagger = diag(1, w^7) = Z S T
            return (T(q), S(q), Z(q))
        return (PZ((8 - self.k) % 8, q),)


def H(q: int) -> Gate:
    return Gate("H", (q,))


def X(q: int) -> Gate:
    return Gate("X", (q,))


def Z(q: int) -> Gate:
    return Gate("Z", (q,))


def S(q: int) -> Gate:
    return Gate("S", (q,))


def T(q: int) -> Gate:
    return Gate("T", (q,))


def PZ(k: int, q: int) -> Gate:
    return Gate("PZ", (q,), k)


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def CZ(a: int, b: int) -> Gate:
    return Gate("CZ", (a, b))


def CCZ(a: int, b: int, c: int) -> Gate:
    return Gate("CCZ", (a, b, c))


def TOFFOLI(control_a: int, control_b: int, target: int) -> Gate:
    return Gate("TOFFOLI", (control_a, control_b, target))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise ValueError(
                    f"gate {g.kind} on {g.qubits} exceeds {self.n_qubits} qubits"
                )

    def inverse(self) -> "Circuit":
        inv: list[Gate] = []
        for g in reversed(self.gates):
            inv.extend(g.inverse_gates())
        return Circuit(self.n_qubits, tuple(inv))

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts


def parse_circuit(text: str) -> Circuit:
    """Parse the line-oriented circuit format.

    Line 1 holds the qubit count; each further line is a gate name followed by
    decimal qubit indices ("PZ k q" for the phase gate).  '#' starts a comment
    and blank lines are skipped.
    """
    n_qubits: int | None = None
    gates: list[Gate] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n_qubits is None:
            if len(tokens) != 1:
                raise CircuitFormatError(line_number, "expected a bare qubit count")
            try:
                n_qubits = int(tokens[0])
            except ValueError:
                raise CircuitFormatError(
                    line_number, f"qubit count is not an integer: {tokens[0]!r}"
                ) from None
            if n_qubits < 1:
                raise CircuitFormatError(line_number, "qubit count must be positive")
            continue
        kind = tokens[0].upper()
        if kind not in GATE_ARITY:
            raise CircuitFormatError(line_number, f"unknown gate name {tokens[0]!r}")
        args = tokens[1:]
        try:
            values = [int(a) for a in args]
        except ValueError:
            raise CircuitFormatError(
                line_number, f"non-integer qubit index in {line!r}"
            ) from None
        if kind == "PZ":
            if len(values) != 2:
                raise CircuitFormatError(
                    line_number, f"PZ expects 'PZ k q', got {len(values)} value(s)"
                )
            k, qubits = values[0], values[1:]
            if not 0 <= k <= 7:
                raise CircuitFormatError(
                    line_number, f"PZ phase octant must be in 0..7, got {k}"
                )
        else:
            k, qubits = 0, values
            if len(qubits) != GATE_ARITY[kind]:
                raise CircuitFormatError(
                    line_number,
                    f"{kind} expects {GATE_ARITY[kind]} qubit index(es), "
                    f"got {len(qubits)}",
                )
        if any(q < 0 or q >= n_qubits for q in qubits):
            raise CircuitFormatError(
                line_number, f"qubit index out of range 0..{n_qubits - 1}: {line!r}"
            )
        if len(set(qubits)) != len(qubits):
            raise CircuitFormatError(line_number, f"repeated qubit index in {line!r}")
        gates.append(Gate(kind, tuple(qubits), k))
    if n_qubits is None:
        raise CircuitFormatError(1, "empty circuit text")
    return Circuit(n_qubits, tuple(gates))


def serialize_circuit(c: Circuit) -> str:
    lines = [str(c.n_qubits)]
    for g in c.gates:
        if g.kind == "PZ":
            lines.append(f"PZ {g.k} {g.qubits[0]}")
        else:
            lines.append(" ".join([g.kind, *map(str, g.qubits)]))
    return "\n".join(lines)


@dataclass(frozen=True)
class IqpForm:
    """Hadamard-sandwiched diagonal circuit: H on every wire, a diagonal body,
    H on every wire again."""

    n_qubits: int
    diagonal_gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("IQP form needs at least one qubit")
        object.__setattr__(self, "diagonal_gates", tuple(self.diagonal_gates))
        for g in self.diagonal_gates:
            if g.kind not in DIAGONAL_KINDS:
                raise ValueError(f"{g.kind} is not diagonal")
            if max(g.qubits) >= self.n_qubits:
                raise ValueError(
                    f"gate {g.kind} on {g.qubits} exceeds {self.n_qubits} qubits"
                )

    def to_circuit(self) -> Circuit:
        layer = tuple(H(q) for q in range(self.n_qubits))
        return Circuit(self.n_qubits, layer + self.diagonal_gates + layer)


def is_iqp_form(c: Circuit) -> IqpForm | None:
    """Recognize an exact Hadamard sandwich; return its body or None."""
    n = c.n_qubits
    if len(c.gates) < 2 * n:
        return None
    head, body, tail = c.gates[:n], c.gates[n:-n], c.gates[-n:]
    for layer in (head, tail):
        if any(g.kind != "H" for g in layer):
            return None
        if sorted(g.qubits[0] for g in layer) != list(range(n)):
            return None
    if any(g.kind not in DIAGONAL_KINDS for g in body):
        return None
    return IqpForm(n, body)


def decompose_to_h_diagonal(c: Circuit) -> Circuit:
    """Rewrite into H plus diagonal gates only, preserving the unitary exactly.

    X = H Z H, CNOT = H_t CZ H_t, TOFFOLI = H_t CCZ H_t; everything else in
    the gate set is already H or diagonal.
    """
    out: list[Gate] = []
    for g in c.gates:
        if g.kind == "X":
            q = g.qubits[0]
            out += [H(q), Z(q), H(q)]
        elif g.kind == "CNOT":
            ctl, tgt = g.qubits
            out += [H(tgt), CZ(ctl, tgt), H(tgt)]
        elif g.kind == "TOFFOLI":
            a, b, tgt = g.qubits
            out += [H(tgt), CCZ(a, b, tgt), H(tgt)]
        else:
            out.append(g)
    return Circuit(c.n_qubits, tuple(out))


def cancel_adjacent_h(gates: tuple[Gate, ...] | list[Gate]) -> list[Gate]:
    """Drop H pairs on the same wire with no intervening gate on that wire."""
    kept: list[Gate | None] = []
    pending: dict[int, int] = {}  # wire -> index of an unmatched H in kept
    for g in gates:
        if g.kind == "H":
            q = g.qubits[0]
            if q in pending:
                kept[pending.pop(q)] = None
            else:
                pending[q] = len(kept)
                kept.append(g)
        else:
            for q in g.qubits:
                pending.pop(q, None)
            kept.append(g)
    return [g for g in kept if g is not None]


def random_circuit(
    n_qubits: int,
    n_gates: int,
    rng: random.Random,
    kinds: tuple[str, ...] | None = None,
) -> Circuit:
    """Draw a circuit uniformly over eligible gate kinds and wire choices."""
    if kinds is None:
        kinds = tuple(GATE_ARITY)
    eligible = [k for k in kinds if GATE_ARITY[k] <= n_qubits]
    if not eligible:
        raise ValueError(f"no eligible gate kinds for {n_qubits} qubit(s)")
    gates = []
    for _ in range(n_gates):
        kind = rng.choice(eligible)
        qubits = tuple(rng.sample(range(n_qubits), GATE_ARITY[kind]))
        k = rng.randrange(8) if kind == "PZ" else 0
        gates.append(Gate(kind, qubits, k))
    return Circuit(n_qubits, tuple(gates))
