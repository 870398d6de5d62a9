"""Double-precision cross-check oracles built on numpy.

Nothing here feeds the exact results; these routines exist so tests can
confront the integer engine with an independently coded floating-point
computation (statevector, full unitary, and a density-matrix evolution of
the one-clean-qubit input).  Not part of the sampling API.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate

_OMEGA = np.exp(1j * np.pi / 4)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_TOFFOLI = np.eye(8, dtype=complex)
_TOFFOLI[[6, 7]] = _TOFFOLI[[7, 6]]


def gate_matrix(g: Gate) -> np.ndarray:
    """Unitary of one gate; the first listed qubit is the row-index MSB."""
    if g.kind == "H":
        return _H
    if g.kind == "X":
        return _X
    if g.kind == "Z":
        return np.diag([1, -1]).astype(complex)
    if g.kind == "S":
        return np.diag([1, 1j]).astype(complex)
    if g.kind == "T":
        return np.diag([1, _OMEGA])
    if g.kind == "PZ":
        return np.diag([_OMEGA**g.k, _OMEGA ** (-g.k)])
    if g.kind == "CNOT":
        return _CNOT
    if g.kind == "CZ":
        return np.diag([1, 1, 1, -1]).astype(complex)
    if g.kind == "CCZ":
        return np.diag([1, 1, 1, 1, 1, 1, 1, -1]).astype(complex)
    if g.kind == "TOFFOLI":
        return _TOFFOLI
    raise ValueError(f"unknown gate kind {g.kind!r}")


def _apply_to_axes(tensor: np.ndarray, matrix: np.ndarray, axes: list[int]) -> np.ndarray:
    a = len(axes)
    g = matrix.reshape((2,) * (2 * a))
    out = np.tensordot(g, tensor, axes=(list(range(a, 2 * a)), axes))
    return np.moveaxis(out, range(a), axes)


def statevector_dense(circuit: Circuit, basis_index: int = 0) -> np.ndarray:
    """Floating statevector; index bit order matches the exact engine."""
    n = circuit.n_qubits
    psi = np.zeros(1 << n, dtype=complex)
    psi[basis_index] = 1.0
    psi = psi.reshape((2,) * n)
    for g in circuit.gates:
        psi = _apply_to_axes(psi, gate_matrix(g), list(g.qubits))
    return psi.reshape(-1)


def unitary_dense(circuit: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary, built gate by gate through explicit index maps.

    Deliberately avoids the tensor machinery above so that it is a second,
    independently wrong-able construction.  Intended for small n only.
    """
    n = circuit.n_qubits
    dim = 1 << n
    total = np.eye(dim, dtype=complex)
    for g in circuit.gates:
        small = gate_matrix(g)
        a = len(g.qubits)
        positions = [n - 1 - q for q in g.qubits]  # bit positions, MSB = qubit 0
        full = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            sub = 0
            for t, pos in enumerate(positions):
                sub |= ((col >> pos) & 1) << (a - 1 - t)
            base = col
            for pos in positions:
                base &= ~(1 << pos)
            for row_sub in range(1 << a):
                row = base
                for t, pos in enumerate(positions):
                    row |= ((row_sub >> (a - 1 - t)) & 1) << pos
                full[row, col] = small[row_sub, sub]
        total = full @ total
    return total


def acceptance_probability_dense(circuit: Circuit, basis_index: int = 0) -> float:
    psi = statevector_dense(circuit, basis_index)
    half = 1 << (circuit.n_qubits - 1)
    return float(np.sum(np.abs(psi[half:]) ** 2))


def dqc1_probability_dense(circuit: Circuit) -> float:
    """Pr[qubit 0 = 1] under the one-clean-qubit input, via density-matrix
    evolution (the exact engine never does this)."""
    n = circuit.n_qubits
    dim = 1 << n
    half = dim >> 1
    rho = np.zeros((dim, dim), dtype=complex)
    for y in range(half):
        rho[y, y] = 1.0 / half
    rho = rho.reshape((2,) * (2 * n))
    for g in circuit.gates:
        matrix = gate_matrix(g)
        rho = _apply_to_axes(rho, matrix, list(g.qubits))
        rho = _apply_to_axes(rho, matrix.conj(), [n + q for q in g.qubits])
    rho = rho.reshape(dim, dim)
    return float(np.real(np.trace(rho[half:, half:])))


def iqp_marginal_dense(circuit: Circuit, m: int) -> float:
    psi = statevector_dense(circuit, 0)
    n = circuit.n_qubits
    mask = ((1 << m) - 1) << (n - m)
    total = 0.0
    for i, amp in enumerate(psi):
        if (i & mask) == mask:
            total += abs(amp) ** 2
    return float(total)
