"""Circuit representation, text format, and the structural rewrites."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from blindlab.circuit import (
    CCZ,
    CNOT,
    CZ,
    Circuit,
    CircuitFormatError,
    Gate,
    H,
    IqpForm,
    PZ,
    S,
    T,
    TOFFOLI,
    X,
    Z,
    cancel_adjacent_h,
    decompose_to_h_diagonal,
    is_iqp_form,
    parse_circuit,
    random_circuit,
    serialize_circuit,
)
from blindlab.simulate import run_statevector


def seeded_circuit(seed, max_n=4, extra_gates=6):
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    return random_circuit(n, rng.randint(n, n + extra_gates), rng)


def states_equal(c1, c2, n):
    for basis in range(1 << n):
        b = format(basis, f"0{n}b")
        if run_statevector(c1, b).amplitudes != run_statevector(c2, b).amplitudes:
            return False
    return True


# ---------------------------------------------------------------------------
# text format


def test_parse_basic():
    c = parse_circuit("2\nH 0\nCNOT 0 1")
    assert c.n_qubits == 2
    assert c.gates == (H(0), CNOT(0, 1))


def test_parse_comments_blank_lines_and_pz():
    c = parse_circuit("3\n# prep\n\nPZ 5 2\n")
    assert c.n_qubits == 3
    assert c.gates == (PZ(5, 2),)


@pytest.mark.parametrize(
    "text,lineno,needle",
    [
        ("", 1, "empty"),
        ("x", 1, "not an integer"),
        ("0", 1, "positive"),
        ("1\nFOO 0", 2, "unknown gate"),
        ("1\nH 1", 2, "out of range"),
        ("2\nCNOT 0 0", 2, "repeated"),
        ("1\nPZ 9 0", 2, "octant"),
        ("1\nH 0 1", 2, "expects 1"),
        ("1\nH zero", 2, "non-integer"),
        ("2\nH 0\nCZ 0", 3, "expects 2"),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno, needle):
    with pytest.raises(CircuitFormatError) as err:
        parse_circuit(text)
    assert err.value.line_number == lineno
    assert needle in str(err.value)


@given(st.integers(0, 10_000))
@settings(max_examples=60)
def test_serialize_parse_roundtrip(seed):
    c = seeded_circuit(seed)
    assert parse_circuit(serialize_circuit(c)) == c


def test_serialize_pz_spelling():
    text = serialize_circuit(Circuit(2, (PZ(3, 1), H(0))))
    assert text == "2\nPZ 3 1\nH 0"


# ---------------------------------------------------------------------------
# gates and circuits


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("H", (0, 1))
    with pytest.raises(ValueError):
        Gate("CNOT", (2, 2))
    with pytest.raises(ValueError):
        Gate("PZ", (0,), k=8)
    with pytest.raises(ValueError):
        Gate("H", (0,), k=3)  # only the phase gate carries an octant
    with pytest.raises(ValueError):
        Circuit(1, (H(1),))
    with pytest.raises(ValueError):
        Circuit(0, ())


def test_shift_and_remap():
    assert TOFFOLI(0, 1, 2).shifted(2) == TOFFOLI(2, 3, 4)
    assert CNOT(0, 2).remapped({0: 5, 2: 1}) == CNOT(5, 1)


def test_inverse_gates_frozen():
    assert S(0).inverse_gates() == (S(0), Z(0))
    assert T(1).inverse_gates() == (T(1), S(1), Z(1))
    assert PZ(3, 0).inverse_gates() == (PZ(5, 0),)
    assert PZ(0, 2).inverse_gates() == (PZ(0, 2),)
    assert H(0).inverse_gates() == (H(0),)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_circuit_inverse_is_exact_inverse(seed):
    c = seeded_circuit(seed, max_n=3, extra_gates=4)
    glued = Circuit(c.n_qubits, c.gates + c.inverse().gates)
    identity = Circuit(c.n_qubits, ())
    assert states_equal(glued, identity, c.n_qubits)


def test_gate_counts():
    c = Circuit(2, (H(0), H(1), CNOT(0, 1), H(0)))
    assert c.gate_counts() == {"H": 3, "CNOT": 1}


# ---------------------------------------------------------------------------
# sandwich form and rewrites


def test_is_iqp_form_accepts_sandwich():
    c = Circuit(2, (H(0), H(1), CZ(0, 1), PZ(2, 0), H(1), H(0)))
    form = is_iqp_form(c)
    assert form is not None
    assert form.diagonal_gates == (CZ(0, 1), PZ(2, 0))
    assert form.to_circuit() == Circuit(2, (H(0), H(1), CZ(0, 1), PZ(2, 0), H(0), H(1)))


@pytest.mark.parametrize(
    "gates",
    [
        (H(0), CZ(0, 1), H(0), H(1)),  # first layer incomplete
        (H(0), H(1), X(0), H(0), H(1)),  # non-diagonal body
        (H(0), H(0), CZ(0, 1), H(0), H(1)),  # doubled wire in layer
        (H(0), H(1), CZ(0, 1), H(0), H(0)),
        (),
    ],
)
def test_is_iqp_form_rejects(gates):
    assert is_iqp_form(Circuit(2, tuple(gates))) is None


def test_iqp_form_rejects_non_diagonal_body():
    with pytest.raises(ValueError):
        IqpForm(2, (X(0),))


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_decompose_preserves_semantics_and_shape(seed):
    c = seeded_circuit(seed, max_n=3, extra_gates=4)
    d = decompose_to_h_diagonal(c)
    assert states_equal(c, d, c.n_qubits)
    assert all(g.kind == "H" or g.is_diagonal() for g in d.gates)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_cancel_adjacent_h_sound_and_idempotent(seed):
    c = seeded_circuit(seed, max_n=3, extra_gates=5)
    once = cancel_adjacent_h(list(c.gates))
    twice = cancel_adjacent_h(list(once))
    assert states_equal(c, Circuit(c.n_qubits, tuple(once)), c.n_qubits)
    assert twice == once


def test_cancel_adjacent_h_examples():
    assert cancel_adjacent_h([H(0), H(0)]) == []
    assert cancel_adjacent_h([H(0), H(1), H(0)]) == [H(1)]
    kept = cancel_adjacent_h([H(0), CNOT(0, 1), H(0)])
    assert kept == [H(0), CNOT(0, 1), H(0)]
    # a diagonal gate on the same wire blocks the merge
    assert cancel_adjacent_h([H(0), Z(0), H(0)]) == [H(0), Z(0), H(0)]
    # CCZ exercises the three-wire bookkeeping
    assert cancel_adjacent_h([H(2), CCZ(0, 1, 2), H(2)]) == [H(2), CCZ(0, 1, 2), H(2)]


@given(st.integers(0, 10_000))
@settings(max_examples=30)
def test_random_circuit_respects_bounds(seed):
    rng = random.Random(seed)
    c = random_circuit(2, 9, rng)
    assert c.n_qubits == 2 and len(c.gates) == 9
    assert all(len(g.qubits) <= 2 for g in c.gates)
