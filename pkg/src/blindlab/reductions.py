"""Hardness-preserving compilations between the sampling models.

Both reductions wrap a source circuit v on n qubits whose acceptance event is
"qubit 0 measures 1":

* a coin-flip wrapper W on n + 2 qubits halving the acceptance probability,
  then a one-clean-qubit circuit around W whose output probability is exactly
  4 * pW * (1 - pW) / 2^(n+2);
* a Hadamard-gadget compilation of v into a Hadamard-sandwiched diagonal
  circuit whose all-ones marginal on s + 1 postselected wires is exactly
  p_v(1) / 2^s.

Each construction preserves exact zeroness of the acceptance probability in
both directions, which is what makes the exact-acceptance decision class
carry over between the models.  Correctness is enforced by verify_reductions,
which recomputes every identity with the exact engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circuit import (
    CZ,
    Circuit,
    Gate,
    H,
    IqpForm,
    TOFFOLI,
    Z,
    cancel_adjacent_h,
    decompose_to_h_diagonal,
)
from .exact import ExactAmplitude, ExactProbability
from .mcx import zero_controlled_mcx
from .simulate import (
    acceptance_probability,
    dqc1_distribution,
    iqp_marginal_distribution,
    run_statevector,
)


@dataclass(frozen=True)
class Dqc1Reduction:
    """One-clean-qubit compilation of a source circuit.

    dqc1_circuit layout: qubit 0 is the clean qubit, qubits 1..n+2 carry the
    wrapper W, and the last qubit is a borrowed ancilla for the
    multi-controlled-X macro.  The ancilla is maximally mixed like the rest
    of the register and is restored by the macro, so it cancels from the
    output probability.
    """

    w_circuit: Circuit
    dqc1_circuit: Circuit
    source_n_qubits: int

    def expected_output_probability(self) -> ExactProbability:
        """4 * pW * (1 - pW) / 2^(n+2) from the wrapper's acceptance."""
        p_w = acceptance_probability(self.w_circuit)
        return p_w * (1 - p_w) * Fraction(1, 1 << self.source_n_qubits)


@dataclass(frozen=True)
class IqpReduction:
    """Hadamard-sandwich compilation; the first s wires are gadget leftovers
    and wire s is the source output, so postselect_count = s + 1."""

    iqp: IqpForm
    s: int
    postselect_count: int


def build_w(v: Circuit) -> Circuit:
    """Wrap v with a fresh output qubit and a coin ancilla.

    Layout: qubit 0 = fresh output, qubit 1 = coin (H-prepared), qubits
    2..n+1 = the source register.  The final Toffoli moves "source accepted
    AND coin is 1" onto qubit 0, so the acceptance probability halves.
    """
    gates = [H(1)]
    gates += [g.shifted(2) for g in v.gates]
    gates.append(TOFFOLI(2, 1, 0))
    return Circuit(v.n_qubits + 2, tuple(gates))


def build_dqc1_reduction(v: Circuit) -> Dqc1Reduction:
    """Compile v for the one-clean-qubit model.

    Around the wrapper W: a zero-controlled multi-controlled-X from the whole
    mixed register onto the clean qubit, W, CZ(clean, W output), W inverse,
    and the same multi-controlled-X again.  Only the all-zeros branch of the
    mixed register ever touches the clean qubit, which yields the
    4 p (1 - p) interference term.
    """
    w = build_w(v)
    nw = w.n_qubits
    n_total = nw + 2  # clean qubit + W register + one borrowed macro ancilla
    controls = list(range(1, nw + 1))
    flagged = zero_controlled_mcx(controls, 0, [n_total - 1])
    body: list[Gate] = [g.shifted(1) for g in w.gates]
    body.append(CZ(0, 1))
    body += [g.shifted(1) for g in w.inverse().gates]
    gates = flagged + body + flagged
    return Dqc1Reduction(
        w_circuit=w,
        dqc1_circuit=Circuit(n_total, tuple(gates)),
        source_n_qubits=v.n_qubits,
    )


def build_iqp_reduction(v: Circuit) -> IqpReduction:
    """Compile v into Hadamard-sandwich form with postselected gadgets.

    v is first rewritten over H + diagonal gates, conjugated by explicit H
    layers, and adjacent H pairs are cancelled.  Every surviving H becomes a
    gadget: CZ from the current carrier onto a fresh wire plus a Z on the
    consumed carrier, which under postselection of 1 (after the closing H
    layer) teleports H of the carrier state onto the fresh wire with
    amplitude 1/sqrt(2) and no extra phase.  Wires are finally relabeled so
    the s consumed wires come first and the source wires follow in order.
    """
    n = v.n_qubits
    decomposed = decompose_to_h_diagonal(v)
    extended = (
        [H(i) for i in range(n)]
        + list(decomposed.gates)
        + [H(i) for i in range(n)]
    )
    extended = cancel_adjacent_h(extended)

    carrier = list(range(n))  # logical wire -> current physical wire
    next_wire = n
    consumed: list[int] = []
    body: list[Gate] = []
    for g in extended:
        if g.kind == "H":
            logical = g.qubits[0]
            old = carrier[logical]
            body.append(CZ(old, next_wire))
            body.append(Z(old))
            consumed.append(old)
            carrier[logical] = next_wire
            next_wire += 1
        else:
            body.append(g.remapped(carrier))

    s = len(consumed)
    relabel: dict[int, int] = {}
    for j, wire in enumerate(consumed):
        relabel[wire] = j
    for i, wire in enumerate(carrier):
        relabel[wire] = s + i
    form = IqpForm(n + s, tuple(g.remapped(relabel) for g in body))
    return IqpReduction(iqp=form, s=s, postselect_count=s + 1)


@dataclass(frozen=True)
class ReductionReport:
    """Every identity of both compilations, recomputed exactly."""

    n: int
    p_v1: ExactProbability
    p_w1: ExactProbability
    w_ok: bool
    ptilde_expected: ExactProbability
    ptilde_actual: ExactProbability
    dqc1_ok: bool
    s: int
    iqp_expected: ExactProbability
    iqp_actual: ExactProbability
    iqp_ok: bool
    state_identity_ok: bool
    global_phase: int | None

    @property
    def passed(self) -> bool:
        return self.w_ok and self.dqc1_ok and self.iqp_ok and self.state_identity_ok

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "pV1": self.p_v1.triple_string(),
            "pW1": self.p_w1.triple_string(),
            "w_ok": self.w_ok,
            "ptilde_expected": self.ptilde_expected.triple_string(),
            "ptilde_actual": self.ptilde_actual.triple_string(),
            "dqc1_ok": self.dqc1_ok,
            "s": self.s,
            "iqp_expected": self.iqp_expected.triple_string(),
            "iqp_actual": self.iqp_actual.triple_string(),
            "iqp_ok": self.iqp_ok,
            "state_identity_ok": self.state_identity_ok,
            "global_phase": self.global_phase,
            "approx": {
                "pV1": float(self.p_v1),
                "pW1": float(self.p_w1),
                "ptilde": float(self.ptilde_actual),
                "iqp": float(self.iqp_actual),
            },
        }


def postselected_state(reduction: IqpReduction) -> tuple[ExactAmplitude, ...]:
    """Project the compiled circuit's output onto all-ones on the s consumed
    wires and rescale by sqrt(2)^s; entries are indexed by the source basis."""
    form = reduction.iqp
    s = reduction.s
    n = form.n_qubits - s
    sv = run_statevector(form.to_circuit())
    ones_prefix = ((1 << s) - 1) << n
    return tuple(
        sv.amplitudes[ones_prefix | z].times_sqrt2_power(s) for z in range(1 << n)
    )


def _match_global_phase(
    projected: tuple[ExactAmplitude, ...], target: tuple[ExactAmplitude, ...]
) -> int | None:
    """Return k with projected == w^k * target entrywise, or None."""
    pivot = next((i for i, a in enumerate(target) if not a.is_zero()), None)
    if pivot is None:
        return None
    for k in range(8):
        if projected[pivot] == target[pivot].times_omega(k):
            if all(p == t.times_omega(k) for p, t in zip(projected, target)):
                return k
    return None


def verify_reductions(
    v: Circuit,
    *,
    max_enumeration_qubits: int = 20,
    max_sim_qubits: int = 22,
) -> ReductionReport:
    """Recompute all reduction identities for one source circuit.

    Checks, all in exact arithmetic: the wrapper halves the acceptance
    probability; the one-clean-qubit output equals 4 pW (1 - pW) / 2^(n+2);
    the postselected sandwich marginal equals p_v(1) / 2^s; and the rescaled
    postselected state equals the source output state up to one global
    eighth-root-of-unity phase.
    """
    n = v.n_qubits
    p_v1 = acceptance_probability(v, max_sim_qubits=max_sim_qubits)

    dqc1_red = build_dqc1_reduction(v)
    p_w1 = acceptance_probability(dqc1_red.w_circuit, max_sim_qubits=max_sim_qubits)
    w_ok = p_w1.doubled() == p_v1
    ptilde_expected = p_w1 * (1 - p_w1) * Fraction(1, 1 << n)
    ptilde_actual = dqc1_distribution(
        dqc1_red.dqc1_circuit, max_enumeration_qubits=max_enumeration_qubits
    ).p1
    dqc1_ok = ptilde_expected == ptilde_actual

    iqp_red = build_iqp_reduction(v)
    s = iqp_red.s
    iqp_expected = p_v1 * Fraction(1, 1 << s)
    iqp_actual = iqp_marginal_distribution(
        iqp_red.iqp, iqp_red.postselect_count, max_sim_qubits=max_sim_qubits
    ).p1
    iqp_ok = iqp_expected == iqp_actual

    projected = postselected_state(iqp_red)
    target = run_statevector(v, max_sim_qubits=max_sim_qubits).amplitudes
    global_phase = _match_global_phase(projected, target)
    state_identity_ok = global_phase is not None

    return ReductionReport(
        n=n,
        p_v1=p_v1,
        p_w1=p_w1,
        w_ok=w_ok,
        ptilde_expected=ptilde_expected,
        ptilde_actual=ptilde_actual,
        dqc1_ok=dqc1_ok,
        s=s,
        iqp_expected=iqp_expected,
        iqp_actual=iqp_actual,
        iqp_ok=iqp_ok,
        state_identity_ok=state_identity_ok,
        global_phase=global_phase,
    )
