"""Multi-controlled X as a Toffoli network with borrowed (dirty) ancillas.

The expansion is exact on every basis state and restores each ancilla to its
input value, so the ancillas may hold arbitrary, even maximally mixed, states.
For k >= 3 controls one extra wire suffices: the network either uses a
two-pass Toffoli chain directly (when k - 2 borrowable wires exist) or splits
the control set in half around the single extra wire, each half borrowing
idle wires from the other.
"""

from __future__ import annotations

from .circuit import CNOT, TOFFOLI, Gate, X


def _chain(controls: list[int], target: int, ancillas: list[int]) -> list[Gate]:
    """Two-pass Toffoli chain: k >= 3 controls, exactly k - 2 dirty ancillas."""
    k = len(controls)
    assert k >= 3 and len(ancillas) == k - 2
    top = TOFFOLI(controls[k - 1], ancillas[k - 3], target)
    down = [
        TOFFOLI(controls[i], ancillas[i - 2], ancillas[i - 1])
        for i in range(k - 2, 1, -1)
    ]
    bottom = TOFFOLI(controls[0], controls[1], ancillas[0])
    inner = down + [bottom] + down[::-1]
    return [top, *inner, top, *inner]


def _core(controls: list[int], target: int, pool: list[int]) -> list[Gate]:
    k = len(controls)
    if k == 0:
        return [X(target)]
    if k == 1:
        return [CNOT(controls[0], target)]
    if k == 2:
        return [TOFFOLI(controls[0], controls[1], target)]
    return _chain(controls, target, pool[: k - 2])


def mcx_gates(controls: list[int], target: int, dirty: list[int]) -> list[Gate]:
    """X on `target` controlled on every wire in `controls` being 1.

    `dirty` lists wires usable as borrowed ancillas (restored on exit); one
    wire is enough for any k.  Raises ValueError when k >= 3 and none is given.
    """
    wires = [*controls, target, *dirty]
    if len(set(wires)) != len(wires):
        raise ValueError("controls, target and ancillas must be disjoint")
    k = len(controls)
    if k <= 2:
        return _core(list(controls), target, [])
    if len(dirty) >= k - 2:
        return _chain(list(controls), target, list(dirty)[: k - 2])
    if not dirty:
        raise ValueError(f"{k} controls need at least one ancilla wire")
    bridge = dirty[0]
    k1 = (k + 1) // 2
    first, rest = list(controls[:k1]), list(controls[k1:])
    gates_a = _core(first, bridge, rest + [target])
    gates_b = _core([bridge, *rest], target, first)
    return gates_a + gates_b + gates_a + gates_b


def zero_controlled_mcx(
    controls: list[int], target: int, dirty: list[int]
) -> list[Gate]:
    """X on `target` controlled on every wire in `controls` being 0."""
    flips = [X(c) for c in controls]
    return flips + mcx_gates(controls, target, dirty) + flips
