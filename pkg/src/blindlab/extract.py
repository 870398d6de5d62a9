"""Turning a blind-and-correct scheme into a nondeterministic decider.

The pivot: if the scheme is blind, the message for the all-ones instance is
also a possible message for *every* same-length instance, so one sampled
(message, response-law) pair works as advice for the whole slice.  The
decider re-keys the actual instance, rejects unless the encryption collides
with the advice message, and otherwise accepts with the decoded bit.  Its
acceptance probability factors exactly as

    p_acc = (collision probability) x (accept rate given collision)

and correctness squeezes it between eta*(1-eps)*p1 and eta*(1+eps)*p1, so
accept-as-nondeterministic-support decides whether the circuit's output
probability is exactly zero.  `all_demo` plays the same template with an
arbitrary truth table in place of the server, which is the reason the
generalized protocol yields an absurdly strong advice class rather than a
hardness result.

Everything here is enumerated exactly; `extract_run_once` is the sampled
twin used only to confirm the exact values statistically.
"""

from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .exact import ExactProbability
from .protocol import (
    Scheme,
    SchemeContractError,
    ServerModel,
    enumerate_keyspace,
)
from .simulate import EnumerationBudgetError, sample_from_distribution

MODES = ("single", "poly")


@dataclass(frozen=True)
class Advice:
    """One sampled (message, exact response law) pair for the 1^s instance.

    The coins and key that produced it are recorded so a run can be
    replayed; `mode` records whether the law was captured as the single
    value q(0) with its complement (single) or as the full table (poly).
    """

    s: int
    a_s: str
    response_model: tuple[tuple[str, ExactProbability], ...]
    coins: str
    key: str
    mode: str = "single"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        total = ExactProbability.zero()
        for outcome, q in self.response_model:
            if self.mode == "single" and outcome not in ("0", "1"):
                raise ValueError("single-bit advice must range over {'0','1'}")
            total = total + q
        if total != ExactProbability.one():
            raise ValueError(f"advice response law sums to {total!r}, not 1")

    @property
    def q0(self) -> ExactProbability:
        """Probability of the all-zeros response (the single-bit summary)."""
        for outcome, q in self.response_model:
            if set(outcome) <= {"0"}:
                return q
        return ExactProbability.zero()

    def law(self) -> dict[str, ExactProbability]:
        return dict(self.response_model)


def make_advice(
    scheme: Scheme,
    server: ServerModel,
    s: int,
    rng: random.Random,
    *,
    mode: str = "single",
    coin_bit_budget: int = 20,
    max_keygen_attempts: int = 64,
) -> Advice:
    """Key the all-ones instance once and capture the server's exact law
    for the resulting message."""
    if s <= 0:
        raise ValueError("instance length must be positive")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    x = "1" * s
    length = scheme.coin_length(s)
    if length > coin_bit_budget:
        raise EnumerationBudgetError(
            f"coin space 2^{length} exceeds budget 2^{coin_bit_budget}"
        )
    for _ in range(max_keygen_attempts):
        coins = "".join("01"[rng.getrandbits(1)] for _ in range(length))
        key = scheme.keygen(x, coins)
        if key is not None:
            break
    else:
        raise SchemeContractError(
            f"keygen failed {max_keygen_attempts} times in a row on x={x!r}"
        )
    a_s = scheme.encrypt(x, key)
    law = server.respond(a_s)
    if mode == "single":
        if set(law) != {"0", "1"}:
            raise SchemeContractError(
                "single-bit advice requires a single-bit server; "
                f"got outcomes {sorted(law)}"
            )
        model = (("0", law["0"]), ("1", ExactProbability.one() - law["0"]))
    else:
        model = tuple(sorted(law.items()))
    return Advice(s, a_s, model, coins, key, mode)


@dataclass(frozen=True)
class ExtractionOutcome:
    """Exact acceptance analysis of the decider on one instance."""

    x: str
    eta: ExactProbability
    pr_xi_1: ExactProbability
    p_acc: ExactProbability

    def __post_init__(self) -> None:
        if self.p_acc != self.eta * self.pr_xi_1:
            raise ValueError("p_acc must equal eta * pr_xi_1 exactly")

    @property
    def accept(self) -> bool:
        return self.p_acc.sign() > 0

    @property
    def decision(self) -> str:
        return "accept" if self.accept else "reject"

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "eta": self.eta.triple_string(),
            "pr_xi_1": self.pr_xi_1.triple_string(),
            "p_acc": self.p_acc.triple_string(),
            "decision": self.decision,
            "approx": {
                "eta": float(self.eta),
                "pr_xi_1": float(self.pr_xi_1),
                "p_acc": float(self.p_acc),
            },
        }


def extract_decide(
    scheme: Scheme,
    advice: Advice,
    x: str,
    *,
    coin_bit_budget: int = 20,
) -> ExtractionOutcome:
    """Enumerate the decider exactly.

    eta is the probability (over successful keyings of x) that the message
    collides with the advice message; pr_xi_1 is the accept rate of the
    decoded bit conditioned on that collision.
    """
    if len(x) != advice.s:
        raise ValueError(f"instance length {len(x)} != advice length {advice.s}")
    successes = enumerate_keyspace(scheme, x, coin_bit_budget=coin_bit_budget)
    matching = [
        key for _, key in successes if scheme.encrypt(x, key) == advice.a_s
    ]
    eta = ExactProbability(Fraction(len(matching), len(successes)))
    if not matching:
        zero = ExactProbability.zero()
        return ExtractionOutcome(x, zero, zero, zero)
    accept_mass = ExactProbability.zero()
    for key in matching:
        for response, q in advice.response_model:
            bit = scheme.decrypt(x, key, response)
            if bit not in (0, 1):
                raise SchemeContractError(f"decrypt returned {bit!r}, not a bit")
            if bit == 1:
                accept_mass = accept_mass + q
    pr_xi_1 = accept_mass * Fraction(1, len(matching))
    return ExtractionOutcome(x, eta, pr_xi_1, eta * pr_xi_1)


def extract_run_once(
    scheme: Scheme,
    advice: Advice,
    x: str,
    rng: random.Random,
    *,
    max_keygen_attempts: int = 64,
) -> bool:
    """One sampled pass of the decider, as the procedure is written: key,
    compare messages, sample a response from the advice law, decode."""
    if len(x) != advice.s:
        raise ValueError(f"instance length {len(x)} != advice length {advice.s}")
    length = scheme.coin_length(len(x))
    for _ in range(max_keygen_attempts):
        coins = "".join("01"[rng.getrandbits(1)] for _ in range(length))
        key = scheme.keygen(x, coins)
        if key is not None:
            break
    else:
        raise SchemeContractError(
            f"keygen failed {max_keygen_attempts} times in a row on x={x!r}"
        )
    if scheme.encrypt(x, key) != advice.a_s:
        return False
    response = sample_from_distribution(advice.law(), rng)
    return scheme.decrypt(x, key, response) == 1


def extraction_bounds_hold(
    outcome: ExtractionOutcome,
    ideal_p1: ExactProbability,
    epsilon: Fraction | int,
) -> bool:
    """eta*(1-eps)*p1 <= p_acc <= eta*(1+eps)*p1, all exact."""
    eps = epsilon if isinstance(epsilon, Fraction) else Fraction(epsilon)
    lower = outcome.eta * ideal_p1 * (1 - eps)
    upper = outcome.eta * ideal_p1 * (1 + eps)
    return lower <= outcome.p_acc <= upper


# ---------------------------------------------------------------------------
# The advice-only degeneration: decide any truth table


@dataclass(frozen=True)
class AllDemoOutcome:
    x: str
    p_acc: ExactProbability

    @property
    def accept(self) -> bool:
        return self.p_acc.sign() > 0

    @property
    def decision(self) -> str:
        return "accept" if self.accept else "reject"

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "p_acc": self.p_acc.triple_string(),
            "decision": self.decision,
            "approx": {"p_acc": float(self.p_acc)},
        }


def all_demo(
    truth_table: Mapping[str, int | None],
    x: str,
    *,
    max_table_bits: int = 16,
) -> AllDemoOutcome:
    """Decide an arbitrary truth table from a uniform advice distribution.

    The advice weights each pair (x', f(x')) with mass 2^-s, where an
    undefined entry is recorded as None; the decider rejects unless the
    sampled pair is (x, 1).  Acceptance mass is therefore 2^-s when
    f(x) = 1 and exactly zero otherwise — computed here by walking the
    support literally rather than by shortcutting to that formula.
    """
    s = len(x)
    if s == 0 or any(ch not in "01" for ch in x):
        raise ValueError(f"instance must be a non-empty bitstring, got {x!r}")
    if s > max_table_bits:
        raise EnumerationBudgetError(
            f"truth table on {s} bits exceeds budget {max_table_bits}"
        )
    expected = {format(v, f"0{s}b") for v in range(1 << s)}
    if set(truth_table) != expected:
        raise ValueError(f"truth table must cover exactly all {1 << s} inputs")
    share = Fraction(1, 1 << s)
    p_acc = ExactProbability.zero()
    for x_prime in sorted(truth_table):
        y = truth_table[x_prime]
        if y not in (0, 1, None):
            raise ValueError(f"truth table values must be 0, 1, or None; got {y!r}")
        if x_prime == x and y == 1:
            p_acc = p_acc + ExactProbability(share)
    return AllDemoOutcome(x, p_acc)


def random_truth_table(
    s: int, rng: random.Random, *, undefined_weight: int = 1
) -> dict[str, int | None]:
    """Uniform random table over {0, 1, None}; None drawn with weight
    `undefined_weight` against 1 each for the two defined values."""
    values: list[int | None] = [0, 1] + [None] * undefined_weight
    return {
        format(v, f"0{s}b"): rng.choice(values) for v in range(1 << s)
    }
