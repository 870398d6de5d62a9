"""Classical delegation schemes, server models, and the two exact audits.

A scheme is the classical client side of a delegation protocol: it draws
coins, derives a key (possibly flagged as a failure), sends a single
encrypted instance string to the server, and decodes the server's response
bits into one output bit.  A server model is just a map from the received
string to an exact distribution over response strings — honest servers
compute the one-clean-qubit distribution of the circuit the string selects,
adversarial ones can be anything.

Both audits are exhaustive rather than statistical.  Correctness enumerates
every reachable key and compares the induced output distribution against the
ideal one under a multiplicative error budget.  Blindness compares the
*support* of the encryption distribution between two instance strings: if
any ciphertext can only arise from one of them, a single message separates
them and the report fails with witnesses.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from .circuit import Circuit
from .exact import ExactProbability
from .simulate import (
    BinaryDistribution,
    EnumerationBudgetError,
    MultiplicativeErrorReport,
    check_multiplicative_error,
    dqc1_distribution,
    sample_from_distribution,
)


class SchemeContractError(RuntimeError):
    """A scheme violated its own interface: bad bit alphabet, wrong lengths,
    a decoder output outside {0,1}, or keygen failing too often."""


# Keygen may flag a coin string as unusable by returning None.  The audits
# enumerate the coin space, so an unusable fraction above 1/2 minus this
# margin is rejected outright rather than silently conditioned away.
DEFAULT_KEYGEN_MARGIN = Fraction(1, 16)


def _check_bits(value: str, what: str, *, allow_empty: bool = False) -> str:
    if not isinstance(value, str):
        raise SchemeContractError(f"{what} must be a str, got {type(value).__name__}")
    if not value and not allow_empty:
        raise SchemeContractError(f"{what} must be non-empty")
    if any(ch not in "01" for ch in value):
        raise SchemeContractError(f"{what} must be a bitstring, got {value!r}")
    return value


def xor_bits(a: str, b: str) -> str:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return "".join("01"[x != y] for x, y in zip(a, b))


class Scheme(ABC):
    """Classical client side of a delegation scheme.

    All four methods must be deterministic; every drop of randomness enters
    through the `coins` argument so the audits can enumerate it.
    """

    name: str = "unnamed"

    @abstractmethod
    def coin_length(self, s: int) -> int:
        """Coins consumed by keygen for instance strings of length s."""

    @abstractmethod
    def keygen(self, x: str, coins: str) -> str | None:
        """Derive the key, or None to flag these coins as unusable."""

    @abstractmethod
    def encrypt(self, x: str, key: str) -> str:
        """The single message sent to the server."""

    @abstractmethod
    def decrypt(self, x: str, key: str, response: str) -> int:
        """Decode the server's response bits into the output bit."""

    def response_length(self, s: int) -> int:
        return 1

    def manifest(self) -> dict:
        """Machine-readable summary; coin usage probed as an affine law."""
        c1, c2 = self.coin_length(1), self.coin_length(2)
        return {
            "name": self.name,
            "coin_length": {"slope": c2 - c1, "intercept": 2 * c1 - c2},
            "response_length": self.response_length(1),
        }


class LeakyScheme(Scheme):
    """Sends the instance in the clear and echoes the first response bit.
    Perfectly correct against an honest server, blind against nothing."""

    name = "leaky"

    def coin_length(self, s: int) -> int:
        return 0

    def keygen(self, x: str, coins: str) -> str | None:
        return ""

    def encrypt(self, x: str, key: str) -> str:
        return x

    def decrypt(self, x: str, key: str, response: str) -> int:
        return int(response[0])


class ConstantScheme(Scheme):
    """Sends the all-zeros string regardless of the instance.  Perfectly
    blind, and wrong for any family that distinguishes instances."""

    name = "constant"

    def coin_length(self, s: int) -> int:
        return 0

    def keygen(self, x: str, coins: str) -> str | None:
        return ""

    def encrypt(self, x: str, key: str) -> str:
        return "0" * len(x)

    def decrypt(self, x: str, key: str, response: str) -> int:
        return int(response[0])


class OneTimePadScheme(Scheme):
    """XORs the instance with fresh coins.  Perfectly blind — the ciphertext
    is uniform — but the server now answers for the wrong instance, so
    correctness fails against an honest server on any non-degenerate family."""

    name = "otp"

    def coin_length(self, s: int) -> int:
        return s

    def keygen(self, x: str, coins: str) -> str | None:
        return coins

    def encrypt(self, x: str, key: str) -> str:
        return xor_bits(x, key)

    def decrypt(self, x: str, key: str, response: str) -> int:
        return int(response[0])


SCHEMES: dict[str, Scheme] = {
    s.name: s for s in (LeakyScheme(), ConstantScheme(), OneTimePadScheme())
}


# ---------------------------------------------------------------------------
# Server models


@dataclass(frozen=True)
class ServerModel:
    """A (possibly adversarial) server: message in, exact response law out."""

    name: str
    respond_fn: Callable[[str], Mapping[str, ExactProbability]]

    def respond(self, message: str) -> dict[str, ExactProbability]:
        raw = self.respond_fn(message)
        if not raw:
            raise SchemeContractError(f"server {self.name!r} returned no outcomes")
        lengths = {len(b) for b in raw}
        if len(lengths) != 1:
            raise SchemeContractError(
                f"server {self.name!r} mixed response lengths {sorted(lengths)}"
            )
        out: dict[str, ExactProbability] = {}
        total = ExactProbability.zero()
        for b in sorted(raw):
            _check_bits(b, "response outcome")
            q = raw[b] if isinstance(raw[b], ExactProbability) else ExactProbability(raw[b])
            if q.sign() < 0 or (ExactProbability.one() - q).sign() < 0:
                raise SchemeContractError(f"response weight out of range at {b!r}")
            out[b] = q
            total = total + q
        if total != ExactProbability.one():
            raise SchemeContractError(
                f"server {self.name!r} response law sums to {total!r}, not 1"
            )
        return out


def honest_server(
    family: Callable[[str], Circuit], *, max_enumeration_qubits: int = 20
) -> ServerModel:
    """Answers with the exact one-clean-qubit law of the selected circuit."""
    cache: dict[str, dict[str, ExactProbability]] = {}

    def respond(message: str) -> dict[str, ExactProbability]:
        if message not in cache:
            d = dqc1_distribution(
                family(message), max_enumeration_qubits=max_enumeration_qubits
            )
            cache[message] = {"0": d.p0, "1": d.p1}
        return cache[message]

    return ServerModel("honest", respond)


def padded_honest_server(
    family: Callable[[str], Circuit],
    pad_bits: int,
    *,
    max_enumeration_qubits: int = 20,
) -> ServerModel:
    """Honest answer in the first bit, then `pad_bits` uniform junk bits.
    Exercises decoders that must ignore everything past the payload."""
    if pad_bits < 0 or pad_bits > 12:
        raise ValueError("pad_bits must be in 0..12")
    base = honest_server(family, max_enumeration_qubits=max_enumeration_qubits)

    def respond(message: str) -> dict[str, ExactProbability]:
        head = base.respond(message)
        share = Fraction(1, 1 << pad_bits)
        return {
            bit + format(j, f"0{pad_bits}b") if pad_bits else bit: q * share
            for bit, q in head.items()
            for j in range(1 << pad_bits)
        }

    return ServerModel(f"honest-pad{pad_bits}", respond)


def fixed_server(name: str, law: Mapping[str, object]) -> ServerModel:
    """Ignores the message entirely and replies with one fixed law."""
    frozen = {
        b: q if isinstance(q, ExactProbability) else ExactProbability(q)
        for b, q in law.items()
    }
    return ServerModel(name, lambda message: frozen)


# ---------------------------------------------------------------------------
# Coin-space enumeration


def enumerate_keyspace(
    scheme: Scheme,
    x: str,
    *,
    coin_bit_budget: int = 20,
    keygen_margin: Fraction = DEFAULT_KEYGEN_MARGIN,
) -> list[tuple[str, str]]:
    """All (coins, key) pairs where keygen succeeds, in coin order.

    Raises EnumerationBudgetError past the coin budget, and
    SchemeContractError if the failure flag eats more than 1/2 minus the
    margin of the coin space (or all of it).
    """
    _check_bits(x, "instance string")
    length = scheme.coin_length(len(x))
    if length < 0:
        raise SchemeContractError("negative coin length")
    if length > coin_bit_budget:
        raise EnumerationBudgetError(
            f"coin space 2^{length} exceeds budget 2^{coin_bit_budget}"
        )
    successes: list[tuple[str, str]] = []
    for v in range(1 << length):
        coins = format(v, f"0{length}b") if length else ""
        key = scheme.keygen(x, coins)
        if key is None:
            continue
        successes.append((coins, _check_bits(key, "key", allow_empty=True)))
    if not successes:
        raise SchemeContractError(f"keygen never succeeds on x={x!r}")
    success_mass = Fraction(len(successes), 1 << length)
    if success_mass < Fraction(1, 2) + keygen_margin:
        raise SchemeContractError(
            f"keygen succeeds with probability {success_mass} on x={x!r}, "
            f"below the required 1/2 + {keygen_margin}"
        )
    return successes


def reachable_keys(scheme: Scheme, x: str, **kwargs) -> list[str]:
    """Distinct successful keys in first-reached coin order."""
    seen: dict[str, None] = {}
    for _, key in enumerate_keyspace(scheme, x, **kwargs):
        seen.setdefault(key)
    return list(seen)


# ---------------------------------------------------------------------------
# Running the protocol


@dataclass(frozen=True)
class Transcript:
    """One full client/server round."""

    x: str
    coins: str
    key: str
    message: str
    response: str
    output_bit: int


def run_protocol(
    scheme: Scheme,
    server: ServerModel,
    x: str,
    rng: random.Random,
    *,
    coin_bit_budget: int = 20,
    max_keygen_attempts: int = 64,
) -> Transcript:
    """Sample one round: coins, key (retrying flagged draws), message,
    server response, decoded bit."""
    _check_bits(x, "instance string")
    length = scheme.coin_length(len(x))
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
    message = _check_bits(scheme.encrypt(x, key), "message")
    law = server.respond(message)
    response = sample_from_distribution(law, rng)
    bit = scheme.decrypt(x, key, response)
    if bit not in (0, 1):
        raise SchemeContractError(f"decrypt returned {bit!r}, not a bit")
    return Transcript(x, coins, key, message, response, bit)


def exact_output_distribution(
    scheme: Scheme,
    server: ServerModel,
    x: str,
    key: str,
    *,
    coin_bit_budget: int = 20,
) -> BinaryDistribution:
    """Output law of the decoded bit for one fixed reachable key."""
    if key not in set(reachable_keys(scheme, x, coin_bit_budget=coin_bit_budget)):
        raise ValueError(f"key {key!r} is not reachable for x={x!r}")
    return _output_distribution_for_key(scheme, server, x, key)


def _output_distribution_for_key(
    scheme: Scheme, server: ServerModel, x: str, key: str
) -> BinaryDistribution:
    law = server.respond(_check_bits(scheme.encrypt(x, key), "message"))
    p1 = ExactProbability.zero()
    for response, q in law.items():
        bit = scheme.decrypt(x, key, response)
        if bit not in (0, 1):
            raise SchemeContractError(f"decrypt returned {bit!r}, not a bit")
        if bit == 1:
            p1 = p1 + q
    return BinaryDistribution.from_p1(p1)


# ---------------------------------------------------------------------------
# Audit 1: correctness


@dataclass(frozen=True)
class CorrectnessRow:
    x: str
    key: str
    report: MultiplicativeErrorReport

    def to_json_dict(self) -> dict:
        return {"x": self.x, "key": self.key, **self.report.to_json_dict()}


@dataclass(frozen=True)
class CorrectnessReport:
    scheme: str
    server: str
    epsilon: Fraction
    rows: tuple[CorrectnessRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.report.passed for row in self.rows)

    @property
    def violations(self) -> tuple[CorrectnessRow, ...]:
        return tuple(row for row in self.rows if not row.report.passed)

    def to_json_dict(self) -> dict:
        return {
            "check": "correctness",
            "scheme": self.scheme,
            "server": self.server,
            "epsilon": str(self.epsilon),
            "pass": self.passed,
            "rows": [row.to_json_dict() for row in self.rows],
        }


def check_correctness(
    scheme: Scheme,
    server: ServerModel,
    family: Callable[[str], Circuit],
    xs: Iterable[str],
    epsilon: Fraction | int,
    *,
    coin_bit_budget: int = 20,
    max_enumeration_qubits: int = 20,
    keygen_margin: Fraction = DEFAULT_KEYGEN_MARGIN,
) -> CorrectnessReport:
    """For every instance and every reachable key, compare the decoded
    output law to the ideal one under a multiplicative error budget."""
    rows: list[CorrectnessRow] = []
    for x in sorted(set(xs)):
        ideal = dqc1_distribution(
            family(x), max_enumeration_qubits=max_enumeration_qubits
        )
        successes = enumerate_keyspace(
            scheme, x, coin_bit_budget=coin_bit_budget, keygen_margin=keygen_margin
        )
        keys: dict[str, None] = {}
        for _, key in successes:
            keys.setdefault(key)
        for key in keys:
            claimed = _output_distribution_for_key(scheme, server, x, key)
            rows.append(
                CorrectnessRow(x, key, check_multiplicative_error(ideal, claimed, epsilon))
            )
    eps = epsilon if isinstance(epsilon, Fraction) else Fraction(epsilon)
    return CorrectnessReport(scheme.name, server.name, eps, tuple(rows))


# ---------------------------------------------------------------------------
# Audit 2: blindness


@dataclass(frozen=True)
class EncryptionSupport:
    """Conditional (on keygen success) law of the message for one instance."""

    x: str
    probabilities: tuple[tuple[str, Fraction], ...]

    @property
    def support(self) -> frozenset[str]:
        return frozenset(m for m, _ in self.probabilities)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.probabilities)


def encryption_support(
    scheme: Scheme,
    x: str,
    *,
    coin_bit_budget: int = 20,
    keygen_margin: Fraction = DEFAULT_KEYGEN_MARGIN,
) -> EncryptionSupport:
    successes = enumerate_keyspace(
        scheme, x, coin_bit_budget=coin_bit_budget, keygen_margin=keygen_margin
    )
    counts: dict[str, int] = {}
    for _, key in successes:
        message = _check_bits(scheme.encrypt(x, key), "message")
        counts[message] = counts.get(message, 0) + 1
    probabilities = tuple(
        (m, Fraction(counts[m], len(successes))) for m in sorted(counts)
    )
    return EncryptionSupport(x, probabilities)


@dataclass(frozen=True)
class BlindnessReport:
    scheme: str
    x1: str
    x2: str
    support_1: EncryptionSupport
    support_2: EncryptionSupport

    @property
    def only_in_x1(self) -> tuple[str, ...]:
        return tuple(sorted(self.support_1.support - self.support_2.support))

    @property
    def only_in_x2(self) -> tuple[str, ...]:
        return tuple(sorted(self.support_2.support - self.support_1.support))

    @property
    def passed(self) -> bool:
        return not self.only_in_x1 and not self.only_in_x2

    def to_json_dict(self) -> dict:
        return {
            "check": "blindness",
            "scheme": self.scheme,
            "x1": self.x1,
            "x2": self.x2,
            "pass": self.passed,
            "support_1": {m: str(p) for m, p in self.support_1.probabilities},
            "support_2": {m: str(p) for m, p in self.support_2.probabilities},
            "only_in_x1": list(self.only_in_x1),
            "only_in_x2": list(self.only_in_x2),
        }


def check_blindness(
    scheme: Scheme,
    x1: str,
    x2: str,
    *,
    coin_bit_budget: int = 20,
    keygen_margin: Fraction = DEFAULT_KEYGEN_MARGIN,
) -> BlindnessReport:
    """Supports must coincide: any message reachable from only one instance
    is a distinguishing witness and fails the check."""
    if len(x1) != len(x2):
        raise ValueError(
            f"blindness compares equal-length instances, got {len(x1)} and {len(x2)}"
        )
    kw = {"coin_bit_budget": coin_bit_budget, "keygen_margin": keygen_margin}
    return BlindnessReport(
        scheme.name,
        x1,
        x2,
        encryption_support(scheme, x1, **kw),
        encryption_support(scheme, x2, **kw),
    )
