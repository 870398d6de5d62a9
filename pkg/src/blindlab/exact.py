"""Exact scalar arithmetic for the simulation engine.

Amplitudes live in the ring Z[w]/sqrt(2)^e where w = exp(i*pi/4), so every
state reachable from a computational basis state with the supported gate set
is represented without rounding.  Probabilities are real numbers of the form
a + b*sqrt(2) with rational a, b; all comparisons are exact integer tests.
"""

from __future__ import annotations

import math
from fractions import Fraction

SQRT2 = math.sqrt(2.0)

# w^k coefficient rotation on (c0, c1, c2, c3) representing
# c0 + c1*w + c2*w^2 + c3*w^3 with w^4 = -1.


def omega_mul(c: tuple[int, int, int, int], k: int) -> tuple[int, int, int, int]:
    """Multiply a coefficient 4-tuple by w^k."""
    c0, c1, c2, c3 = c
    k %= 8
    if k >= 4:
        c0, c1, c2, c3 = -c0, -c1, -c2, -c3
        k -= 4
    if k == 0:
        return (c0, c1, c2, c3)
    if k == 1:
        return (-c3, c0, c1, c2)
    if k == 2:
        return (-c2, -c3, c0, c1)
    return (-c1, -c2, -c3, c0)


def sqrt2_mul(c: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    """Multiply a coefficient 4-tuple by sqrt(2) = w - w^3."""
    c0, c1, c2, c3 = c
    return (c1 - c3, c0 + c2, c1 + c3, c2 - c0)


def abs2_parts(c: tuple[int, int, int, int]) -> tuple[int, int]:
    """Return (u, v) with |c0 + c1*w + c2*w^2 + c3*w^3|^2 = u + v*sqrt(2)."""
    c0, c1, c2, c3 = c
    u = c0 * c0 + c1 * c1 + c2 * c2 + c3 * c3
    v = c0 * c1 + c1 * c2 + c2 * c3 - c0 * c3
    return u, v


class ExactAmplitude:
    """A complex number (c0 + c1*w + c2*w^2 + c3*w^3) / sqrt(2)^e, w = exp(i*pi/4).

    Instances are kept in a fully reduced canonical form: either the zero value
    with e = 0, or a numerator not divisible by sqrt(2) in Z[w].  Equality is
    therefore plain field comparison.
    """

    __slots__ = ("coeffs", "e")

    def __init__(self, coeffs: tuple[int, int, int, int], e: int = 0):
        c0, c1, c2, c3 = coeffs
        if e < 0:
            # negative denominators fold into the numerator
            for _ in range(-e):
                c0, c1, c2, c3 = sqrt2_mul((c0, c1, c2, c3))
            e = 0
        if c0 == 0 and c1 == 0 and c2 == 0 and c3 == 0:
            e = 0
        else:
            # divide numerator and denominator by sqrt(2) while possible
            while e > 0 and (c0 - c2) % 2 == 0 and (c1 - c3) % 2 == 0:
                c0, c1, c2, c3 = (
                    (c1 - c3) // 2,
                    (c0 + c2) // 2,
                    (c1 + c3) // 2,
                    (c2 - c0) // 2,
                )
                e -= 1
        object.__setattr__(self, "coeffs", (c0, c1, c2, c3))
        object.__setattr__(self, "e", e)

    def __setattr__(self, name, value):
        raise AttributeError("ExactAmplitude is immutable")

    @classmethod
    def zero(cls) -> "ExactAmplitude":
        return cls((0, 0, 0, 0))

    @classmethod
    def one(cls) -> "ExactAmplitude":
        return cls((1, 0, 0, 0))

    @classmethod
    def omega_power(cls, k: int) -> "ExactAmplitude":
        return cls(omega_mul((1, 0, 0, 0), k))

    def is_zero(self) -> bool:
        return self.coeffs == (0, 0, 0, 0)

    def _aligned(self, other: "ExactAmplitude") -> tuple[tuple, tuple, int]:
        a, b, ea, eb = self.coeffs, other.coeffs, self.e, other.e
        while ea < eb:
            a = sqrt2_mul(a)
            ea += 1
        while eb < ea:
            b = sqrt2_mul(b)
            eb += 1
        return a, b, ea

    def __add__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        a, b, e = self._aligned(other)
        return ExactAmplitude(tuple(x + y for x, y in zip(a, b)), e)

    def __sub__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        a, b, e = self._aligned(other)
        return ExactAmplitude(tuple(x - y for x, y in zip(a, b)), e)

    def __neg__(self) -> "ExactAmplitude":
        return ExactAmplitude(tuple(-x for x in self.coeffs), self.e)

    def __mul__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        a, b = self.coeffs, other.coeffs
        prod = [0, 0, 0, 0]
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                k = i + j
                if k >= 4:
                    prod[k - 4] -= ai * bj
                else:
                    prod[k] += ai * bj
        return ExactAmplitude(tuple(prod), self.e + other.e)

    def times_omega(self, k: int) -> "ExactAmplitude":
        return ExactAmplitude(omega_mul(self.coeffs, k), self.e)

    def times_sqrt2_power(self, k: int) -> "ExactAmplitude":
        """Multiply by sqrt(2)^k (k may be negative)."""
        return ExactAmplitude(self.coeffs, self.e - k)

    def conjugate(self) -> "ExactAmplitude":
        c0, c1, c2, c3 = self.coeffs
        return ExactAmplitude((c0, -c3, -c2, -c1), self.e)

    def abs2(self) -> "ExactProbability":
        u, v = abs2_parts(self.coeffs)
        return ExactProbability.from_dyadic(u, v, self.e)

    def to_complex(self) -> complex:
        c0, c1, c2, c3 = self.coeffs
        re = c0 + (c1 - c3) / SQRT2
        im = c2 + (c1 + c3) / SQRT2
        return complex(re, im) / SQRT2**self.e

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactAmplitude):
            return NotImplemented
        return self.coeffs == other.coeffs and self.e == other.e

    def __hash__(self) -> int:
        return hash((self.coeffs, self.e))

    def __repr__(self) -> str:
        return f"ExactAmplitude({self.coeffs!r}, e={self.e})"


def _sign_of_sqrt2_combination(a: Fraction, b: Fraction) -> int:
    """Exact sign of a + b*sqrt(2)."""
    if a == 0 and b == 0:
        return 0
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 2 b^2, the larger magnitude wins
    lhs = a * a
    rhs = 2 * b * b
    if a > 0:
        return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
    return -1 if lhs > rhs else (1 if lhs < rhs else 0)


class ExactProbability:
    """A real number a + b*sqrt(2), a and b rational, with exact comparisons.

    The name reflects the primary role: probabilities produced by the exact
    engine, which are all of the form (u + v*sqrt(2)) / 2^e.  Arithmetic does
    not clamp to [0, 1]; residuals and scaled bounds reuse the same type and
    `is_probability` checks the range where required.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Fraction | int = 0, b: Fraction | int = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("ExactProbability is immutable")

    @classmethod
    def zero(cls) -> "ExactProbability":
        return cls(0, 0)

    @classmethod
    def one(cls) -> "ExactProbability":
        return cls(1, 0)

    @classmethod
    def from_dyadic(cls, u: int, v: int, e: int) -> "ExactProbability":
        """Value (u + v*sqrt(2)) / 2^e."""
        d = 1 << e
        return cls(Fraction(u, d), Fraction(v, d))

    @classmethod
    def _coerce(cls, x) -> "ExactProbability | None":
        if isinstance(x, ExactProbability):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        return None

    def __add__(self, other) -> "ExactProbability":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactProbability(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> "ExactProbability":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactProbability(self.a - o.a, self.b - o.b)

    def __rsub__(self, other) -> "ExactProbability":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactProbability(o.a - self.a, o.b - self.b)

    def __mul__(self, other) -> "ExactProbability":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactProbability(
            self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def __neg__(self) -> "ExactProbability":
        return ExactProbability(-self.a, -self.b)

    def __abs__(self) -> "ExactProbability":
        return -self if self.sign() < 0 else self

    def sign(self) -> int:
        return _sign_of_sqrt2_combination(self.a, self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_probability(self) -> bool:
        return self.sign() >= 0 and (self - 1).sign() <= 0

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare ExactProbability with {type(other)!r}")
        return (self - o).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def doubled(self) -> "ExactProbability":
        return ExactProbability(2 * self.a, 2 * self.b)

    def halved(self) -> "ExactProbability":
        return ExactProbability(self.a / 2, self.b / 2)

    def as_triple(self) -> tuple[int, int, int, int]:
        """Return (u, v, e, m) with value (u + v*sqrt(2)) / (2^e * m), m odd."""
        d = math.lcm(self.a.denominator, self.b.denominator)
        e = (d & -d).bit_length() - 1
        m = d >> e
        u = self.a.numerator * (d // self.a.denominator)
        v = self.b.numerator * (d // self.b.denominator)
        return u, v, e, m

    def triple_string(self) -> str:
        """Normative serialization "(u, v, e)"; an odd cofactor appears after ';'."""
        u, v, e, m = self.as_triple()
        if m == 1:
            return f"({u}, {v}, {e})"
        return f"({u}, {v}, {e}; {m})"

    @classmethod
    def from_triple_string(cls, text: str) -> "ExactProbability":
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"not a triple string: {text!r}")
        body = body[1:-1]
        m = 1
        if ";" in body:
            body, mtext = body.split(";")
            m = int(mtext)
            if m < 1:
                raise ValueError(f"cofactor must be positive in {text!r}")
        parts = [int(p) for p in body.split(",")]
        if len(parts) != 3:
            raise ValueError(f"not a triple string: {text!r}")
        u, v, e = parts
        if e < 0:
            raise ValueError(f"negative exponent in {text!r}")
        d = (1 << e) * m
        return cls(Fraction(u, d), Fraction(v, d))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * SQRT2

    def __repr__(self) -> str:
        return f"ExactProbability({self.a!r}, {self.b!r})"

    def __str__(self) -> str:
        return self.triple_string()
