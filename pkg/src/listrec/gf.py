"""Prime-field and rational arithmetic.

Hot paths elsewhere in the package work on plain ``int`` residues; the
:class:`FieldElement` wrapper is the checked, user-facing form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

MAX_MODULUS = 2**31


class ModulusMismatch(ValueError):
    pass


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of ``m`` by trial division."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class FieldElement:
    value: int
    q: int

    def __post_init__(self):
        if not 0 <= self.value < self.q:
            object.__setattr__(self, "value", self.value % self.q)

    def _check(self, other: FieldElement) -> None:
        if self.q != other.q:
            raise ModulusMismatch(f"moduli differ: {self.q} vs {other.q}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value + other.value) % self.q, self.q)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value - other.value) % self.q, self.q)

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.value % self.q, self.q)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.value * other.value % self.q, self.q)

    def __pow__(self, e: int) -> FieldElement:
        return power(self, e)

    def inverse(self) -> FieldElement:
        return inv(self)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} mod {self.q}"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {a.q}")
    return FieldElement(pow(a.value, a.q - 2, a.q), a.q)


def power(a: FieldElement, e: int) -> FieldElement:
    """Square-and-multiply; ``a**0 == 1`` including ``0**0``."""
    if e < 0:
        raise ValueError("negative exponent")
    result, base = 1, a.value
    while e:
        if e & 1:
            result = result * base % a.q
        base = base * base % a.q
        e >>= 1
    return FieldElement(result % a.q, a.q)


def inv_mod(x: int, q: int) -> int:
    x %= q
    if x == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {q}")
    return pow(x, q - 2, q)


def find_primitive_root(q: int) -> FieldElement:
    """Smallest generator of the multiplicative group of F_q."""
    if q < 3 or not is_prime(q):
        raise ValueError(f"q must be an odd prime, got {q}")
    if q >= MAX_MODULUS:
        raise ValueError(f"q must be below 2^31, got {q}")
    order = q - 1
    factors = prime_factors(order)
    for g in range(2, q):
        if all(pow(g, order // p, q) != 1 for p in factors):
            return FieldElement(g, q)
    raise AssertionError("unreachable for prime q")


def radd(a: Rational, b: Rational) -> Rational:
    return Fraction(a) + Fraction(b)


def rmul(a: Rational, b: Rational) -> Rational:
    return Fraction(a) * Fraction(b)


def rcmp(a: Rational, b: Rational) -> int:
    """-1, 0 or 1 as ``a`` is below, equal to, or above ``b``."""
    a, b = Fraction(a), Fraction(b)
    return (a > b) - (a < b)


def to_rational(x) -> Rational:
    """Parse ``"3/4"``, ints, or Fractions; floats are rejected to keep things exact."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals; pass a string like '1/4'")
    return Fraction(x)
