"""Exact coefficient fields: a prime field F_p or the rationals.

Coefficients are plain Python ints (reduced mod p) in the prime-field case
and ``fractions.Fraction`` in the rational case.  No floating point is used
anywhere in the toolkit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError

DEFAULT_PRIME = 32003


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e14."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: ``kind`` is "prime-field" (with ``p``) or "rationals"."""

    kind: str = "prime-field"
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.kind not in ("prime-field", "rationals"):
            raise ValidationError(f"unknown field kind {self.kind!r}")
        if self.kind == "prime-field" and not is_prime(self.p):
            raise ValidationError(f"field characteristic {self.p} is not prime")

    # -- arithmetic ---------------------------------------------------------
    # The zero test is the hot path of the row-reduction kernel; everything
    # here deliberately avoids object wrappers around the coefficients.

    def normalize(self, c):
        if self.kind == "prime-field":
            return int(c) % self.p
        return Fraction(c)

    def add(self, a, b):
        if self.kind == "prime-field":
            return (a + b) % self.p
        return a + b

    def sub(self, a, b):
        if self.kind == "prime-field":
            return (a - b) % self.p
        return a - b

    def mul(self, a, b):
        if self.kind == "prime-field":
            return (a * b) % self.p
        return a * b

    def neg(self, a):
        if self.kind == "prime-field":
            return (-a) % self.p
        return -a

    def inv(self, a):
        if self.kind == "prime-field":
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of 0 in F_p")
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return Fraction(1) / a

    @property
    def one(self):
        return 1 if self.kind == "prime-field" else Fraction(1)

    @property
    def zero(self):
        return 0 if self.kind == "prime-field" else Fraction(0)

    def encode(self, a):
        """JSON-stable encoding of a coefficient."""
        if self.kind == "prime-field":
            return int(a)
        return [a.numerator, a.denominator]
