"""
Prime-field arithmetic GF(S).

Elements are integers in [0, S-1]; all operations are integer arithmetic
mod S. Only prime moduli are supported.
"""

from __future__ import annotations

from dataclasses import dataclass


class NonPrimeModulus(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


class ZeroElement(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    """Trial-division primality test."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in ascending order."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def _is_generator(g: int, modulus: int) -> bool:
    order = modulus - 1
    return all(pow(g, order // p, modulus) != 1 for p in prime_factors(order))


@dataclass(frozen=True)
class GfField:
    """
    The prime field GF(S) together with a primitive element.

    Parameters
    ----------
    modulus : int
        Prime S >= 3.
    alpha : int
        Generator of the multiplicative group, order S-1.
    """

    modulus: int
    alpha: int

    def __post_init__(self):
        if self.modulus < 3 or not is_prime(self.modulus):
            raise NonPrimeModulus(f"GF modulus must be a prime >= 3, got {self.modulus}")
        if not 1 <= self.alpha < self.modulus or not _is_generator(self.alpha, self.modulus):
            raise ValueError(f"{self.alpha} is not a primitive element of GF({self.modulus})")

    def __call__(self, value: int) -> GfElement:
        return GfElement(int(value) % self.modulus, self)

    @property
    def order(self) -> int:
        return self.modulus

    @property
    def primitive(self) -> GfElement:
        return self(self.alpha)

    def elements(self) -> list[GfElement]:
        return [GfElement(v, self) for v in range(self.modulus)]


def make_field(S: int) -> GfField:
    """Build GF(S) using the smallest primitive element."""
    if S < 3 or not is_prime(S):
        raise NonPrimeModulus(f"GF modulus must be a prime >= 3, got {S}")
    alpha = next(g for g in range(2, S) if _is_generator(g, S))
    return GfField(S, alpha)


@dataclass(frozen=True)
class GfElement:
    value: int
    field: GfField

    def __post_init__(self):
        if not 0 <= self.value < self.field.modulus:
            raise ValueError(f"value {self.value} outside GF({self.field.modulus})")

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"GF{self.field.modulus}({self.value})"

    def _coerce(self, other) -> GfElement:
        if isinstance(other, GfElement):
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else gf_arith(self, other, "add")

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else gf_arith(self, other, "sub")

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else gf_arith(self, other, "mul")

    def __truediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else gf_arith(self, other, "div")

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else gf_arith(other, self, "sub")

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else gf_arith(other, self, "div")

    def __neg__(self):
        return GfElement((-self.value) % self.field.modulus, self.field)

    def __pow__(self, e: int):
        return gf_pow(self, e)

    def inverse(self) -> GfElement:
        if self.value == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.field.modulus})")
        return GfElement(pow(self.value, -1, self.field.modulus), self.field)


def gf_arith(a: GfElement, b: GfElement, op: str) -> GfElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements of one field."""
    if a.field != b.field:
        raise FieldMismatch(f"GF({a.field.modulus}) vs GF({b.field.modulus})")
    S = a.field.modulus
    if op == "add":
        v = a.value + b.value
    elif op == "sub":
        v = a.value - b.value
    elif op == "mul":
        v = a.value * b.value
    elif op == "div":
        if b.value == 0:
            raise DivisionByZero(f"division by zero in GF({S})")
        v = a.value * pow(b.value, -1, S)
    else:
        raise ValueError(f"unknown GF operation {op!r}")
    return GfElement(v % S, a.field)


def gf_pow(a: GfElement, e: int) -> GfElement:
    """``a**e`` by square-and-multiply; ``0**0 == 1``."""
    if e < 0:
        raise ValueError("negative exponents are not supported, use inverse()")
    S = a.field.modulus
    if a.value == 0:
        return GfElement(1 if e == 0 else 0, a.field)
    # Fermat: a^(S-1) = 1 for a != 0
    return GfElement(pow(a.value, e % (S - 1), S), a.field)


def mult_order(a: GfElement) -> int:
    """Smallest t >= 1 with a**t == 1."""
    if a.value == 0:
        raise ZeroElement("0 has no multiplicative order")
    S = a.field.modulus
    group = S - 1
    t = group
    # strip prime factors while the power stays at 1
    for p in prime_factors(group):
        while t % p == 0 and pow(a.value, t // p, S) == 1:
            t //= p
    return t
