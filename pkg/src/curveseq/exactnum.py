"""Exact scalar arithmetic: rationals, prime fields, valuations, binomials.

Rationals are ``fractions.Fraction`` (always reduced, positive denominator),
so equality is structural and values hash/compare as expected.  All values in
this module are immutable and safe to share between workers.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24 (covers 64-bit)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def padic_valuation(q: int | Fraction, p: int) -> int | float:
    """v_p(q): the exponent of p in q, +inf for q = 0.

    q is p-integral iff the result is >= 0.
    """
    require_prime(p)
    q = Fraction(q)
    if q == 0:
        return INF
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_p_integral(q: int | Fraction, p: int) -> bool:
    return padic_valuation(q, p) >= 0


def generalized_binomial(a: int | Fraction, k: int) -> Fraction:
    """binom(a, k) = a(a-1)...(a-k+1)/k! for rational a and k >= 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = Fraction(a)
    num = Fraction(1)
    for i in range(k):
        num *= a - i
    return num / math.factorial(k)


def legendre_symbol(a: int, p: int) -> int:
    """Quadratic residue symbol (a/p) in {-1, 0, 1} for an odd prime p."""
    require_prime(p)
    if p == 2:
        raise ValueError("p must be odd")
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo an odd prime p, or None if a is a non-residue.

    Desk scale: simple search (p stays small in every scan we run).
    """
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) != 1:
        return None
    for r in range(1, p):
        if r * r % p == a:
            return r
    raise AssertionError("unreachable for prime p")


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def lcm_upto(n: int) -> int:
    """lcm(1, 2, ..., n); 1 for n <= 1 (empty range behaves as lcm of nothing)."""
    out = 1
    for k in range(2, n + 1):
        out = math.lcm(out, k)
    return out


def mobius_and_lcm(n: int) -> tuple[int, int]:
    """(mu(n), lcm(1..n)) in one call."""
    if n < 1:
        raise ValueError("n must be positive")
    return mobius(n), lcm_upto(n)


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


class ModInt:
    """An integer modulo a fixed modulus, usually a prime p (the field F_p).

    Operations are only defined between equal moduli; division requires the
    operand to be a unit (always true for nonzero values mod a prime).
    Instances are immutable.
    """

    __slots__ = ("value", "modulus")

    def __init__(self, value: int | Fraction, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        if isinstance(value, Fraction):
            num = value.numerator % modulus
            den = value.denominator % modulus
            value = num * pow(den, -1, modulus)
        object.__setattr__(self, "value", value % modulus)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, *args):
        raise AttributeError("ModInt is immutable")

    def _coerce(self, other) -> "ModInt":
        if isinstance(other, ModInt):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli")
            return other
        if isinstance(other, (int, Fraction)):
            return ModInt(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return ModInt(-self.value, self.modulus)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "ModInt":
        return ModInt(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return ModInt(pow(self.value, k, self.modulus), self.modulus)
        return ModInt(pow(self.value, k, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        if isinstance(other, Fraction):
            try:
                return self == ModInt(other, self.modulus)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def fp(value: int | Fraction, p: int) -> ModInt:
    """A prime-field element; rejects composite moduli."""
    require_prime(p)
    return ModInt(value, p)


def reduce_fraction_mod(q: Fraction, m: int) -> int:
    """q mod m as an integer in [0, m); requires gcd(den(q), m) = 1."""
    return q.numerator % m * pow(q.denominator % m, -1, m) % m


class QuadExt:
    """Element a + b*sqrt(d) of F_p(sqrt(d)) for d a non-residue mod p.

    Used for places of the curve defined over the quadratic extension
    (the zeros of 1 + 2x live over F_p(sqrt(65))).
    """

    __slots__ = ("a", "b", "p", "d")

    def __init__(self, a: int, b: int, p: int, d: int):
        object.__setattr__(self, "a", a % p)
        object.__setattr__(self, "b", b % p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", d % p)

    def __setattr__(self, *args):
        raise AttributeError("QuadExt is immutable")

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if (other.p, other.d) != (self.p, self.d):
                raise ValueError("mixed extensions")
            return other
        if isinstance(other, int):
            return QuadExt(other, 0, self.p, self.d)
        if isinstance(other, Fraction):
            return QuadExt(reduce_fraction_mod(other, self.p), 0, self.p, self.d)
        if isinstance(other, ModInt):
            if other.modulus != self.p:
                raise ValueError("mixed moduli")
            return QuadExt(other.value, 0, self.p, self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadExt(self.a + other.a, self.b + other.b, self.p, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.p, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadExt(self.a - other.a, self.b - other.b, self.p, self.d)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a = self.a * other.a + self.d * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return QuadExt(a, b, self.p, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadExt":
        norm = (self.a * self.a - self.d * self.b * self.b) % self.p
        if norm == 0:
            raise ZeroDivisionError("non-unit in quadratic extension")
        ninv = pow(norm, -1, self.p)
        return QuadExt(self.a * ninv, -self.b * ninv, self.p, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.p, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d})) (mod {self.p})"
