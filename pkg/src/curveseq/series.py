"""Truncated formal power series and Laurent series over exact scalars.

A :class:`TruncatedSeries` is known modulo x^N where N is its ``precision``.
Coefficients are either plain ints with a ``modulus`` tag (arithmetic mod m,
the fast path) or exact scalar objects (``Fraction``, :class:`~curveseq.exactnum.QuadExt`)
with ``modulus=None``.  Every operation records the tightest precision that
is actually valid; mixing precisions takes the minimum.  Series are immutable
values, safe to fan out across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactnum import divisors, generalized_binomial, is_p_integral, mobius

_NUMPY_CUTOFF = 48


def _convolve_mod(a: list[int], b: list[int], n_out: int, m: int) -> list[int]:
    if len(a) >= _NUMPY_CUTOFF and len(b) >= _NUMPY_CUTOFF:
        # exact in int64: coefficients < m, sums bounded by len * m^2
        if min(len(a), len(b)) * m * m < 2**62:
            c = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
            return [int(v) % m for v in c[:n_out]]
    out = [0] * n_out
    for i, ai in enumerate(a):
        if ai == 0 or i >= n_out:
            continue
        for j, bj in enumerate(b[: n_out - i]):
            if bj:
                out[i + j] = (out[i + j] + ai * bj) % m
    return out


class TruncatedSeries:
    """A power series truncated at order ``precision`` (exclusive)."""

    __slots__ = ("coeffs", "precision", "modulus")

    def __init__(self, coeffs, precision: int | None = None, modulus: int | None = None):
        coeffs = list(coeffs)
        if precision is None:
            precision = len(coeffs)
        if precision < 0:
            raise ValueError("negative precision")
        zero = 0 if modulus is not None else _zero_like(coeffs)
        if len(coeffs) < precision:
            coeffs = coeffs + [zero] * (precision - len(coeffs))
        else:
            coeffs = coeffs[:precision]
        if modulus is not None:
            coeffs = [c % modulus if isinstance(c, int) else _to_int_mod(c, modulus) for c in coeffs]
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, *args):
        raise AttributeError("TruncatedSeries is immutable")

    # -- helpers -----------------------------------------------------------

    def _zero(self):
        return 0 if self.modulus is not None else _zero_like(self.coeffs)

    def _wrap(self, coeffs, precision):
        return TruncatedSeries(coeffs, precision, self.modulus)

    def _check_domain(self, other: "TruncatedSeries"):
        if self.modulus != other.modulus:
            raise ValueError("mixed scalar domains")

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError("negative index")
        if n >= self.precision:
            raise IndexError(f"coefficient x^{n} beyond precision {self.precision}")
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.precision == other.precision
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((tuple(self.coeffs), self.precision, self.modulus))

    def __repr__(self):
        shown = ", ".join(repr(c) for c in self.coeffs[:6])
        if self.precision > 6:
            shown += ", ..."
        dom = "QQ" if self.modulus is None else f"Z/{self.modulus}"
        return f"TruncatedSeries([{shown}] + O(x^{self.precision}), {dom})"

    def agrees_with(self, other: "TruncatedSeries", upto: int) -> bool:
        """Coefficientwise equality for indices below ``upto``."""
        if upto > min(self.precision, other.precision):
            raise ValueError("agreement window exceeds precision")
        return self.coeffs[:upto] == other.coeffs[:upto]

    def truncate(self, precision: int) -> "TruncatedSeries":
        if precision > self.precision:
            raise ValueError("cannot raise precision by truncation")
        return self._wrap(self.coeffs[:precision], precision)

    def valuation(self) -> int | None:
        """Index of the first nonzero known coefficient, None if all vanish."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    # -- ring operations ---------------------------------------------------

    def __neg__(self):
        return self._wrap([-c for c in self.coeffs], self.precision)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_domain(other)
        n = min(self.precision, other.precision)
        return self._wrap([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_domain(other)
            n = min(self.precision, other.precision)
            if self.modulus is not None:
                return self._wrap(_convolve_mod(self.coeffs, other.coeffs, n, self.modulus), n)
            out = [self._zero() for _ in range(n)]
            for i, a in enumerate(self.coeffs[:n]):
                if not a:
                    continue
                for j in range(n - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] = out[i + j] + a * b
            return self._wrap(out, n)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar):
        if self.modulus is not None and not isinstance(scalar, int):
            scalar = _to_int_mod(scalar, self.modulus)
        return self._wrap([c * scalar for c in self.coeffs], self.precision)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by x^k (k >= 0); precision increases by k."""
        if k < 0:
            raise ValueError("use divide_by_x for negative shifts")
        return self._wrap([self._zero()] * k + self.coeffs, self.precision + k)

    def divide_by_x(self, k: int = 1) -> "TruncatedSeries":
        """Divide by x^k; the k leading coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError("series not divisible by x^k")
        return self._wrap(self.coeffs[k:], self.precision - k)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a unit constant term."""
        if self.precision == 0:
            return self
        f0 = self.coeffs[0]
        if not f0:
            raise ZeroDivisionError("zero constant term")
        n = self.precision
        if self.modulus is not None:
            m = self.modulus
            g = [pow(f0, -1, m)]
            # Newton iteration g <- g*(2 - f*g), doubling the known order
            while len(g) < n:
                k = min(2 * len(g), n)
                fg = _convolve_mod(self.coeffs[:k], g, k, m)
                t = [(-v) % m for v in fg]
                t[0] = (t[0] + 2) % m
                g = _convolve_mod(g, t, k, m)
            return self._wrap(g, n)
        inv0 = _scalar_inverse(f0)
        out = [inv0]
        for k in range(1, n):
            acc = self._zero()
            for i in range(1, k + 1):
                c = self.coeffs[i]
                if c:
                    acc = acc + c * out[k - i]
            out.append(-inv0 * acc)
        return self._wrap(out, n)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        if self.modulus is not None:
            inv = pow(_to_int_mod(other, self.modulus) if not isinstance(other, int) else other, -1, self.modulus)
            return self.scale(inv)
        return self.scale(_scalar_inverse(other))

    def sqrt(self, root0) -> "TruncatedSeries":
        """Square root with prescribed value at 0; needs root0^2 = f(0), char != 2."""
        if self.precision == 0:
            return self
        if self.modulus == 2:
            raise ValueError("no square roots in characteristic 2")
        if self.modulus is not None and not isinstance(root0, int):
            root0 = _to_int_mod(root0, self.modulus)
        if _ne(root0 * root0, self.coeffs[0], self.modulus):
            raise ValueError("root0^2 does not match the constant term")
        if not root0:
            raise ValueError("root0 must be a unit")
        n = self.precision
        if self.modulus is not None:
            m = self.modulus
            inv2r = pow(2 * root0, -1, m)
            out = [root0 % m]
            for k in range(1, n):
                acc = 0
                for i in range(1, k):
                    acc += out[i] * out[k - i]
                out.append((self.coeffs[k] - acc) * inv2r % m)
            return self._wrap(out, n)
        inv2r = _scalar_inverse(root0 + root0)
        out = [root0 * Fraction(1) if isinstance(root0, int) else root0]
        for k in range(1, n):
            acc = self._zero()
            for i in range(1, k):
                acc = acc + out[i] * out[k - i]
            out.append((self.coeffs[k] - acc) * inv2r)
        return self._wrap(out, n)

    def derivative(self) -> "TruncatedSeries":
        n = self.precision
        if n == 0:
            return self
        if self.modulus is not None:
            out = [(i * c) % self.modulus for i, c in enumerate(self.coeffs)][1:]
        else:
            out = [c * i for i, c in enumerate(self.coeffs)][1:]
        return self._wrap(out, n - 1)

    def log_derivative(self) -> "TruncatedSeries":
        """f'/f to precision N-1; additive on products."""
        return self.derivative() * self.inverse().truncate(max(self.precision - 1, 0))

    def x_log_derivative(self) -> "TruncatedSeries":
        """x f'/f to precision N (coefficient n depends on f only up to x^n)."""
        return self.log_derivative().shift(1)


def _zero_like(coeffs):
    for c in coeffs:
        return c * 0
    return Fraction(0)


def _scalar_inverse(c):
    if isinstance(c, int):
        return Fraction(1, c)
    if isinstance(c, Fraction):
        return 1 / c
    return c.inverse()


def _to_int_mod(c, m: int) -> int:
    if isinstance(c, Fraction):
        return c.numerator % m * pow(c.denominator % m, -1, m) % m
    if hasattr(c, "value"):  # ModInt
        if c.modulus != m:
            raise ValueError("mixed moduli")
        return c.value
    raise TypeError(f"cannot reduce {c!r} mod {m}")


def series_one(precision: int, modulus: int | None = None) -> TruncatedSeries:
    one = 1 if modulus is not None else Fraction(1)
    return TruncatedSeries([one], precision, modulus)


def from_polynomial(coeffs, precision: int, modulus: int | None = None) -> TruncatedSeries:
    """A polynomial viewed as a series to the given precision."""
    if modulus is None:
        coeffs = [Fraction(c) for c in coeffs]
    return TruncatedSeries(coeffs, precision, modulus)


def binomial_power(u: TruncatedSeries, a: int | Fraction) -> TruncatedSeries:
    """(1 + u)^a = sum_k binom(a, k) u^k for a series u with u(0) = 0.

    Satisfies (1+u)^a (1+u)^b = (1+u)^(a+b); for integer a >= 0 it agrees
    with the polynomial power.
    """
    if u.precision == 0:
        return u
    if u.coeffs[0]:
        raise ValueError("binomial_power needs u(0) = 0")
    n = u.precision
    val = u.valuation()
    result = series_one(n, u.modulus)
    power = series_one(n, u.modulus)
    k = 1
    step = val if val is not None else n
    while val is not None and k * step < n:
        power = power * u
        coeff = generalized_binomial(a, k)
        if u.modulus is not None:
            if coeff.denominator % u.modulus == 0:
                raise ValueError(f"binomial coefficient not defined mod {u.modulus}")
            result = result + power.scale(_to_int_mod(coeff, u.modulus))
        else:
            result = result + power.scale(coeff)
        k += 1
    return result


def phi_part(f: TruncatedSeries, p: int) -> TruncatedSeries:
    """Keep exactly the coefficients a_n with p | n (the averaged series p^{-1} sum f(theta x))."""
    zero = 0 if f.modulus is not None else _zero_like(f.coeffs)
    out = [c if n % p == 0 else zero for n, c in enumerate(f.coeffs)]
    return TruncatedSeries(out, f.precision, f.modulus)


def divided_derivative(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """The k-th divided derivative sum_n binom(n, k) a_n x^{n-k}."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = f.precision
    if n <= k:
        return TruncatedSeries([], 0, f.modulus)
    if f.modulus is not None:
        out = [math.comb(i, k) % f.modulus * f.coeffs[i] % f.modulus for i in range(k, n)]
    else:
        out = [f.coeffs[i] * math.comb(i, k) for i in range(k, n)]
    return TruncatedSeries(out, n - k, f.modulus)


def phi_and_divided_derivative(f: TruncatedSeries, p: int, k: int):
    """(phi-part keeping p | n, k-th divided derivative); over F_p with k = p-1
    the second picks the coefficients a_n with n = -1 mod p."""
    return phi_part(f, p), divided_derivative(f, k)


# -- Dieudonne exponents ----------------------------------------------------


@dataclass(frozen=True)
class DieudonneExponents:
    """The unique a_1..a_M with f = prod_m (1 - x^m)^{a_m} + O(x^{M+1})."""

    exponents: tuple[Fraction, ...]
    precision: int

    def __getitem__(self, m: int) -> Fraction:
        if not 1 <= m <= self.precision:
            raise IndexError(f"exponent a_{m} not computed")
        return self.exponents[m - 1]

    def reconstruct(self) -> TruncatedSeries:
        """prod_{m<=M} (1 - x^m)^{a_m} to precision M+1."""
        n = self.precision + 1
        coeffs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for m, a in enumerate(self.exponents, start=1):
            if a:
                coeffs = _mul_one_minus_xm_power(coeffs, m, a, n)
        return TruncatedSeries(coeffs, n)


def _mul_one_minus_xm_power(coeffs: list[Fraction], m: int, a: Fraction, n: int) -> list[Fraction]:
    """coeffs * (1 - x^m)^a truncated at order n; the factor is sparse in x^m."""
    out = [Fraction(0)] * n
    k = 0
    while m * k < n:
        fc = generalized_binomial(a, k) * (-1) ** k
        if fc:
            e = m * k
            for i in range(n - e):
                if coeffs[i]:
                    out[i + e] += coeffs[i] * fc
        k += 1
    return out


def dieudonne_exponents(f: TruncatedSeries, m_max: int) -> DieudonneExponents:
    """Exponents via the Moebius formula a_n = -(sum_{m|n} mu(m) c_{n/m})/n,
    where c = coefficients of x f'/f."""
    if f.modulus is not None:
        raise ValueError("exponents are computed over the rationals")
    if f.coeffs[0] != 1:
        raise ValueError("f(0) must be 1")
    if m_max >= f.precision:
        raise ValueError("need precision > m_max")
    c = f.x_log_derivative()
    exps = []
    for n in range(1, m_max + 1):
        acc = Fraction(0)
        for m in divisors(n):
            mu = mobius(m)
            if mu:
                acc += mu * c[n // m]
        exps.append(-acc / n)
    return DieudonneExponents(tuple(exps), m_max)


def dieudonne_exponents_peeling(f: TruncatedSeries, m_max: int) -> DieudonneExponents:
    """Independent route: strip factors (1 - x^n)^{a_n} inductively."""
    if f.coeffs[0] != 1:
        raise ValueError("f(0) must be 1")
    if m_max >= f.precision:
        raise ValueError("need precision > m_max")
    n = m_max + 1
    partial = [Fraction(1)] + [Fraction(0)] * (n - 1)
    exps = []
    for m in range(1, m_max + 1):
        a = partial[m] - f[m]
        exps.append(a)
        if a:
            partial = _mul_one_minus_xm_power(partial, m, a, n)
    return DieudonneExponents(tuple(exps), m_max)


# -- congruence scanner -------------------------------------------------------


@dataclass
class CongruenceReport:
    p: int
    r_max: int
    n_max: int
    ok: bool
    non_integral_index: int | None = None
    failures: tuple[tuple[int, int], ...] = ()
    witness_exponents: DieudonneExponents | None = None
    witness_integral: bool | None = None
    witness_rederives: bool | None = None

    def first_failure(self) -> tuple[int, int] | None:
        return self.failures[0] if self.failures else None


def congruence_scan(
    c: list[Fraction],
    p: int,
    r_max: int,
    n_max: int,
    reconstruct: bool = False,
    witness_terms: int = 200,
) -> CongruenceReport:
    """Check c_{k p^{r+1}} = c_{k p^r} mod p^{r+1} for k >= 1, r <= r_max,
    k p^{r+1} <= n_max.

    Every scanned coefficient must be p-integral (a non-p-integral one is an
    explicit failure with its index).  On success and ``reconstruct``, the
    witness exponents a_n of the converse direction are computed and their
    p-integrality checked: the scanned congruences hold iff the series with
    these exponents has p-integral coefficients.
    """
    n_max = min(n_max, len(c) - 1)
    for n in range(min(len(c), n_max + 1)):
        if not is_p_integral(c[n], p):
            return CongruenceReport(p, r_max, n_max, False, non_integral_index=n)
    failures = []
    for r in range(r_max + 1):
        step = p ** (r + 1)
        k = 1
        while k * step <= n_max:
            a, b = c[k * step], c[k * p**r]
            diff = a - b
            if diff != 0:
                v = 0
                num = diff.numerator
                while num % p == 0 and v < r + 1:
                    num //= p
                    v += 1
                if v < r + 1:
                    failures.append((k, r))
            k += 1
    report = CongruenceReport(p, r_max, n_max, not failures, failures=tuple(failures))
    if reconstruct and report.ok:
        m = min(witness_terms, n_max)
        exps = []
        integral = True
        for n in range(1, m + 1):
            acc = Fraction(0)
            for d in divisors(n):
                mu = mobius(d)
                if mu:
                    acc += mu * c[n // d]
            a_n = -acc / n
            exps.append(a_n)
            if not is_p_integral(a_n, p):
                integral = False
        report.witness_exponents = DieudonneExponents(tuple(exps), m)
        report.witness_integral = integral
        # the witness is prod (1-x^n)^(a_n); x f'/f must re-derive the input
        back = report.witness_exponents.reconstruct().x_log_derivative()
        report.witness_rederives = back.coeffs[1 : m + 1] == list(c[1 : m + 1])
    return report


# -- Laurent series -----------------------------------------------------------


class LaurentSeries:
    """x^offset * (power series); known modulo x^(offset + precision)."""

    __slots__ = ("offset", "series")

    def __init__(self, offset: int, series: TruncatedSeries):
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "series", series)

    def __setattr__(self, *args):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def from_series(cls, series: TruncatedSeries) -> "LaurentSeries":
        return cls(0, series)

    @property
    def bound(self) -> int:
        """Exponent below which coefficients are known."""
        return self.offset + self.series.precision

    @property
    def modulus(self):
        return self.series.modulus

    def coefficient(self, e: int):
        if e >= self.bound:
            raise IndexError(f"coefficient x^{e} beyond precision bound {self.bound}")
        if e < self.offset:
            return self.series._zero()
        return self.series.coeffs[e - self.offset]

    def residue(self):
        return self.coefficient(-1)

    def valuation(self) -> int | None:
        v = self.series.valuation()
        return None if v is None else self.offset + v

    def is_zero(self) -> bool:
        return self.series.is_zero()

    def normalized(self) -> "LaurentSeries":
        """Strip leading known-zero coefficients into the offset."""
        v = self.series.valuation()
        if v is None or v == 0:
            return self
        return LaurentSeries(self.offset + v, self.series.divide_by_x(v))

    def __neg__(self):
        return LaurentSeries(self.offset, -self.series)

    def _align(self, other: "LaurentSeries"):
        off = min(self.offset, other.offset)
        bound = min(self.bound, other.bound)
        n = bound - off
        a = self.series.shift(self.offset - off).truncate(n)
        b = other.series.shift(other.offset - off).truncate(n)
        return off, a, b

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            off, a, b = self._align(other)
            return LaurentSeries(off, a + b)
        # exactly-known scalar
        if self.offset > 0:
            return LaurentSeries(0, self.series.shift(self.offset)) + other
        s = self.series
        coeffs = list(s.coeffs)
        coeffs[-self.offset] = coeffs[-self.offset] + other
        return LaurentSeries(self.offset, TruncatedSeries(coeffs, s.precision, s.modulus))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentSeries) else -1 * other)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return LaurentSeries(self.offset + other.offset, self.series * other.series)
        return LaurentSeries(self.offset, self.series.scale(other))

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        norm = self.normalized()
        if norm.series.precision == 0 or not norm.series.coeffs[0]:
            raise ZeroDivisionError("cannot invert: zero to working precision")
        return LaurentSeries(-norm.offset, norm.series.inverse())

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self * _scalar_inverse(other)

    def derivative(self) -> "LaurentSeries":
        s = self.series
        if s.modulus is not None:
            out = [(self.offset + i) * c % s.modulus for i, c in enumerate(s.coeffs)]
        else:
            out = [c * (self.offset + i) for i, c in enumerate(s.coeffs)]
        return LaurentSeries(self.offset - 1, TruncatedSeries(out, s.precision, s.modulus))

    def truncate_bound(self, bound: int) -> "LaurentSeries":
        return LaurentSeries(self.offset, self.series.truncate(bound - self.offset))

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        if a.is_zero() and b.is_zero():
            return True
        return a.offset == b.offset and a.series.coeffs == b.series.coeffs

    def __hash__(self):
        n = self.normalized()
        return hash((n.offset, n.series))

    def __repr__(self):
        return f"x^{self.offset} * {self.series!r}"


def _ne(a, b, modulus):
    if modulus is not None:
        return (a - b) % modulus != 0
    return a != b
