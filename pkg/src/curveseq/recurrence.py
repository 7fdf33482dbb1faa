"""Linear recurrences with polynomial coefficients, over Q and over F_p.

The central object is the order-5 recurrence

    4(n+4) g_{n+5} + 8(n+2) g_{n+4} + (n+3) g_{n+3}
        + (4n+7) g_{n+2} + (5n+4) g_{n+1} + 2n g_n = 0,   n >= 0,

whose solution with initial data (0, 1, 2, -1/8, -1/2) is the main sequence
studied throughout this package.  Over F_p the leading coefficient vanishes
at every step producing an index m = 1 mod p, which leaves that value free
but imposes a linear consistency constraint on the five values before it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exactnum import padic_valuation, reduce_fraction_mod
from .linalg import rank_fraction


def poly_eval(poly: Sequence[int], n: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class Recurrence:
    """sum_j P_j(n) * g_{n+j} = 0; shifts maps offset j -> coefficients of P_j."""

    shifts: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        if not any(c for c in self.leading_poly):
            raise ValueError("leading coefficient polynomial must be nonzero")

    @property
    def order(self) -> int:
        return max(j for j, _ in self.shifts)

    @property
    def leading_poly(self) -> tuple[int, ...]:
        return dict(self.shifts)[self.order]

    def window_value(self, values: Sequence, n: int):
        """sum_j P_j(n) * values[n+j]; zero exactly when the window satisfies
        the recurrence at index n."""
        acc = None
        for j, poly in self.shifts:
            term = values[n + j] * poly_eval(poly, n)
            acc = term if acc is None else acc + term
        return acc

    def satisfies(self, values: Sequence, modulus: int | None = None) -> bool:
        for n in range(len(values) - self.order):
            w = self.window_value(values, n)
            if (w % modulus if modulus is not None else w) != 0:
                return False
        return True


#: the main order-5 recurrence
MAIN_RECURRENCE = Recurrence(
    (
        (0, (0, 2)),       # 2n
        (1, (4, 5)),       # 5n + 4
        (2, (7, 4)),       # 4n + 7
        (3, (3, 1)),       # n + 3
        (4, (16, 8)),      # 8(n + 2)
        (5, (16, 4)),      # 4(n + 4)
    )
)

#: contrast fixture (n+2)c_{n+2} - (2n+3)c_{n+1} + n c_n = 0, generating
#: function exp(x/(1-x)), factorial denominator growth
FOOTNOTE_RECURRENCE = Recurrence(
    (
        (0, (0, 1)),
        (1, (-3, -2)),
        (2, (2, 1)),
    )
)

#: A(x) = x(1+2x)Q(x) and B(x): the generating-function identity reads
#: A(x) S'(x) - B(x) S(x) = R(x) with R determined by the initial data
A_COEFFS = (0, 4, 8, 1, 4, 5, 2)
B_COEFFS = (4, 16, 0, 1, 1)

SPECIAL_DIRECTION = (Fraction(1), Fraction(2), Fraction(-1, 8), Fraction(-1, 2))


@dataclass(frozen=True)
class InitialData:
    """Initial values C_0..C_4; C_0 never influences later terms."""

    values: tuple[Fraction, Fraction, Fraction, Fraction, Fraction]

    @classmethod
    def of(cls, *vals) -> "InitialData":
        if len(vals) == 1 and isinstance(vals[0], (list, tuple)):
            vals = tuple(vals[0])
        if len(vals) != 5:
            raise ValueError("need exactly C_0..C_4")
        return cls(tuple(Fraction(v) for v in vals))

    @property
    def is_special(self) -> bool:
        """(C_1..C_4) proportional to (1, 2, -1/8, -1/2), zero included."""
        c = self.values[1:]
        lam = c[0] / SPECIAL_DIRECTION[0]
        return all(ci == lam * di for ci, di in zip(c, SPECIAL_DIRECTION))

    @property
    def hyperplane_value(self) -> Fraction:
        c = self.values
        return 6 * c[4] + c[2] + c[1]

    def normalized(self) -> "InitialData":
        """Same data with C_0 = 0 (the convention used by the quadrature path)."""
        return InitialData((Fraction(0),) + self.values[1:])

    def reduce_mod(self, p: int) -> tuple[int, int, int, int, int]:
        return tuple(reduce_fraction_mod(v, p) for v in self.values)


MAIN_INITIAL_DATA = InitialData.of(0, 1, 2, Fraction(-1, 8), Fraction(-1, 2))


def special_detector(init: InitialData) -> tuple[bool, Fraction]:
    """(is_special, 6C_4 + C_2 + C_1); the hyperplane value vanishes on
    special data but not conversely."""
    return init.is_special, init.hyperplane_value


def extend_rational(spec: Recurrence, init: InitialData | Sequence, n_terms: int) -> list[Fraction]:
    """The unique rational solution with the given initial data, to index n_terms-1."""
    values = list(init.values if isinstance(init, InitialData) else (Fraction(v) for v in init))
    if len(values) != spec.order:
        raise ValueError(f"need exactly {spec.order} initial values")
    values = [Fraction(v) for v in values]
    d = spec.order
    lead = spec.leading_poly
    lower = [(j, poly) for j, poly in spec.shifts if j < d]
    for n in range(0, n_terms - d):
        denom = poly_eval(lead, n)
        if denom == 0:
            raise ZeroDivisionError(f"leading coefficient vanishes at n = {n}")
        acc = Fraction(0)
        for j, poly in lower:
            c = poly_eval(poly, n)
            if c:
                acc += c * values[n + j]
        values.append(-acc / denom)
    return values[:n_terms]


def main_sequence(n_terms: int) -> list[Fraction]:
    """c_0, c_1, ..., c_{n_terms-1} of the main sequence."""
    return extend_rational(MAIN_RECURRENCE, MAIN_INITIAL_DATA, n_terms)


# -- mod-p extension -----------------------------------------------------------


ChoicePolicy = Callable[[int, list[int]], int]


def zero_policy(index: int, prefix: list[int]) -> int:
    return 0


def reduction_policy(rational_values: Sequence[Fraction], p: int) -> ChoicePolicy:
    """Free choices taken from the reduction of a known rational solution."""

    def policy(index: int, prefix: list[int]) -> int:
        return reduce_fraction_mod(rational_values[index], p)

    return policy


def extend_modp_exhaustive(
    spec: Recurrence, init: Sequence[int], p: int, n_terms: int
) -> "ModPSolution | None":
    """Search every combination of free choices (small p only); returns a
    successful extension or None when no choice sequence reaches n_terms."""
    if p < 3:
        raise ValueError("p >= 3 required")
    d = spec.order
    lead = spec.leading_poly
    lower = [(j, poly) for j, poly in spec.shifts if j < d]

    def step(values: list[int], choices: list[tuple[int, int]]):
        m = len(values)
        if m >= n_terms:
            return ModPSolution(p, values, choices)
        n = m - d
        denom = poly_eval(lead, n) % p
        acc = 0
        for j, poly in lower:
            acc = (acc + poly_eval(poly, n) * values[n + j]) % p
        if denom:
            return step(values + [-acc * pow(denom, -1, p) % p], choices)
        if acc % p != 0:
            return None
        for choice in range(p):
            found = step(values + [choice], choices + [(m, choice)])
            if found is not None:
                return found
        return None

    return step([v % p for v in init], [])


@dataclass
class ModPSolution:
    """A (partial) solution over F_p with its free-choice log.

    ``violated_at`` is the first index m = 1 mod p whose consistency
    constraint failed; values then hold the prefix up to m-1.
    """

    p: int
    values: list[int]
    free_choices: list[tuple[int, int]] = field(default_factory=list)
    violated_at: int | None = None

    @property
    def ok(self) -> bool:
        return self.violated_at is None


def extend_modp(
    spec: Recurrence,
    init: Sequence[int],
    p: int,
    n_terms: int,
    choice_policy: ChoicePolicy | str = "zero",
) -> ModPSolution:
    """Extend initial data over F_p, inserting policy values at the free
    indexes m = 1 mod p and checking the consistency constraint there.

    A constraint violation is a result (``violated_at``), not an error.
    """
    if p < 3:
        raise ValueError("extend_modp requires p >= 3")
    if isinstance(choice_policy, str):
        if choice_policy != "zero":
            raise ValueError(f"unknown policy {choice_policy!r}")
        choice_policy = zero_policy
    d = spec.order
    if len(init) != d:
        raise ValueError(f"need exactly {d} initial values")
    values = [v % p for v in init]
    sol = ModPSolution(p, values)
    lead = spec.leading_poly
    lower = [(j, poly) for j, poly in spec.shifts if j < d]
    for m in range(d, n_terms):
        n = m - d
        denom = poly_eval(lead, n) % p
        acc = 0
        for j, poly in lower:
            acc = (acc + poly_eval(poly, n) * values[n + j]) % p
        if denom == 0:
            # the window below m is constrained; the value at m is free
            if acc % p != 0:
                sol.violated_at = m
                return sol
            choice = choice_policy(m, values) % p
            sol.free_choices.append((m, choice))
            values.append(choice)
        else:
            values.append(-acc * pow(denom, -1, p) % p)
    return sol


# -- the right-hand side R(x) ---------------------------------------------------


@dataclass(frozen=True)
class RhsForms:
    """R(x) and its normalized variant for given initial data.

    R's five coefficients are linear forms in C_0..C_4 spanning a space of
    dimension 4; R is a constant multiple of B(x) exactly for special data.
    """

    r_coeffs: tuple[Fraction, ...]
    r_tilde_coeffs: tuple[Fraction, Fraction, Fraction]
    a_coeffs: tuple[int, ...] = A_COEFFS
    b_coeffs: tuple[int, ...] = B_COEFFS

    def r_is_multiple_of_b(self) -> bool:
        rows = [list(self.r_coeffs), [Fraction(c) for c in self.b_coeffs]]
        return rank_fraction(rows) <= 1


def rhs_forms(init: InitialData) -> RhsForms:
    c = init.values
    r = (
        -4 * c[0],
        -16 * c[0],
        4 * c[2] - 8 * c[1],
        8 * c[3] + c[1] - c[0],
        12 * c[4] + 8 * c[3] + 2 * c[2] + 3 * c[1] - c[0],
    )
    r_tilde = (
        4 * c[2] - 8 * c[1],
        8 * c[3] + c[1],
        12 * c[4] + 8 * c[3] + 2 * c[2] + 3 * c[1],
    )
    return RhsForms(r, r_tilde)


def rhs_form_matrix() -> list[list[Fraction]]:
    """The five R-coefficient forms as rows in the variables C_0..C_4."""
    rows = []
    for k in range(5):
        row = []
        for i in range(5):
            e = [Fraction(0)] * 5
            e[i] = Fraction(1)
            row.append(rhs_forms(InitialData(tuple(e))).r_coeffs[k])
        rows.append(row)
    return rows


# -- denominator profile ---------------------------------------------------------


@dataclass
class DenominatorProfile:
    d: int
    ok: bool
    witness: tuple[int, int] | None  # (index m, prime p) violating the bound
    denominators: list[int]
    prime_support: list[int]


def denominator_profile(seq: Sequence[Fraction], d: int) -> DenominatorProfile:
    """Check den(d * 16^m * C_m) | lcm(1..n-1) for all m <= n < len(seq).

    Since lcm(1..n-1) grows with n, the binding case is n = m; a violation
    reports the first (m, p) with p^k exceeding the allowed power.
    """
    if d == 0:
        raise ValueError("d must be nonzero")
    denominators = []
    support: set[int] = set()
    witness = None
    lcm_val = 1  # lcm(1..m-1), maintained incrementally
    for m, c in enumerate(seq):
        if m >= 2:
            lcm_val = _lcm(lcm_val, m - 1)
        den = (Fraction(d) * Fraction(16) ** m * c).denominator
        denominators.append(den)
        support.update(_prime_factors(den))
        if witness is None and lcm_val % den != 0:
            bad = next(p for p in _prime_factors(den) if _vp_int(lcm_val, p) < _vp_int(den, p))
            witness = (m, bad)
    return DenominatorProfile(d, witness is None, witness, denominators, sorted(support))


def _lcm(a: int, b: int) -> int:
    import math

    return math.lcm(a, b)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def integrality_witness(seq: Sequence[Fraction], p: int, n_limit: int) -> int | None:
    """Smallest n <= n_limit with v_p(seq[n]) < 0, or None."""
    for n in range(min(len(seq), n_limit + 1)):
        if padic_valuation(seq[n], p) < 0:
            return n
    return None


def common_denominator(init: InitialData) -> int:
    """A natural d for the denominator bound: lcm of the R-coefficient denominators."""
    d = 1
    for c in rhs_forms(init).r_coeffs:
        d = _lcm(d, c.denominator)
    return d


# -- JSON fixture format ----------------------------------------------------------


def sequence_to_json(seq: Sequence[Fraction]) -> str:
    """Exact serialization as a JSON array of "num/den" strings."""
    return json.dumps([f"{c.numerator}/{c.denominator}" for c in seq])


def sequence_from_json(text: str) -> list[Fraction]:
    data = json.loads(text)
    out = []
    for item in data:
        num, _, den = item.partition("/")
        out.append(Fraction(int(num), int(den) if den else 1))
    return out
