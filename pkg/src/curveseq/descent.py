"""Descent of series solutions of first-order operators to rational ones.

Over K = F_p(x) one has K = K^p + K^p x + ... + K^p x^(p-1); writing the
unknown as phi = b_0^p + b_1^p x + ... + b_{p-1}^p x^(p-1) turns a first-order
equation a_1 phi' + a_0 phi = u into a p x p linear system over K in the b_i.
A power-series solution therefore forces a rational (here: polynomial)
solution, recovered by exact linear algebra on the coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import require_prime
from .linalg import kernel_mod, solve_affine_mod
from .polyring import Polynomial, RationalFunction
from .recurrence import A_COEFFS, B_COEFFS
from .series import TruncatedSeries


class DescentError(ValueError):
    pass


@dataclass(frozen=True)
class PBasisDecomposition:
    """u = sum_i components[i]^p x^i with components in F_p(x)."""

    p: int
    components: tuple[RationalFunction, ...]

    def recombine(self) -> RationalFunction:
        total = None
        for i, comp in enumerate(self.components):
            num = frobenius_power(comp.num, self.p)
            den = frobenius_power(comp.den, self.p)
            term = RationalFunction(num * Polynomial([0] * i + [1], self.p), den)
            total = term if total is None else total + term
        return total


def frobenius_power(poly: Polynomial, p: int) -> Polynomial:
    """poly^p over F_p: coefficients are fixed, exponents multiply by p."""
    out = [0] * (p * poly.degree + 1) if not poly.is_zero() else []
    for q, c in enumerate(poly.coeffs):
        out[p * q] = c
    return Polynomial(out, p)


def poly_components(poly: Polynomial, p: int) -> list[Polynomial]:
    """The p polynomials u_i with poly = sum u_i^p x^i (coefficient regrouping)."""
    comps = [[] for _ in range(p)]
    for n, c in enumerate(poly.coeffs):
        q, i = divmod(n, p)
        while len(comps[i]) <= q:
            comps[i].append(0)
        comps[i][q] = c
    return [Polynomial(cs, p) for cs in comps]


def p_decompose(u: RationalFunction | Polynomial, p: int) -> PBasisDecomposition:
    """Unique p-basis decomposition of a rational function over F_p."""
    require_prime(p)
    if isinstance(u, Polynomial):
        u = RationalFunction(u)
    if u.modulus != p:
        raise ValueError("u must be defined over F_p")
    # u = n/d = (n d^(p-1)) / d^p; the numerator decomposes coefficientwise
    n_star = u.num * u.den ** (p - 1)
    comps = [RationalFunction(c, u.den) for c in poly_components(n_star, p)]
    return PBasisDecomposition(p, tuple(comps))


@dataclass(frozen=True)
class FirstOrderOperator:
    """Gamma(phi) = a1 * phi' + a0 * phi with polynomial coefficients."""

    a1: Polynomial
    a0: Polynomial

    @property
    def modulus(self):
        return self.a1.modulus

    def apply_poly(self, phi: Polynomial) -> Polynomial:
        return self.a1 * phi.derivative() + self.a0 * phi

    def apply_series(self, f: TruncatedSeries) -> TruncatedSeries:
        n = f.precision
        a1 = self.a1.as_series(n - 1)
        a0 = self.a0.as_series(n - 1)
        return a1 * f.derivative() + a0 * f.truncate(n - 1)


def main_operator(p: int | None = None) -> FirstOrderOperator:
    """A(x) d/dx - B(x), the operator annihilating the main generating function."""
    return FirstOrderOperator(Polynomial(A_COEFFS, p), -1 * Polynomial(B_COEFFS, p))


def clear_denominator(
    op: FirstOrderOperator, rhs: Polynomial, den: Polynomial
) -> tuple[FirstOrderOperator, Polynomial]:
    """Substitute phi = psi / den and clear: solutions with a declared
    denominator (powers of x, 1 + 2x, Q, ...) become polynomial searches.

    Gamma(psi/den) = u is equivalent to
    (a1 den) psi' + (a0 den - a1 den') psi = u den^2.
    """
    a1 = op.a1 * den
    a0 = op.a0 * den - op.a1 * den.derivative()
    return FirstOrderOperator(a1, a0), rhs * den * den


def polynomial_solution_search(p: int, degree_bound: int) -> Polynomial | None:
    """Minimal-degree nonzero polynomial solution of the main equation mod p,
    normalized monic, or None below the bound."""
    from .cartier import require_good_prime

    require_good_prime(p)
    op = main_operator(p)
    for d in range(1, degree_bound + 1):
        basis = _nullspace(op, d, p)
        if basis:
            vec = min(basis, key=lambda v: max(i for i, c in enumerate(v) if c))
            return Polynomial(vec, p).monic()
    return None


def solution_space_dimension(p: int, degree_bound: int) -> int:
    """Dimension of {phi : Gamma(phi) = 0, deg phi <= degree_bound} over F_p."""
    op = main_operator(p)
    return len(_nullspace(op, degree_bound, p))


def _nullspace(op: FirstOrderOperator, degree_bound: int, p: int) -> list[list[int]]:
    ncols = degree_bound + 1
    max_deg = degree_bound + max(op.a1.degree - 1, op.a0.degree, 0) + 1
    rows = [[0] * ncols for _ in range(max_deg + 1)]
    for k in range(ncols):
        mono = Polynomial([0] * k + [1], p)
        img = op.apply_poly(mono)
        for d, c in enumerate(img.coeffs):
            rows[d][k] = c
    return kernel_mod(rows, p)


@dataclass
class DescentResult:
    phi: Polynomial
    components: tuple[Polynomial, ...]
    agreement: int  # series coefficients matched by phi


def descend_series_solution(
    op: FirstOrderOperator,
    rhs: Polynomial,
    series: TruncatedSeries,
    p: int,
    degree_bound: int,
    match_order: int | None = None,
) -> DescentResult:
    """Recover a polynomial solution of Gamma(phi) = rhs from a series solution.

    The p x p system over F_p(x) from the p-basis decomposition is assembled
    with the components b_i sought as polynomials (deg phi <= degree_bound);
    the first ``match_order`` series coefficients pin the solution (default:
    one block, min(p, precision)).  Raises DescentError when inconsistent.
    """
    require_prime(p)
    if series.modulus != p or op.modulus != p or rhs.modulus != p:
        raise ValueError("operator, rhs and series must live over F_p")
    if match_order is None:
        match_order = min(p, series.precision)
    match_order = min(match_order, series.precision)

    a1_comp = poly_components(op.a1, p)
    a0_comp = poly_components(op.a0, p)
    u_comp = poly_components(rhs, p)

    # unknown layout: b_i has degree <= db_i; column (i, q) -> b_i[q]
    db = [(degree_bound - i) // p for i in range(p)]
    col_of = {}
    for i in range(p):
        for q in range(db[i] + 1):
            col_of[(i, q)] = len(col_of)
    ncols = len(col_of)

    eq_rows: list[list[int]] = []
    eq_rhs: list[int] = []

    # the r-th component identity: sum_{i,j} [i A1_j b_i x^s | from a1]
    #   + sum_{i,j} [A0_j b_i x^s | from a0] = U_r
    max_shift = (2 * p + max(op.a1.degree, op.a0.degree)) // p + 2
    comp_deg = max((c.degree for c in a1_comp + a0_comp), default=0)
    for r in range(p):
        deg_r = max(db) + max(comp_deg, 0) + max_shift + 2
        rows_r = [[0] * ncols for _ in range(deg_r + 1)]
        rhs_r = [0] * (deg_r + 1)
        for d, c in enumerate(u_comp[r].coeffs):
            rhs_r[d] = c
        for i in range(p):
            for j, aj in enumerate(a1_comp):
                if aj.is_zero() or i == 0:
                    continue
                e = i - 1 + j
                if e % p != r:
                    continue
                s = (e - r) // p
                for dc, cc in enumerate(aj.coeffs):
                    if not cc:
                        continue
                    for q in range(db[i] + 1):
                        rows_r[dc + s + q][col_of[(i, q)]] = (
                            rows_r[dc + s + q][col_of[(i, q)]] + i * cc
                        ) % p
            for j, aj in enumerate(a0_comp):
                if aj.is_zero():
                    continue
                e = i + j
                if e % p != r:
                    continue
                s = (e - r) // p
                for dc, cc in enumerate(aj.coeffs):
                    if not cc:
                        continue
                    for q in range(db[i] + 1):
                        rows_r[dc + s + q][col_of[(i, q)]] = (
                            rows_r[dc + s + q][col_of[(i, q)]] + cc
                        ) % p
        eq_rows.extend(rows_r)
        eq_rhs.extend(rhs_r)

    # series assignments: phi_n = b_{n mod p}[n div p]
    for n in range(match_order):
        q, i = divmod(n, p)
        row = [0] * ncols
        want = series.coeffs[n]
        if (i, q) in col_of:
            row[col_of[(i, q)]] = 1
        elif want == 0:
            continue
        eq_rows.append(row)
        eq_rhs.append(want)

    sol = solve_affine_mod(eq_rows, eq_rhs, p)
    if sol is None:
        raise DescentError("p-basis system inconsistent under the degree bound")

    comps = []
    for i in range(p):
        comps.append(Polynomial([sol[col_of[(i, q)]] for q in range(db[i] + 1)], p))
    phi = Polynomial([], p)
    for i, b in enumerate(comps):
        phi = phi + frobenius_power(b, p) * Polynomial([0] * i + [1], p)
    if op.apply_poly(phi) != rhs:
        raise DescentError("reconstructed polynomial does not solve the equation")

    agreement = 0
    for n in range(series.precision):
        if phi[n] == series.coeffs[n]:
            agreement += 1
        else:
            break
    return DescentResult(phi, tuple(comps), agreement)
