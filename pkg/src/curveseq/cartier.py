"""The Cartier operator on series and on the reduced curve mod p.

On a series field F_p((x)) the operator sends (sum u_n x^n) dx to
(sum over n = -1 mod p of u_n x^((n+1)/p - 1)) dx; the p-th root on F_p
coefficients is the identity.  A form is exact iff its image vanishes (C1)
and logarithmically exact iff it is fixed (C2).  Both properties are decided
here through finitely many expansion coefficients, the number of which is
controlled by the pole divisor of the form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .curve import (
    BAD_PRIMES,
    CurveForm,
    CurveFunction,
    Place,
    eta,
    expand_form,
    finite_place,
    infinity_place,
    omega,
    origin_place,
    q_polynomial,
)
from .exactnum import ModInt, QuadExt, require_prime, sqrt_mod
from .polyring import Polynomial, RationalFunction
from .series import LaurentSeries, TruncatedSeries


def cartier_series(g: TruncatedSeries, p: int) -> TruncatedSeries:
    """C(g dx) = h dx on F_p[[x]]: h_m = g_{p(m+1)-1}; precision floor(N/p)."""
    require_prime(p)
    if g.modulus != p:
        raise ValueError("series must live over F_p")
    n_out = g.precision // p
    return TruncatedSeries([g.coeffs[p * (m + 1) - 1] for m in range(n_out)], n_out, p)


def cartier_laurent(w: LaurentSeries, p: int) -> LaurentSeries:
    """The same coefficient picking on a Laurent expansion w(t) dt."""
    e_min = w.offset
    f_min = -((-(e_min + 1)) // p) - 1  # smallest f with p(f+1)-1 >= e_min
    f_bound = w.bound // p  # exclusive: needs p(f+1)-1 < bound
    coeffs = []
    for f in range(f_min, f_bound):
        coeffs.append(w.coefficient(p * (f + 1) - 1))
    n = max(f_bound - f_min, 0)
    series = TruncatedSeries(coeffs[:n], n, w.modulus)
    return LaurentSeries(f_min, series)


def require_good_prime(p: int) -> int:
    require_prime(p)
    if p in BAD_PRIMES:
        raise ValueError(f"p = {p} is a prime of bad reduction")
    return p


def pole_degree_bound(form: CurveForm) -> int:
    """Upper bound for -sum of the negative orders of the form (= of g, since
    omega is everywhere regular and every place above a finite x is at most
    double)."""
    u, v = form.g.u, form.g.v
    finite = 2 * max(u.den.degree, 0) + 2 * max(v.den.degree, 0)
    inf_u = u.num.degree - u.den.degree if not u.is_zero() else -1
    inf_v = v.num.degree - v.den.degree + 2 if not v.is_zero() else -1
    infinite = 2 * max(0, inf_u, inf_v)
    return finite + infinite


def exactness_scan_bound(form: CurveForm) -> int:
    """Blocks to scan: pole degree + (2g - 2) + deg x + N_x = poles + 4."""
    return pole_degree_bound(form) + 4


@dataclass(frozen=True)
class ExactnessResult:
    exact: bool
    witness_m: int | None
    bound: int


def _origin_expansion_of(form: CurveForm, p: int, needed_bound: int) -> LaurentSeries:
    slack = 4 * (
        form.g.u.num.degree
        + form.g.u.den.degree
        + form.g.v.num.degree
        + form.g.v.den.degree
        + 6
    )
    place = origin_place(+1, needed_bound + slack, p)
    return expand_form(form, place, slack=slack // 2)


def exactness_test(form: CurveForm, p: int) -> ExactnessResult:
    """Decide whether the reduced form is exact (= killed by Cartier).

    The image C(form)/omega is a function h with at most B + 4 poles, where
    B bounds the form's own pole degree.  If h's expansion at (0, 2) vanishes
    on every exponent from its valuation floor through B + 4, then h would
    have more zeros than poles, so h = 0 and the form is exact (C1).
    """
    require_good_prime(p)
    if form.modulus != p:
        raise ValueError("form must be reduced mod p")
    blocks = exactness_scan_bound(form)
    w = _origin_expansion_of(form, p, p * (blocks + 3) + p)
    c = cartier_laurent(w, p)
    f0 = min(c.offset, 0)
    if c.bound <= blocks:
        raise ValueError("insufficient expansion precision for exactness decision")
    for f in range(f0, blocks + 1):
        if c.coefficient(f):
            return ExactnessResult(False, f + 1, blocks)
    return ExactnessResult(True, None, blocks)


def exact_in_series_field(w: TruncatedSeries, p: int) -> bool:
    """w dx exact in F_p((x)): every known coefficient of x^(mp-1) vanishes.

    This is the plain series-field criterion (no curve, any prime); it checks
    the available coefficients and leaves degree-bound reasoning to callers.
    """
    require_prime(p)
    if w.modulus != p:
        raise ValueError("series must live over F_p")
    return cartier_series(w, p).is_zero()


def log_exact_in_series_field(w: TruncatedSeries, p: int) -> bool:
    """w dx fixed by Cartier in F_p((x)), on the available coefficients."""
    require_prime(p)
    if w.modulus != p:
        raise ValueError("series must live over F_p")
    img = cartier_series(w, p)
    return img.coeffs == w.coeffs[: img.precision]


def log_exactness_test(form: CurveForm, p: int) -> bool:
    """C(form) = form iff the form is d(phi)/phi for some function phi (C2)."""
    require_good_prime(p)
    if form.modulus != p:
        raise ValueError("form must be reduced mod p")
    # (C(form) - form)/omega has at most 2B + 4 poles; vanishing from the
    # valuation floor through that budget forces it to be zero
    budget = 2 * pole_degree_bound(form) + 4
    w = _origin_expansion_of(form, p, p * (budget + 4) + p)
    c = cartier_laurent(w, p)
    e0 = min(w.offset, c.offset, 0)
    if min(w.bound, c.bound) <= budget:
        raise ValueError("insufficient precision for log-exactness decision")
    for e in range(e0, budget + 1):
        if w.coefficient(e) != c.coefficient(e):
            return False
    return True


# -- alpha / beta invariants ---------------------------------------------------


@dataclass(frozen=True)
class CartierInvariants:
    """C(omega) = alpha * omega and C(eta) = beta * omega on the reduced curve."""

    p: int
    alpha: ModInt
    beta: ModInt
    model: str

    @property
    def both_zero(self) -> bool:
        return not self.alpha and not self.beta


def poly_pow_mod(coeffs: list[int], e: int, p: int) -> list[int]:
    """Coefficients of f^e mod p (numpy convolution, exact in int64)."""
    result = np.array([1], dtype=np.int64)
    base = np.array([c % p for c in coeffs], dtype=np.int64)
    while e:
        if e & 1:
            result = np.convolve(result, base) % p
        e >>= 1
        if e:
            base = np.convolve(base, base) % p
    return [int(v) for v in result]


def alphabeta_weierstrass(f_coeffs, p: int) -> CartierInvariants:
    """Invariants for y^2 = f(x), f a monic cubic nonsingular mod p:
    alpha = [x^(p-1)] f^((p-1)/2) (the Hasse invariant),
    beta  = [x^(p-2)] f^((p-1)/2) (from eta = x omega)."""
    require_prime(p)
    if p < 5:
        raise ValueError("p >= 5 required for a cubic Weierstrass model")
    coeffs = [c % p for c in f_coeffs]
    if len(coeffs) != 4 or coeffs[3] != 1:
        raise ValueError("need a monic cubic")
    fpoly = Polynomial(coeffs, p)
    if fpoly.gcd(fpoly.derivative()).degree != 0:
        raise ValueError("singular reduction: f has a repeated root mod p")
    power = poly_pow_mod(coeffs, (p - 1) // 2, p)
    alpha = power[p - 1] if p - 1 < len(power) else 0
    beta = power[p - 2] if p - 2 < len(power) else 0
    return CartierInvariants(p, ModInt(alpha, p), ModInt(beta, p), "weierstrass")


def alphabeta_quartic(p: int, cross_check: bool = False) -> CartierInvariants:
    """Invariants of the fixed quartic curve y^2 = Q(x):
    alpha' = [x^(p-1)] Q^((p-1)/2), beta' = [x^(p-1)] (x^2+x) Q^((p-1)/2).

    The coefficient of x^(2p-1) in (x^2+x) Q^((p-1)/2) must vanish (it is the
    regularity of C(eta) at infinity) and is asserted.
    """
    require_good_prime(p)
    power = poly_pow_mod(list(q_polynomial().coeffs), (p - 1) // 2, p)
    shifted = np.convolve(np.array([0, 1, 1], dtype=np.int64), np.array(power, dtype=np.int64)) % p
    alpha = power[p - 1] if p - 1 < len(power) else 0
    beta = int(shifted[p - 1]) if p - 1 < len(shifted) else 0
    sanity = int(shifted[2 * p - 1]) if 2 * p - 1 < len(shifted) else 0
    if sanity != 0:
        raise AssertionError(f"[x^(2p-1)] (x^2+x) Q^((p-1)/2) = {sanity} != 0 at p = {p}")
    inv = CartierInvariants(p, ModInt(alpha, p), ModInt(beta, p), "quartic-E")
    if cross_check:
        _cross_check_quartic(inv)
    return inv


def _cross_check_quartic(inv: CartierInvariants, n_coeffs: int = 60):
    """Compare the polynomial route with cartier_series on (0,2)-expansions."""
    p = inv.p
    n = p * (n_coeffs + 1) + 1
    place = origin_place(+1, n + 8, p)
    w_omega = expand_form(omega(p), place)
    w_eta = expand_form(eta(p), place)
    base = TruncatedSeries([w_omega.coefficient(k) for k in range(n)], n, p)
    for form_w, scalar in ((w_omega, inv.alpha.value), (w_eta, inv.beta.value)):
        series = TruncatedSeries([form_w.coefficient(k) for k in range(n)], n, p)
        img = cartier_series(series, p)
        want = base.truncate(img.precision).scale(scalar)
        if img.coeffs[:n_coeffs] != want.coeffs[:n_coeffs]:
            raise AssertionError(f"cartier_series route disagrees at p = {p}")


# -- Legendre-form Hasse identities ------------------------------------------------


@dataclass(frozen=True)
class LegendreHasseData:
    p: int
    lam0: ModInt
    m: int
    h_m: ModInt
    h_m1: ModInt
    k_m: ModInt
    derivative_identity: bool
    ode_identity: bool


def _h_polynomials(p: int) -> list[Polynomial]:
    """H_i(lambda) from (x-1)^m (x-lambda)^m = sum_i H_i(lambda) x^i."""
    m = (p - 1) // 2
    import math as _math

    # (x-1)^m: constants; (x-lambda)^m: x^(m-j) carries (-lambda)^j
    a = [(_math.comb(m, k) * (-1) ** (m - k)) % p for k in range(m + 1)]  # coeff of x^k
    b = []  # b[j] = lambda-poly coefficient of x^j in (x-lambda)^m
    for j in range(m + 1):
        coeffs = [0] * (m - j) + [(_math.comb(m, m - j) * (-1) ** (m - j)) % p]
        b.append(Polynomial(coeffs, p))
    out = [Polynomial([], p) for _ in range(2 * m + 1)]
    for k, ak in enumerate(a):
        if not ak:
            continue
        for j in range(m + 1):
            out[k + j] = out[k + j] + b[j] * ak
    return out


def legendre_hasse(lam0: int, p: int, rng: random.Random | None = None) -> LegendreHasseData:
    """H_m, H_{m-1}, K_m at lambda_0 plus the two exact polynomial identities:
    K_i' = -(m+1) H_i and the hypergeometric equation for
    F(z) = sum_k C(m,k) C(m+1,k) z^k."""
    require_prime(p)
    if p < 5:
        raise ValueError("p >= 5 required")
    lam0 %= p
    if lam0 in (0, 1):
        raise ValueError("lambda_0 must avoid 0 and 1")
    m = (p - 1) // 2
    h = _h_polynomials(p)
    lam = Polynomial([0, 1], p)

    deriv_ok = True
    for i in range(2 * m + 1):
        h_prev = h[i - 1] if i >= 1 else Polynomial([], p)
        k_i = h_prev - lam * h[i]
        if k_i.derivative() != h[i] * (-(m + 1) % p):
            deriv_ok = False
            break
    if deriv_ok and rng is not None:
        k_m_poly = h[m - 1] - lam * h[m]
        for _ in range(20):
            v = rng.randrange(p)
            if k_m_poly.derivative()(v) != (-(m + 1)) * h[m](v) % p:
                deriv_ok = False
                break

    import math as _math

    f_poly = Polynomial([_math.comb(m, k) * _math.comb(m + 1, k) % p for k in range(m + 1)], p)
    z = Polynomial([0, 1], p)
    ode = (
        z * (1 - z) * f_poly.derivative().derivative()
        + (1 + 2 * m * z) * f_poly.derivative()
        - m * (m + 1) * f_poly
    )
    ode_ok = ode.is_zero()

    h_m = ModInt(h[m](lam0), p)
    h_m1 = ModInt(h[m - 1](lam0), p)
    k_m = ModInt((h[m - 1] - lam * h[m])(lam0), p)
    if not h_m and not h_m1:
        raise AssertionError(f"H_m and H_(m-1) both vanish at lambda_0 = {lam0}, p = {p}")
    return LegendreHasseData(p, ModInt(lam0, p), m, h_m, h_m1, k_m, deriv_ok, ode_ok)


# -- residues and pole bounds ------------------------------------------------------


def half_pole_place(p: int, sign: int, precision: int = 32) -> Place:
    """A place above x = -1/2 on the reduced curve (where t = 1 + 2x vanishes);
    defined over F_p(sqrt(65)), which may be F_p or the quadratic extension."""
    require_good_prime(p)
    x0_int = -pow(2, -1, p) % p
    root65 = sqrt_mod(65 % p, p)
    if root65 is not None:
        inv4 = pow(4, -1, p)
        x0 = ModInt(x0_int, p)
        y0 = ModInt(sign * root65 * inv4, p)
    else:
        x0 = QuadExt(x0_int, 0, p, 65)
        y0 = QuadExt(0, sign * pow(4, -1, p), p, 65)
    return finite_place(x0, y0, precision, label=f"t=0({'+' if sign > 0 else '-'})")


def residue_check(form: CurveForm, p: int, precision: int = 48) -> dict[str, object]:
    """Residues of the reduced form at the places above x = -1/2 and at both
    points at infinity."""
    require_good_prime(p)
    if form.modulus != p:
        raise ValueError("form must be reduced mod p")
    out = {}
    for sign in (+1, -1):
        place = half_pole_place(p, sign, precision)
        out[place.name] = expand_form(form, place).residue()
    for sign in (+1, -1):
        place = infinity_place(sign, precision, p)
        out[place.name] = expand_form(form, place).residue()
    return out


@dataclass(frozen=True)
class PoleBoundRow:
    place: str
    v_form: int | None
    v_image: int | None
    bound: int | None
    ok: bool


def pole_bound_check(form: CurveForm, p: int, precision: int = 64) -> list[PoleBoundRow]:
    """v(C(form)) >= ceil((v(form)+1)/p) - 1 at the inspected places, plus the
    degree comparison sum_{v<0} v(C(form)) >= sum_{v<0} v(form) over them.

    Inspected places: (0, +-2), inf+-, and the two places above x = -1/2;
    fixtures are chosen with all their poles among these.
    """
    require_good_prime(p)
    places = [
        origin_place(+1, precision, p),
        origin_place(-1, precision, p),
        infinity_place(+1, precision, p),
        infinity_place(-1, precision, p),
        half_pole_place(p, +1, precision),
        half_pole_place(p, -1, precision),
    ]
    rows = []
    for place in places:
        w = expand_form(form, place)
        v = w.valuation()
        c = cartier_laurent(w, p)
        vc = c.valuation()
        if v is None:
            rows.append(PoleBoundRow(place.name, None, vc, None, vc is None or vc >= 0))
            continue
        bound = -((-(v + 1)) // p) - 1  # ceil((v+1)/p) - 1
        ok = vc is None or vc >= bound
        rows.append(PoleBoundRow(place.name, v, vc, bound, ok))
    neg_form = sum(r.v_form for r in rows if r.v_form is not None and r.v_form < 0)
    neg_image = sum(r.v_image for r in rows if r.v_image is not None and r.v_image < 0)
    degree_ok = neg_image >= neg_form
    rows.append(PoleBoundRow("degree-sum", neg_form, neg_image, neg_form, degree_ok))
    return rows


def reduce_form(form: CurveForm, p: int) -> CurveForm:
    """Reduction of a rational form mod p."""
    return CurveForm(
        CurveFunction(form.g.u.reduce_mod(p), form.g.v.reduce_mod(p))
    )


def x_shift_form(i: int, p: int) -> CurveForm:
    """2 x^(-i) t omega, whose Cartier image has coefficients c_{pn+i}."""
    t = Polynomial([2, 4], p)
    den = Polynomial([0] * i + [1], p)
    return CurveForm(CurveFunction.rational(RationalFunction(t, den), p))
