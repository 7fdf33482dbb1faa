import random

import pytest

from curveseq.cartier import poly_pow_mod
from curveseq.curve import s_series
from curveseq.descent import (
    DescentError,
    FirstOrderOperator,
    descend_series_solution,
    frobenius_power,
    main_operator,
    p_decompose,
    poly_components,
    polynomial_solution_search,
    solution_space_dimension,
)
from curveseq.polyring import Polynomial, RationalFunction
from curveseq.series import TruncatedSeries


def known_polynomial_solution(p: int) -> Polynomial:
    """x(2x+1) Q(x)^((p-1)/2) over F_p, of degree 2p."""
    return Polynomial([0, 1, 2], p) * Polynomial(poly_pow_mod([4, 0, 1, 2, 1], (p - 1) // 2, p), p)


def test_p_decompose_monomial():
    d = p_decompose(Polynomial([0, 0, 0, 0, 0, 1], 3), 3)  # x^5 = (x)^3 x^2
    assert d.components[2] == RationalFunction(Polynomial([0, 1], 3))
    assert d.components[0].is_zero() and d.components[1].is_zero()


def test_p_decompose_constant():
    d = p_decompose(Polynomial([2], 5), 5)
    assert d.components[0] == RationalFunction(Polynomial([2], 5))
    assert d.recombine() == RationalFunction(Polynomial([2], 5))


def test_p_decompose_rational_roundtrip_random():
    rng = random.Random(6)
    for p in (3, 5, 7):
        for _ in range(67):
            num = Polynomial([rng.randrange(p) for _ in range(5)], p)
            den = Polynomial([rng.randrange(p) for _ in range(3)] + [1], p)
            if num.is_zero():
                num = Polynomial([1], p)
            u = RationalFunction(num, den)
            assert p_decompose(u, p).recombine() == u


def test_poly_components_recombine():
    p = 5
    poly = Polynomial(list(range(1, 14)), p)
    comps = poly_components(poly, p)
    total = Polynomial([], p)
    for i, c in enumerate(comps):
        total = total + frobenius_power(c, p) * Polynomial([0] * i + [1], p)
    assert total == poly


def test_polynomial_solution_search():
    for p in (3, 7):
        sol = polynomial_solution_search(p, 4 * p)
        assert sol is not None and sol.degree == 2 * p
        assert sol == known_polynomial_solution(p).monic()
    assert polynomial_solution_search(7, 10) is None


def test_solution_space_one_dimensional_below_2p():
    for p in (3, 7):
        assert solution_space_dimension(p, 2 * p) == 1
        assert solution_space_dimension(p, 2 * p - 1) == 0


def test_solution_space_is_kp_module():
    # multiplying a solution by x^p gives another solution; dimension over the
    # constant field F_p(x^p) stays <= the operator order (here 1): every
    # nullspace element is phi * (polynomial in x^p).  p must be a prime of
    # good reduction (at p = 5 the quartic degenerates and extra low-degree
    # solutions appear).
    p = 7
    op = main_operator(p)
    phi = known_polynomial_solution(p)
    assert op.apply_poly(phi).is_zero()
    shifted = phi * Polynomial([0] * p + [1], p)
    assert op.apply_poly(shifted).is_zero()
    from curveseq.descent import _nullspace

    for vec in _nullspace(op, 4 * p, p):
        candidate = Polynomial(vec, p)
        q, r = candidate.divmod(phi)
        assert r.is_zero()
        assert all(c == 0 for i, c in enumerate(q.coeffs) if i % p)


def test_descend_simple_integration():
    op = FirstOrderOperator(Polynomial([1], 5), Polynomial([], 5))
    res = descend_series_solution(op, Polynomial([0, 2], 5), TruncatedSeries([0, 0, 1], 3, 5), 5, 6)
    assert res.phi == Polynomial([0, 0, 1], 5)


def test_descend_obstructed_rhs():
    op = FirstOrderOperator(Polynomial([1], 5), Polynomial([], 5))
    with pytest.raises(DescentError):
        descend_series_solution(op, Polynomial([0, 0, 0, 0, 1], 5), TruncatedSeries([0] * 8, 8, 5), 5, 12)


def test_descend_recovers_curve_polynomial():
    for p in (3, 7, 11):
        sbar = s_series(3 * p + 2, modulus=p)
        op = main_operator(p)
        assert op.apply_series(sbar).is_zero()
        res = descend_series_solution(op, Polynomial([], p), sbar, p, 2 * p)
        assert res.phi == known_polynomial_solution(p)
        assert res.agreement >= 2 * p + 1


def test_descend_with_declared_denominator():
    # Gamma = (1-x)^2 d/dx, u = 1: the series solution 1 + x + x^2 + ... is the
    # rational function 1/(1-x); searching psi = phi (1-x) finds psi = 1
    from curveseq.descent import clear_denominator

    p = 5
    den = Polynomial([1, -1], p)
    op = FirstOrderOperator(den * den, Polynomial([], p))
    rhs = Polynomial([1], p)
    geometric = TruncatedSeries([1] * 12, 12, p)
    assert op.apply_series(geometric) == Polynomial([1], p).as_series(11)
    op2, rhs2 = clear_denominator(op, rhs, den)
    psi_series = geometric * den.as_series(12)  # = 1
    res = descend_series_solution(op2, rhs2, psi_series, p, 6)
    assert res.phi == Polynomial([1], p)


def test_descend_agreement_is_shared_precision():
    # beyond 2p the series and the degree-2p polynomial must part ways
    p = 7
    sbar = s_series(4 * p, modulus=p)
    res = descend_series_solution(main_operator(p), Polynomial([], p), sbar, p, 2 * p)
    assert res.agreement < 4 * p
