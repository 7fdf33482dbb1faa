import random

import numpy as np
import pytest

from curveseq.linalg import rank_mod
from curveseq.modpspace import (
    CONSTANT_BLOCK,
    HYPERPLANE_FORM,
    T2_BLOCK,
    cartier_form,
    compute_vp,
    extendability_test,
    sigma_blocks,
    special_vector_mod,
    tail_vector_mod,
    union_check,
    vp_bruteforce,
    vp_bruteforce_literal,
    vp_bruteforce_mask,
    wp_witnesses,
    xi_form_modp,
    xi_obstruction_matrix,
)
from curveseq.recurrence import MAIN_RECURRENCE, extend_modp


def test_compute_vp_small_primes():
    for p in (7, 11):
        space = compute_vp(p)  # brute-validated by default
        assert space.dim == 2
        assert space.contains(space.basis[0]) and space.contains(space.basis[1])


def test_compute_vp_medium_primes_closed_form():
    for p in (17, 19, 23, 37, 101):
        space = compute_vp(p, brute_validate=(p <= 23))
        assert space.dim == 2


def test_literal_bruteforce_agrees():
    for p in (7, 11):
        assert vp_bruteforce_literal(p) == vp_bruteforce(p)


def test_bruteforce_stable_at_deeper_blocks():
    # the survivor set is already exact at depth 2p+2; deeper searches with
    # more free choices must not change it
    for p in (7, 11):
        base = vp_bruteforce_mask(p, blocks=2)
        deeper = vp_bruteforce_mask(p, blocks=4)
        assert np.array_equal(base, deeper)


def test_excluded_primes_raise():
    for p in (2, 3, 5, 13):
        with pytest.raises(ValueError):
            compute_vp(p)


def test_p3_empirical_dimension_reported():
    # open question: at p = 3 the survivor space is 3-dimensional (the two
    # defining vectors collapse mod 3); computed, not asserted by the theory
    survivors = vp_bruteforce(3, blocks=4)
    assert len(survivors) == 27


def test_defining_forms_independent():
    for p in (7, 11, 17, 19, 23, 29, 31, 41, 97):
        rows = [list(HYPERPLANE_FORM), list(T2_BLOCK), list(CONSTANT_BLOCK)]
        assert rank_mod(rows, p) == 3
    # and they collapse mod 3 (the reason 3 is excluded)
    assert rank_mod([list(HYPERPLANE_FORM), list(T2_BLOCK), list(CONSTANT_BLOCK)], 3) < 3


def test_sigma_blocks_p7():
    blocks = sigma_blocks(7, 3)
    assert blocks.blocks[0] == (1, 2, 6, 3, 0, 0)
    assert blocks.tails_satisfy
    assert blocks.first_two_independent


def test_sigma_blocks_p11():
    assert sigma_blocks(11, 2).first_two_independent


def test_extendability_fixtures():
    r = extendability_test((1, 2, 6, 3), 7)
    assert r.extendable and r.agree
    r = extendability_test((0, 0, 0, 1), 7)
    assert not r.extendable and r.agree and r.witness_m is not None and r.witness_m <= 8
    r = extendability_test(tail_vector_mod(11), 11)
    assert r.extendable and r.agree


def test_method_agreement_full_f7_f11():
    # routes (a) and (b) agree on all of F_p^4 for p = 7, 11: compare the
    # closed-form membership mask with the series obstruction mask
    from curveseq.modpspace import _membership_mask

    for p in (7, 11):
        obstruction = xi_obstruction_matrix(p)
        forms = [list(HYPERPLANE_FORM), cartier_form(p)]
        closed = _membership_mask(p, forms)
        series = _membership_mask(p, obstruction)
        assert np.array_equal(closed, series)
        assert int(closed.sum()) == p * p


def test_method_agreement_random_vectors_larger_primes():
    # 500 random vectors spread over primes up to 101
    rng = random.Random(13)
    for p in (17, 29, 53, 101):
        obstruction = xi_obstruction_matrix(p)
        forms = [list(HYPERPLANE_FORM), cartier_form(p)]
        for _ in range(125):
            v = [rng.randrange(p) for _ in range(4)]
            closed = all(sum(a * b for a, b in zip(row, v)) % p == 0 for row in forms)
            series = all(sum(a * b for a, b in zip(row, v)) % p == 0 for row in obstruction)
            assert closed == series, (p, v)


def test_union_check():
    for p in (7, 11):
        rep = union_check(p)
        assert rep.equivalence_holds and rep.checked == p * p


def test_union_check_sampled_large_prime():
    rep = union_check(41, sample=40, seed=5)
    assert rep.equivalence_holds and rep.checked == 40


def test_union_degenerates_at_37():
    """p = 37 is a sporadic prime where the C_p = C_1 test loses its force:
    c_38 = c_74 = 2 mod 37, so the linear functional C_p - C_1 kills all of
    V_37 and non-proportional members pass the test too.  (Only such prime
    below 1050.)"""
    from curveseq.exactnum import reduce_fraction_mod
    from curveseq.modpspace import union_functional_degenerate
    from curveseq.recurrence import main_sequence

    c = main_sequence(80)
    assert reduce_fraction_mod(c[38], 37) == reduce_fraction_mod(c[74], 37) == 2
    assert union_functional_degenerate(37)
    rep = union_check(37, sample=60, seed=5)
    assert not rep.equivalence_holds
    assert rep.degenerate is True
    v = rep.counterexample
    # the counterexample really is a member with C_37 = C_1, not proportional
    sol = extend_modp(MAIN_RECURRENCE, (0, *v), 37, 38)
    assert sol.ok and sol.values[37] == v[0]
    # and none of 7..31 nor 41..101 degenerate, so the required primes stand
    for p in (7, 11, 17, 19, 23, 29, 31, 41, 43, 101):
        assert not union_functional_degenerate(p), p


def test_union_counterexample_at_37_from_first_principles():
    """Machinery-independent witness for the p = 37 degeneracy: the sequence
    u_n = 16 c_n + 22 c_{37+n} (mod 37) is a sum of two honest solutions
    (the reduced main sequence and its block-37 tail), satisfies every window,
    projects to the non-proportional vector (23, 13, 13, 31), and still has
    u_37 = u_1."""
    from curveseq.exactnum import reduce_fraction_mod
    from curveseq.modpspace import special_vector_mod
    from curveseq.recurrence import main_sequence

    p = 37
    c = main_sequence(6 * p)
    cbar = [reduce_fraction_mod(x, p) for x in c]
    u = [(16 * cbar[n] + 22 * cbar[p + n]) % p for n in range(5 * p)]
    assert MAIN_RECURRENCE.satisfies(u, modulus=p)
    v = tuple(u[1:5])
    assert v == (23, 13, 13, 31)
    s = special_vector_mod(p)
    lam = v[0]
    assert any((lam * si - vi) % p for si, vi in zip(s, v))  # not proportional
    assert u[p] == u[1]


def test_union_tail_vector_breaks_cp_equals_c1():
    # the second basis vector is not proportional, so C_p != C_1 on it
    p = 7
    tail = tail_vector_mod(p)
    sol = extend_modp(MAIN_RECURRENCE, (0, *tail), p, p + 1)
    assert sol.ok
    assert sol.values[p] != tail[0]


def test_union_scalar_multiples_of_special():
    p = 7
    special = special_vector_mod(p)
    for lam in range(p):
        v = tuple(lam * x % p for x in special)
        sol = extend_modp(MAIN_RECURRENCE, (0, *v), p, p + 1)
        assert sol.ok and sol.values[p] == v[0]


def test_wp_witnesses():
    seqs = wp_witnesses(7, 3)
    assert len(seqs) == 3
    assert seqs[0][1] == 1  # the reduced main sequence
    assert all(v == 0 for v in seqs[1][:7])
    seqs2 = wp_witnesses(2, 4)
    assert all(MAIN_RECURRENCE.satisfies(w, modulus=2) for w in seqs2)


def test_corollary_finitely_many_integral_primes():
    # for data off the hyperplane, every good prime 7 <= p <= 31 sees a
    # non-p-integral term by index 8p
    from curveseq.exactnum import padic_valuation
    from curveseq.recurrence import InitialData, extend_rational

    init = InitialData.of(0, 0, 0, 0, 1)
    seq = extend_rational(MAIN_RECURRENCE, init, 8 * 31 + 1)
    for p in (7, 11, 17, 19, 23, 29, 31):
        witness = next(
            (n for n in range(len(seq)) if padic_valuation(seq[n], p) < 0), None
        )
        assert witness is not None and witness <= 8 * p, p
