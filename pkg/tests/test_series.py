import numpy as np
import pytest

from laurentseries.coefficients import coefficients_dft
from laurentseries.errors import DomainError
from laurentseries.geometry import Polyannulus
from laurentseries.multiindex import box_points, box_size, sigma_inverse
from laurentseries.series import (box_partial_sum_error, index_set, net_cauchy_check, partial_sum,
                                  partial_sum_function, permuted_convergence_check, tail_seminorm_sum,
                                  term_seminorms, threshold_index)
from laurentseries.testfns import LaurentPolynomial, Rational2D, geometric, monomial

UNIT = Polyannulus.polydisc(1)
POLE = geometric(3)
POLE_TABLE = coefficients_dft(POLE, None, None, 40)


def test_partial_sum_examples():
    tab = coefficients_dft(monomial((1,), UNIT), None, None, 4)
    assert partial_sum(tab, [], (0.5,)) == 0
    assert partial_sum(tab, index_set([(1,)]), (0.5,)) == pytest.approx(0.5)
    assert partial_sum(tab, box_points(2, 1), (0.5,)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DomainError):
        partial_sum(tab, [(9,)], (0.5,))


def test_partial_sum_function_agrees_pointwise():
    S = box_points(10, 1)
    p = partial_sum_function(POLE_TABLE, S, UNIT)
    for z in (0.3, -0.9j, 0.5 + 0.5j):
        assert p.eval((z,)) == pytest.approx(partial_sum(POLE_TABLE, S, (z,)), abs=1e-15)


def test_single_monomial_tail_vanishes():
    f = monomial((2, -1), Polyannulus.annuli([0.5, 0.5], [2, 2]))
    tab = coefficients_dft(f, [1.0, 1.0], None, 3)
    prof = tail_seminorm_sum(tab, f.validity, 1)
    j = sigma_inverse((2, -1))
    assert prof.tail(j) < 1e-13 and prof.tail(j - 1) > 1


def test_geometric_terms_match_oracle():
    f = geometric(3)  # validity |z| < 2
    tab = coefficients_dft(f, None, None, 20)
    terms = term_seminorms(tab, f.validity, 0)
    for j in range(20):
        # table error is amplified by R^j = 2^j in the term
        assert abs(terms[sigma_inverse((j,))] - (2 / 3) ** j / 3) <= tab.error_bound((j,)) * 2**j


def test_tail_profile_invariants():
    prof = tail_seminorm_sum(POLE_TABLE, UNIT, 0)
    assert np.all(np.diff(prof.tails) <= 0) and np.all(prof.tails >= 0)
    assert np.all(np.diff(np.cumsum(prof.terms)) >= 0)
    assert prof.sandwich_ok and prof.sandwich_checked == box_size(40, 1) - 1
    # sigma index 40 is exponent 20: analytic tail sum_{21..40} 3^-(j+1)
    analytic = sum(3.0 ** -(j + 1) for j in range(21, 41))
    assert prof.tail(40) == pytest.approx(analytic, rel=1e-6)
    assert prof.tail(10**6) == 0.0
    assert prof.box_sum(1) == pytest.approx(1 / 3 + 1 / 9)


def test_sandwich_in_two_dimensions():
    f = Rational2D(4)
    tab = coefficients_dft(f, None, None, 12)
    for k in range(3):
        assert tail_seminorm_sum(tab, Polyannulus.polydisc(1, 1), k).sandwich_ok


def test_box_error_examples():
    P = Polyannulus.annuli([0.5], [2])
    f = LaurentPolynomial({(3,): 1.0, (-2,): 0.5}, P)
    tab = coefficients_dft(f, None, None, 4)
    assert box_partial_sum_error(f, tab, 4, P, 2).value < 1e-10
    errors = []
    for N in range(3, 15):
        e0 = box_partial_sum_error(POLE, POLE_TABLE, N, UNIT, 0).value
        e1 = box_partial_sum_error(POLE, POLE_TABLE, N, UNIT, 1).value
        assert e0 <= 3.0 ** -(N + 1) / 2 * (1 + 1e-9)
        assert e0 <= e1
        errors.append(e0)
    assert errors == sorted(errors, reverse=True)
    with pytest.raises(DomainError):
        box_partial_sum_error(POLE, POLE_TABLE, 41, UNIT, 0)


def test_threshold_index():
    terms = np.array([1.0, 0.5, 0.25, 0.125, 0.0])
    assert threshold_index(terms, 0.5) == 2  # tail after j=2 is 0.125 < 0.25


def test_net_cauchy_single_monomial():
    f = monomial((2,), UNIT)
    tab = coefficients_dft(f, [0.5], None, 6)
    res = net_cauchy_check(tab, UNIT, 0, 1e-6)
    assert res.n0 == sigma_inverse((2,))
    assert res.passed


def test_net_cauchy_geometric():
    res = net_cauchy_check(POLE_TABLE, UNIT, 0, 1e-6, measure=True)
    assert res.n0_shell == 12 and res.reachable
    assert 3.0 ** -13 / 2 < 5e-7 < 3.0 ** -12 / 2
    assert res.violations == 0 and res.measured_violations == 0 and res.passed
    assert res.verdict()["seed"] == 0


def test_net_cauchy_reproducible():
    a = net_cauchy_check(POLE_TABLE, UNIT, 0, 1e-6, seed=5)
    b = net_cauchy_check(POLE_TABLE, UNIT, 0, 1e-6, seed=5)
    assert a.verdict() == b.verdict()


def test_permutation_examples():
    ident = permuted_convergence_check(POLE_TABLE, UNIT, 0, trials=1, include_identity=True)
    assert ident.full_discrepancy == 0
    res = permuted_convergence_check(POLE_TABLE, UNIT, 0, trials=20, eps=1e-6)
    assert res.full_discrepancy < 1e-10
    assert res.limit_violations == 0 and res.pair_violations == 0 and res.passed
    assert res.max_limit_bound <= res.tail_n0 * (1 + 1e-12)


def test_permutation_handles_disc_zero_terms():
    # structural zeros on the disc axis must not poison the sums with 0 * inf
    res = permuted_convergence_check(POLE_TABLE, UNIT, 2, trials=3, eps=1e-6)
    assert np.isfinite(res.full_discrepancy) and res.full_discrepancy < 1e-10
