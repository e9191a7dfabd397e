import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentseries.errors import DomainError
from laurentseries.geometry import AxisRange, Polyannulus, sample_grid
from laurentseries.seminorms import (DerivativeSups, box_seminorm, ck_seminorm, lemma5_check,
                                     monomial_box_seminorm_exact, monomial_box_seminorms)
from laurentseries.testfns import LaurentPolynomial, builtin_suite, constant, geometric, monomial

UNIT = Polyannulus.polydisc(1)
BIDISC = Polyannulus.polydisc(1, 1)
RING = Polyannulus.annuli([0.5], [2])
SUITE = builtin_suite()


def test_ck_examples():
    assert ck_seminorm(constant(1, UNIT), UNIT, 5).value == pytest.approx(1)
    assert ck_seminorm(monomial((1,), UNIT), UNIT, 1).value == pytest.approx(1)
    assert ck_seminorm(monomial((2,), UNIT), UNIT, 2).value == pytest.approx(2)


def test_box_examples():
    f = geometric(3)
    for k in range(4):
        assert box_seminorm(f, f.validity, k).value == ck_seminorm(f, f.validity, k).value
    assert box_seminorm(monomial((1, 1), BIDISC), BIDISC, 1).value == pytest.approx(1)
    e = SUITE[10]
    assert box_seminorm(e, e.validity, 0).value == ck_seminorm(e, e.validity, 0).value


def test_report_carries_attaining_point():
    rep = box_seminorm(geometric(3), UNIT, 1)
    assert rep.gamma == (0,) and rep.shadow == pytest.approx((1.0,))
    assert rep.value == pytest.approx(1 / 2)  # 1/(3-z) at z = 1 beats 1/(3-z)^2
    rep = DerivativeSups(geometric(3), UNIT).report("box", 1, gammas=[(1,)])
    assert rep.gamma == (1,) and rep.value == pytest.approx(1 / 4)


def test_exact_examples():
    assert monomial_box_seminorm_exact(1, (2,), UNIT, 1) == 2
    assert monomial_box_seminorm_exact(1, (-1,), Polyannulus.annuli([0.5], [2]), 0) == 2
    assert monomial_box_seminorm_exact(0, (-1,), UNIT, 0) == 0
    with pytest.raises(DomainError):
        monomial_box_seminorm_exact(1, (-1,), UNIT, 0)


def test_vectorised_exact_matches_scalar():
    P = Polyannulus((AxisRange.disc(1.5), AxisRange(0.5, 2)))
    alphas = np.array([(a, b) for a in range(0, 6) for b in range(-5, 6)])
    coeffs = np.linspace(0.1, 2, len(alphas)) * np.exp(1j * np.arange(len(alphas)))
    for k in range(4):
        vec = monomial_box_seminorms(coeffs, alphas, P, k)
        ref = [monomial_box_seminorm_exact(c, a, P, k) for c, a in zip(coeffs, alphas)]
        assert np.allclose(vec, ref, rtol=1e-14, atol=0)
    with pytest.raises(DomainError):
        monomial_box_seminorms([1.0], [[-1, 0]], P, 0)
    assert monomial_box_seminorms([0.0], [[-1, 0]], P, 0)[0] == 0


@pytest.mark.parametrize("alpha", [(3,), (-2,), (5,), (0,)])
def test_exact_dominates_sampled_and_gap_closes(alpha):
    P = RING
    f = monomial(alpha, P)
    for k in range(3):
        exact = monomial_box_seminorm_exact(1, alpha, P, k)
        sampled = box_seminorm(f, P, k, res=64).value
        assert sampled <= exact * (1 + 1e-12)
        assert (exact - sampled) / exact < 1e-3


def test_refinement_never_decreases():
    for f in SUITE[:8]:
        values = [DerivativeSups(f, f.validity, r, a).box(2).value for r, a in [(5, 4), (9, 8), (17, 16)]]
        assert values == sorted(values)


@settings(max_examples=25, deadline=None)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), st.integers(0, 2))
def test_homogeneity_and_triangle_on_one_grid(lam, k):
    P = RING
    f = LaurentPolynomial({(2,): 1.0, (-1,): 0.5}, P)
    g = geometric(3, P)
    grid = sample_grid(P, 9, 8)
    nf = DerivativeSups(f, P, grid=grid).box(k).value
    ng = DerivativeSups(g, P, grid=grid).box(k).value
    nl = DerivativeSups(lam * f, P, grid=grid).box(k).value
    ns = DerivativeSups(f + g, P, grid=grid).box(k).value
    assert nl == pytest.approx(abs(lam) * nf, rel=1e-12, abs=1e-300)
    assert ns <= (nf + ng) * (1 + 1e-14)


@pytest.mark.parametrize("f", SUITE, ids=[f.name for f in SUITE])
def test_lemma5_sandwich(f):
    for k in range(3):
        r = lemma5_check(f, f.validity, k)
        assert r.ok == (True, True)
        if f.dim == 1:
            assert r.ck_k.value == r.box_k.value == r.ck_nk.value


def test_zero_function_seminorms():
    z = LaurentPolynomial({}, BIDISC)
    r = lemma5_check(z, BIDISC, 1)
    assert r.ok == (True, True) and r.box_k.value == 0


def test_region_must_lie_in_validity():
    with pytest.raises(DomainError):
        DerivativeSups(geometric(3), Polyannulus.polydisc(3))
    with pytest.raises(DomainError):
        DerivativeSups(geometric(3), BIDISC)
