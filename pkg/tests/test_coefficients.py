import itertools

import numpy as np
import pytest

from laurentseries.coefficients import (CoefficientTable, aliasing_estimate, coefficients_dft, default_grid,
                                        derivative_shift_check)
from laurentseries.errors import ConfigurationError, DataInconsistencyError, DomainError
from laurentseries.geometry import AxisRange, Polyannulus
from laurentseries.testfns import LaurentPolynomial, builtin_suite, geometric, monomial, reciprocal

SUITE = builtin_suite()
IDS = [f.name for f in SUITE]
RING = Polyannulus.annuli([0.5], [2])


def direct_coefficient(f, alpha, radii, m):
    """Explicit trapezoid sum of the Cauchy integral, no FFT."""
    n = f.dim
    total = 0j
    for s in itertools.product(range(m), repeat=n):
        theta = 2 * np.pi * np.array(s) / m
        z = np.asarray(radii) * np.exp(1j * theta)
        total += f.eval(z) * np.exp(-1j * np.dot(alpha, theta))
    return total / m**n / np.prod(np.asarray(radii, dtype=float) ** np.asarray(alpha, dtype=float))


@pytest.mark.parametrize("f", [geometric(3), reciprocal(0.1), SUITE[6], SUITE[10], SUITE[11]],
                         ids=lambda f: f.name)
def test_fft_matches_direct_sum(f):
    m = 16 if f.dim == 1 else 8
    tab = coefficients_dft(f, None, m, 3, estimate_aliasing=False)
    for alpha in [(0,) * f.dim, (1,) * f.dim, (-1,) * f.dim, (2,) + (-3,) * (f.dim - 1)]:
        assert abs(tab[alpha] - direct_coefficient(f, alpha, tab.radii, m)) < 1e-13


def test_unit_monomial_example():
    tab = coefficients_dft(monomial((2,), Polyannulus.polydisc(1)), [1.0], 8, 3)
    assert abs(tab[(2,)] - 1) < 1e-14
    assert all(abs(tab[(a,)]) < 1e-14 for a in range(-3, 4) if a != 2)


def test_geometric_example():
    tab = coefficients_dft(geometric(3), [1.0], 64, 16)
    assert max(abs(tab[(k,)] - 3.0 ** -(k + 1)) for k in range(17)) < 1e-10


def test_reciprocal_example():
    tab = coefficients_dft(reciprocal(0.1, RING), [1.0], 64, 16)
    assert abs(tab[(-1,)] - 1) < 1e-10


def test_polynomial_has_no_aliasing():
    f = LaurentPolynomial({(3,): 1.0, (-2,): 0.5j}, RING)
    assert aliasing_estimate(f, [1.0], 16, 4) < 1e-15


def test_aliasing_decreases_with_m():
    a16 = aliasing_estimate(geometric(3), [1.0], 16, 4)
    a32 = aliasing_estimate(geometric(3), [1.0], 32, 4)
    # worst alias sits at alpha = -N: c_{m-N} = 3^-(m-N+1)
    assert a32 < a16 <= 1.01 * 3.0 ** -(16 - 4 + 1)
    for f in SUITE:
        coarse = aliasing_estimate(f, None, 32, 8)
        fine = aliasing_estimate(f, None, 64, 8)
        assert fine <= max(coarse, 1e-15)


@pytest.mark.parametrize("f", SUITE, ids=IDS)
def test_oracle_agreement(f):
    tab = coefficients_dft(f, None, None, 10)
    for alpha, c in tab.items():
        assert abs(c - f.oracle_coeff(alpha)) <= tab.aliasing_bound + 1e-12


@pytest.mark.parametrize("f", SUITE, ids=IDS)
def test_disc_axis_vanishing(f):
    tab = coefficients_dft(f, None, None, 8)
    for alpha in tab.indices():
        if tab.is_structural_zero(alpha):
            assert abs(tab[alpha]) <= tab.error_bound(alpha)
            assert tab.coefficient(alpha) == 0
    tab.check_structural_zeros()


def test_radius_independence():
    f = SUITE[6]  # 1/(3-z) + 1/(z-0.1) on the ring
    tabs = [coefficients_dft(f, [r], 64, 16) for r in (0.8, 1.0, 1.25)]
    for a, b in itertools.combinations(tabs, 2):
        for alpha in a.indices():
            assert abs(a[alpha] - b[alpha]) <= a.error_bound(alpha) + b.error_bound(alpha)


def test_structural_zero_violation_raises():
    tab = coefficients_dft(geometric(3), None, 32, 4)
    tab.values[tab._pos((-2,))] = 1e-3
    with pytest.raises(DataInconsistencyError):
        tab.check_structural_zeros()


def test_configuration_errors():
    with pytest.raises(ConfigurationError):
        coefficients_dft(geometric(3), None, 8, 4)
    with pytest.raises(ConfigurationError):
        coefficients_dft(geometric(3), [1.0, 1.0], 32, 4)
    with pytest.raises(DomainError):
        coefficients_dft(geometric(3), [2.5], 32, 4)
    with pytest.raises(DomainError):
        coefficients_dft(geometric(3), None, 32, 4)[(5,)]


def test_default_grid():
    assert default_grid(0) == 32 and default_grid(16) == 64 and default_grid(40) == 128


def test_csv_round_trip(tmp_path):
    f = SUITE[9]
    tab = coefficients_dft(f, None, None, 4)
    tab.to_csv(tmp_path / "t.csv")
    back = CoefficientTable.from_csv(tmp_path / "t.csv")
    assert np.array_equal(back.values, tab.values)
    assert back.radii == tab.radii and back.disc_axes == tab.disc_axes
    assert back.error_bound((1, -1)) == tab.error_bound((1, -1))


def test_items_follow_sigma_order():
    tab = coefficients_dft(geometric(3), None, None, 2)
    assert [a for a, _ in tab.items()] == [(0,), (-1,), (1,), (-2,), (2,)]


def test_shift_examples():
    P = Polyannulus.polydisc(1, 1)
    e = monomial((3, 2), P)
    assert derivative_shift_check(e, (2, 1), (3, 2), (0.3, 0.4j)) < 1e-12
    assert derivative_shift_check(geometric(3), (1,), (2,), (0.7,)) < 1e-9
    assert derivative_shift_check(geometric(3), (0,), (4,), (0.7,)) < 1e-15
    with pytest.raises(DomainError):
        derivative_shift_check(geometric(3), (1,), (2,), (2.5,))


def test_roundoff_term_scales_with_radius():
    tab = coefficients_dft(geometric(3), [0.5], 32, 4)
    assert tab.roundoff[tab._pos((4,))] == pytest.approx(tab.roundoff[tab._pos((0,))] * 2**4)
