import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from laurentseries.errors import ConfigurationError, DomainError
from laurentseries.geometry import (AxisRange, DomainSpec, Polyannulus, boundary_grid, random_points,
                                    rational_cover, sample_grid, sample_shadow, shadow)


def test_shadow_examples():
    assert shadow((1 + 0j, 0)) == (1.0, 0.0)
    assert shadow((3j,)) == (3.0,)
    s = shadow((1 + 1j, 1 - 1j))
    assert s == pytest.approx((math.sqrt(2), math.sqrt(2)), rel=0, abs=1e-15)


@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False), min_size=1,
                max_size=4),
       st.lists(st.floats(0, 2 * math.pi), min_size=4, max_size=4))
def test_shadow_rotation_invariant(z, phases):
    lam = np.exp(1j * np.array(phases[: len(z)]))
    assert np.allclose(shadow(np.array(z) * lam), shadow(z), rtol=1e-12, atol=0)


def test_contains_examples():
    assert Polyannulus.polydisc(1, 1).contains((0.5, 0.5j))
    assert not Polyannulus.annuli([1], [2]).contains((1,))
    assert Polyannulus.polydisc(1).contains((0,))


def test_contains_checks_dimension():
    with pytest.raises(DomainError):
        Polyannulus.polydisc(1, 1).contains((0.1,))


def test_axis_validation():
    with pytest.raises(ConfigurationError):
        AxisRange(2, 1)
    with pytest.raises(ConfigurationError):
        AxisRange(0, 0)
    with pytest.raises(ConfigurationError):
        AxisRange(-1, 1)


def test_sample_shadow_examples():
    assert sample_shadow(Polyannulus.annuli([1], [2]), 3).reshape(-1).tolist() == [1.0, 1.5, 2.0]
    assert sample_shadow(Polyannulus.polydisc(1), 2).reshape(-1).tolist() == [0.0, 1.0]
    assert sample_shadow(Polyannulus.polydisc(1, 2), 2).shape == (4, 2)
    with pytest.raises(ConfigurationError):
        sample_shadow(Polyannulus.polydisc(1), 1)


def test_refined_grids_are_nested():
    P = Polyannulus.annuli([0.5, 0], [2, 1])
    coarse, fine = sample_grid(P, 5, 4), sample_grid(P, 9, 8)
    for a, b in zip(coarse.axes, fine.axes):
        assert all(np.min(np.abs(b - x)) < 1e-15 for x in a)


def test_grid_point_indexing_matches_points():
    g = sample_grid(Polyannulus.polydisc(1, 2), 3, 2)
    pts = g.points()
    assert pts.shape == (g.size, 2)
    for i in (0, 5, g.size - 1):
        assert np.allclose(pts[i], g.point(i))


def test_boundary_grid_lies_on_boundary_circles():
    P = Polyannulus.annuli([0.5, 0], [2, 1])
    g = boundary_grid(P, 8)
    assert set(np.round(np.abs(g.axes[0]), 12)) == {0.5, 2.0}
    assert set(np.round(np.abs(g.axes[1]), 12)) == {1.0}


def test_within_and_intersect():
    big = Polyannulus.annuli([0.5], [2])
    assert Polyannulus.annuli([1], [1.5]).within(big)
    assert not Polyannulus.polydisc(1).within(big)
    assert Polyannulus.annuli([0.5], [1]).within(Polyannulus.polydisc(1))
    assert big.intersect(Polyannulus.polydisc(1)) == Polyannulus.annuli([0.5], [1])


def test_dict_round_trip_accepts_fractions():
    P = Polyannulus.from_dict({"r": ["1/4", 0], "R": ["7/8", 2]})
    assert P.axes[0].r == Fraction(1, 4)
    assert Polyannulus.from_dict(P.to_dict()) == P


def test_outer_weight():
    assert Polyannulus.polydisc(1, 2).outer_weight() == pytest.approx(2 * 5)


def test_random_points_inside():
    rng = np.random.default_rng(1)
    P = Polyannulus.annuli([0.5, 0], [2, 1])
    pts = random_points(P, 500, rng)
    assert all(P.contains(z) for z in pts)


def test_cover_examples():
    c = rational_cover({"kind": "polydisc", "R": [1, 1]}, 1)
    assert len(c.cells) == 1 and c.cells[0].disc_axes == (True, True)
    assert [float(x) for x in c.cells[0].outer] == [1, 1]
    c = rational_cover({"kind": "annulus-product", "r": [1], "R": [2]}, 1)
    assert len(c.cells) == 1 and (c.cells[0].axes[0].r, c.cells[0].axes[0].R) == (1, 2)


def test_unknown_domain_kind():
    with pytest.raises(ConfigurationError):
        DomainSpec.from_dict({"kind": "ball"})
    with pytest.raises(ConfigurationError):
        rational_cover({"kind": "polydisc", "R": [1]}, 0)


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_hartogs_cells_lie_in_triangle(depth):
    spec = DomainSpec.from_dict({"kind": "hartogs-triangle"})
    cells = rational_cover(spec, depth).cells
    assert len(cells) >= 2
    rng = np.random.default_rng(depth)
    for cell in cells:
        assert all(isinstance(v, (Fraction, int)) for a in cell.axes for v in (a.r, a.R))
        pts = random_points(cell, 10_000, rng)
        m = np.abs(pts)
        assert np.all((m[:, 0] < m[:, 1]) & (m[:, 1] < 1))


def test_hartogs_covers_are_monotone():
    for d in (1, 2, 3):
        coarse = rational_cover({"kind": "hartogs-triangle"}, d).cells
        fine = rational_cover({"kind": "hartogs-triangle"}, d + 1).cells
        assert all(any(c.within(f) for f in fine) for c in coarse)


def test_hartogs_cover_exhausts():
    # a fixed interior point is eventually covered
    z = (0.3, 0.9)
    hits = [any(c.contains(z) for c in rational_cover({"kind": "hartogs-triangle"}, d).cells) for d in (1, 2, 3, 4)]
    assert hits[-1] and hits == sorted(hits)
