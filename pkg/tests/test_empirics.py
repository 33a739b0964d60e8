import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from critlab.circle_measure import CircleMeasure, derive_seed, sample
from critlab.differentiator import critical_points
from critlab.empirics import (circular_w1, empirical_moment, interior_count, ks_distance,
                              radial_moment, squeeze_lower_bound, to_polar, weyl_sum)
from critlab.root_poly import from_roots

from conftest import FAMILIES, roots_of_unity

angles = st.lists(st.floats(0, 1, exclude_max=True, allow_nan=False), min_size=1, max_size=30)


def test_to_polar_examples():
    ps = to_polar([1, -1j, 0])
    assert ps.radii.tolist() == [1, 1, 0]
    assert ps.angles.tolist() == [0, 0.75, 0]
    assert ps.at_origin.tolist() == [False, False, True]
    assert np.allclose(ps.points(), [1, -1j, 0])


def test_empirical_moment_examples():
    assert empirical_moment([1, -1], 2) == 1
    z = roots_of_unity(5)
    assert abs(empirical_moment(z, 5) - 1) < 1e-14
    assert abs(empirical_moment(z, 3)) < 1e-15
    good = sum(abs(empirical_moment(sample(CircleMeasure.uniform(), 10**4, s).points, 1)) <= 0.05
               for s in range(100))
    assert good >= 95
    with pytest.raises(ValueError):
        empirical_moment([], 1)


def test_radial_moment_examples(two_point):
    assert radial_moment(to_polar(critical_points(from_roots([1, -1])).points), 3) == 0
    assert radial_moment(to_polar(roots_of_unity(7)), 4) == pytest.approx(1, abs=1e-15)
    z = sample(two_point, 10**4, 9).points
    assert radial_moment(to_polar(critical_points(from_roots(z)).points), 2) >= 0.999


def test_weyl_examples(two_point):
    assert weyl_sum(to_polar([1]), 7) == 1
    n = 12
    ps = to_polar(roots_of_unity(n))
    for k in (1, 5, 11, 13):
        assert abs(weyl_sum(ps, k)) <= 1e-12
    cs = critical_points(from_roots(sample(two_point, 10**4, 2).points))
    assert abs(weyl_sum(to_polar(cs.points), 2) - 1) <= 0.05


def test_circular_w1_examples():
    a = np.random.default_rng(0).random(40)
    assert circular_w1(a, a) == 0
    assert abs(circular_w1([0.0], [0.5]) - 0.5) < 1e-15
    assert abs(circular_w1([0.0], [0.75]) - 0.25) < 1e-15
    assert abs(circular_w1([0.1], [0.9]) - 0.2) < 1e-15


def test_circular_w1_against_brute_force():
    # equal-size samples: W1 is the best cyclic matching of the sorted angles
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = np.sort(rng.random(9)), np.sort(rng.random(9))
        best = min(np.mean(np.minimum(np.abs(a - np.roll(b, s)), 1 - np.abs(a - np.roll(b, s))))
                   for s in range(9))
        assert circular_w1(a, b) <= best + 1e-12
        # and never below the brute force over all offsets c of the CDF form
        grid = np.linspace(0, 1, 20001)[:-1]
        fa = np.searchsorted(a, grid, side="right") / 9
        fb = np.searchsorted(b, grid, side="right") / 9
        approx = min(np.mean(np.abs(fa - fb - c)) for c in np.linspace(-1, 1, 401))
        assert abs(circular_w1(a, b) - approx) <= 2e-3


@settings(max_examples=60, deadline=None)
@given(angles, angles, angles)
def test_circular_w1_metric(a, b, c):
    assert circular_w1(a, b) == circular_w1(b, a)
    assert circular_w1(a, c) <= circular_w1(a, b) + circular_w1(b, c) + 1e-12


@settings(max_examples=60, deadline=None)
@given(angles, angles, st.floats(0, 1, exclude_max=True))
def test_circular_w1_rotation(a, b, off):
    ra = np.mod(np.asarray(a) + off, 1.0)
    rb = np.mod(np.asarray(b) + off, 1.0)
    assert abs(circular_w1(ra, rb) - circular_w1(a, b)) <= 1e-12


def test_ks_examples():
    pm = CircleMeasure.atomic([0.0])
    assert ks_distance([0.0, 0.0, 0.0], pm) == 0
    assert ks_distance([0.5], pm) == 1
    good = sum(ks_distance(sample(CircleMeasure.arc(0, 0.5), 10**4, s).angles, CircleMeasure.arc(0, 0.5))
               <= 0.03 for s in range(100))
    assert good >= 95


def test_ks_uniform_grid():
    assert abs(ks_distance(np.arange(10) / 10, CircleMeasure.uniform()) - 0.1) < 1e-12


def test_interior_count_examples(two_point):
    assert interior_count([0], 0.5) == 1
    assert interior_count(roots_of_unity(9), 0.99) == 0
    for n in (3, 50, 1001):
        cs = critical_points(from_roots(sample(two_point, n, n).points))
        if len(set(sample(two_point, n, n).points.tolist())) == 2:
            assert interior_count(cs.points, 0.5) == 1


@pytest.mark.parametrize("name", list(FAMILIES))
def test_squeeze_and_triangle(name):
    for n in (20, 500):
        z = sample(FAMILIES[name], n, derive_seed(6, n)).points
        y = critical_points(from_roots(z)).points
        ps = to_polar(y)
        for k in range(1, 9):
            rm = radial_moment(ps, k)
            assert rm <= 1
            for eps in (0.1, 0.01):
                assert squeeze_lower_bound(ps, k, eps) <= rm
            assert abs(weyl_sum(ps, k) - empirical_moment(y, k)) <= 1 - rm + 1e-9


@pytest.mark.parametrize("name", list(FAMILIES))
def test_mean_identity(name):
    z = sample(FAMILIES[name], 700, 3).points
    y = critical_points(from_roots(z)).points
    assert abs(empirical_moment(y, 1) - empirical_moment(z, 1)) <= 1e-12
