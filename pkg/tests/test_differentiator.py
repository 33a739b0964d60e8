import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from critlab import differentiator as dif
from critlab.circle_measure import CircleMeasure, derive_seed, sample
from critlab.differentiator import (SolverOptions, critical_points, critical_points_dense,
                                    initial_iterates, matching_distance, newton_correction)
from critlab.exceptions import DegenerateError, OracleScopeError
from critlab.root_poly import coefficients, from_roots

from conftest import FAMILIES, roots_of_unity


def test_two_roots():
    cs = critical_points(from_roots([1, -1]))
    assert len(cs) == 1 and abs(cs.points[0]) < 1e-15 and cs.converged


def test_roots_of_unity():
    for n in (5, 12, 64, 300):
        cs = critical_points(from_roots(roots_of_unity(n)))
        assert len(cs) == n - 1 and np.abs(cs.points).max() <= 1e-8 and cs.converged


@pytest.mark.parametrize("a,b", [(1, 1), (3, 1), (1, 5), (4, 7), (250, 251)])
def test_two_atoms_closed_form(a, b):
    cs = critical_points(from_roots([1] * a + [-1] * b))
    ref = np.concatenate([np.ones(a - 1), -np.ones(b - 1), [(b - a) / (a + b)]])
    assert matching_distance(cs.points, ref) <= 1e-12
    # deflated copies are exact
    assert np.count_nonzero(cs.points == 1) == a - 1
    assert np.count_nonzero(cs.points == -1) == b - 1


def test_single_distinct_root():
    cs = critical_points(from_roots([1j] * 6))
    assert np.array_equal(cs.points, np.full(5, 1j))


def test_degree_checks():
    with pytest.raises(ValueError):
        SolverOptions(tolerance=0)
    with pytest.raises(ValueError):
        SolverOptions(max_iterations=0)
    with pytest.raises(ValueError):
        SolverOptions(restarts=-1)


def test_nonconvergence_is_reported_not_hidden():
    p = from_roots(sample(CircleMeasure.uniform(), 300, 1).points)
    cs = critical_points(p, SolverOptions(max_iterations=1, restarts=0))
    assert not cs.converged and cs.max_residual > 1e-12 and len(cs) == 299


def test_restarts_recover():
    p = from_roots(sample(CircleMeasure.uniform(), 300, 1).points)
    cs = critical_points(p, SolverOptions(max_iterations=3, restarts=20))
    full = critical_points(p)
    assert full.converged
    if cs.converged:
        assert matching_distance(cs.points, full.points) <= 1e-8


def test_initial_iterates_inside_gaps():
    z = sample(CircleMeasure.uniform(), 50, 2).points
    y = initial_iterates(z)
    assert y.size == 49 and np.allclose(np.abs(y), 1 - 1 / 100)


def test_dense_examples():
    assert critical_points_dense(from_roots([1, -1])).points.tolist() == [0]
    assert np.abs(critical_points_dense(from_roots(roots_of_unity(5))).points).max() <= 1e-8
    p = from_roots(sample(CircleMeasure.uniform(), 12, 42).points)
    assert matching_distance(critical_points(p).points, critical_points_dense(p).points) <= 1e-8
    with pytest.raises(OracleScopeError, match="512"):
        critical_points_dense(from_roots(roots_of_unity(600)))


@pytest.mark.parametrize("name", list(FAMILIES))
def test_oracle_equivalence(name):
    for s in range(10):
        p = from_roots(sample(FAMILIES[name], 64, derive_seed(3, s)).points)
        assert matching_distance(critical_points(p).points, critical_points_dense(p).points) <= 1e-8


@pytest.mark.parametrize("name", list(FAMILIES))
def test_invariants(name):
    for n in (10, 100, 1000):
        z = sample(FAMILIES[name], n, derive_seed(8, n)).points
        cs = critical_points(from_roots(z))
        assert len(cs) == n - 1 and cs.converged
        assert np.abs(cs.points).max() <= 1 + 1e-9
        assert abs(cs.points.sum() / (n - 1) - z.sum() / n) <= 1e-12 * n


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.floats(0, 2 * np.pi), st.integers(3, 60))
def test_rotation_equivariance(seed, alpha, n):
    p = from_roots(np.exp(2j * np.pi * np.random.default_rng(seed).random(n)))
    a = critical_points(p.rotate(alpha)).points
    b = np.exp(1j * alpha) * critical_points(p).points
    assert matching_distance(a, b) <= 1e-10


def test_blocked_path_matches_direct(monkeypatch):
    for m in (CircleMeasure.uniform(), CircleMeasure.arc(0, 0.5)):
        p = from_roots(sample(m, 3000, 17).points)
        blocked = critical_points(p)
        monkeypatch.setattr(dif, "BLOCKED_MIN_DISTINCT", 10**9)
        direct = critical_points(p)
        monkeypatch.undo()
        assert blocked.converged and direct.converged
        assert matching_distance(blocked.points, direct.points) <= 1e-9


def test_newton_correction_examples():
    p = from_roots([1, -1])
    assert abs(newton_correction(p, 0.1) - 0.1) <= 1e-15
    assert abs(newton_correction(from_roots([1, 1]), 5) - 4) <= 1e-15
    with pytest.raises(DegenerateError):
        # p = z**4 - 1 has p''(0) = 0; S and S' both sum to exact zeros there
        newton_correction(from_roots([1, 1j, -1, -1j]), 0)


def test_newton_correction_vs_coefficients():
    rng = np.random.default_rng(5)
    for deg in (3, 16, 64):
        p = from_roots(np.exp(2j * np.pi * rng.random(deg)))
        c = coefficients(p)
        d1 = c[1:] * np.arange(1, c.size)
        d2 = d1[1:] * np.arange(1, d1.size)
        for z in 0.5 * np.exp(2j * np.pi * rng.random(4)):
            ref = np.polyval(d1[::-1], z) / np.polyval(d2[::-1], z)
            assert abs(newton_correction(p, z) - ref) <= 1e-9 * abs(ref)


def test_matching_distance():
    a = np.array([0, 1, 1j])
    assert matching_distance(a, a[::-1]) == 0
    assert abs(matching_distance([0, 1], [1.1, 0.1]) - 0.1) < 1e-15
    with pytest.raises(ValueError):
        matching_distance([0], [0, 1])
    big = np.exp(2j * np.pi * np.random.default_rng(0).random(500))
    assert matching_distance(big, np.random.default_rng(1).permutation(big)) == 0
