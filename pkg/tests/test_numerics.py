import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrekit import gershgorin_excludes_zero, scaled_shift_radius, solve, spectral_radius
from hrekit.errors import DimensionMismatch, NonNegativityViolated

from generators import random_pc_values

SQ27 = math.sqrt(27)
C3 = np.array([[1, 26 + 5 * SQ27, 1], [26 - 5 * SQ27, 1, 1], [1, 1, 1]])


def h6():
    big = 1351 + 780 * math.sqrt(3)
    h = 4 * np.eye(6)
    for i in range(5):
        h[i, i + 1] = h[i + 1, i] = 1
    h[0, 5], h[5, 0] = 1 / big, big
    return h


def eig_radius(m):
    """Independent oracle: LAPACK eigenvalues."""
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def nonneg_matrices(max_n=8):
    return st.tuples(st.integers(1, max_n), st.integers(0, 2**32 - 1), st.floats(0.0, 0.9))


class TestSpectralRadius:
    def test_identity(self):
        assert spectral_radius(np.eye(3)).radius == 1.0

    def test_all_ones(self):
        res = spectral_radius(np.ones((4, 4)))
        assert res.radius == pytest.approx(4, rel=1e-12)
        assert np.allclose(res.vector, 0.25)

    def test_c3_example(self):
        assert spectral_radius(C3).radius == pytest.approx(5, rel=1e-9)

    def test_h6_example(self):
        res = spectral_radius(h6())
        assert res.converged
        assert res.radius == pytest.approx(8, rel=1e-9)
        assert res.lower <= 8 + 1e-9 and res.upper >= 8 - 1e-9

    def test_negative_entry(self):
        with pytest.raises(NonNegativityViolated):
            spectral_radius(np.array([[1.0, -1.0], [0.0, 1.0]]))

    def test_zero_matrix(self):
        assert spectral_radius(np.zeros((3, 3))).radius == 0.0

    def test_reducible_takes_largest_block(self):
        m = np.array([[2.0, 5.0, 0.0], [0.0, 1.0, 1.0], [0.0, 1.0, 1.0]])
        res = spectral_radius(m)
        assert res.radius == pytest.approx(2.0) and res.vector is None

    def test_non_convergence_is_reported(self):
        res = spectral_radius(np.array([[0.0, 1.0], [1.0, 0.999]]), max_iter=2)
        assert not res.converged

    @given(nonneg_matrices())
    @settings(max_examples=60)
    def test_matches_eigensolver(self, params):
        n, seed, sparsity = params
        rng = np.random.default_rng(seed)
        m = rng.random((n, n)) * (rng.random((n, n)) > sparsity)
        res = spectral_radius(m)
        assert res.radius == pytest.approx(eig_radius(m), rel=1e-7, abs=1e-9)
        assert res.lower - 1e-9 <= res.radius <= res.upper + 1e-9

    @given(st.integers(2, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=40)
    def test_perron_vector_positive_for_pc_matrix(self, n, seed):
        c = random_pc_values(np.random.default_rng(seed), n)
        res = spectral_radius(c)
        assert (res.vector > 0).all()
        assert np.allclose(c @ res.vector, res.radius * res.vector, rtol=1e-8)
        assert res.radius >= n - 1e-9


class TestScaledShift:
    def test_consistent(self):
        c = np.array([[1, 2, 4], [0.5, 1, 2], [0.25, 0.5, 1]])
        assert scaled_shift_radius(c, 1.0) == pytest.approx(2.0, rel=1e-12)

    def test_c3_quarter(self):
        assert scaled_shift_radius(C3, 0.25) == pytest.approx(1.0, rel=1e-12)

    def test_one_by_one(self):
        assert scaled_shift_radius(np.array([[1.0]]), 7) == 0.0

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            scaled_shift_radius(C3, 0.0)

    @given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(1e-3, 2.0))
    @settings(max_examples=50)
    def test_agrees_with_direct_radius(self, n, seed, alpha):
        c = random_pc_values(np.random.default_rng(seed), n)
        got = scaled_shift_radius(c, alpha)
        direct = spectral_radius(alpha * (c - np.eye(n))).radius
        assert abs(got - direct) <= 1e-8 * max(1.0, got)


class TestSolve:
    def test_identity(self):
        assert list(solve(np.eye(2), [3, 5]).solution) == [3.0, 5.0]

    def test_one_by_one(self):
        res = solve([[4.0]], [2.0])
        assert res.solution[0] == 0.5 and res.pivot_floor == 1.0

    def test_one_by_one_zero(self):
        assert solve([[0.0]], [1.0]).singular

    def test_example1_singular(self):
        a = np.eye(3) - (C3 - np.eye(3)) / 4
        res = solve(a, [1.0, 2.0, 3.0])
        assert res.singular and res.pivot_floor < 1e-10

    def test_example2_singular(self):
        a = np.eye(6) - (h6() - 4 * np.eye(6)) / 4
        res = solve(a, np.ones(6))
        assert res.singular and res.pivot_floor < 1e-10

    def test_needs_pivoting(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert list(solve(a, [2.0, 3.0]).solution) == [3.0, 2.0]

    def test_zero_row(self):
        assert solve(np.array([[1.0, 2.0], [0.0, 0.0]]), [1.0, 1.0]).singular

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            solve(np.eye(3), [1.0, 2.0])
        with pytest.raises(DimensionMismatch):
            solve(np.ones((2, 3)), [1.0, 2.0])

    @given(st.integers(1, 12), st.integers(0, 2**32 - 1))
    @settings(max_examples=80)
    def test_residual_bound(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(n, n)) * np.exp(rng.normal(0, 2, size=(n, 1)))
        b = rng.normal(size=n)
        res = solve(a, b)
        if not res.singular:
            x = res.solution
            bound = 1e-8 * (np.abs(a).sum(axis=1).max() * np.abs(x).max() + np.abs(b).max())
            assert np.abs(a @ x - b).max() <= bound
            assert np.allclose(x, np.linalg.solve(a, b), rtol=1e-6, atol=1e-9)


class TestMonotonicity:
    @given(nonneg_matrices())
    @settings(max_examples=60)
    def test_a_below_b(self, params):
        n, seed, sparsity = params
        rng = np.random.default_rng(seed)
        a = rng.random((n, n)) * (rng.random((n, n)) > sparsity)
        b = a + rng.random((n, n)) * (rng.random((n, n)) > 0.5)
        assert spectral_radius(a).radius <= spectral_radius(b).radius + 1e-8


class TestNeumannCriterion:
    @given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.floats(0.0, 1 - 2e-6))
    @settings(max_examples=60)
    def test_radius_below_one_means_invertible(self, n, seed, target):
        rng = np.random.default_rng(seed)
        b = rng.random((n, n))
        r = spectral_radius(b).radius
        b = b * (target / r)
        assert spectral_radius(b).radius < 1 - 1e-6
        assert not solve(np.eye(n) - b, rng.normal(size=n)).singular


class TestGershgorin:
    def test_example_pattern(self):
        a = 4 * np.eye(6)
        for i in range(6):
            a[i, (i + 1) % 6] = a[i, (i - 1) % 6] = -1
        assert gershgorin_excludes_zero(a)

    def test_all_ones(self):
        assert not gershgorin_excludes_zero(np.ones((2, 2)))

    def test_identity(self):
        assert gershgorin_excludes_zero(np.eye(4))

    @given(st.integers(1, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=60)
    def test_dominance_implies_solvable(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(n, n))
        np.fill_diagonal(a, 0.0)
        np.fill_diagonal(a, np.abs(a).sum(axis=1) * (1 + rng.random(n)) + 1e-3)
        a *= np.where(rng.random(n) < 0.5, -1, 1)[:, None]
        assert gershgorin_excludes_zero(a)
        assert not solve(a, rng.normal(size=n)).singular
