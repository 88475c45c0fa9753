import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrekit import PCMatrix, consistent_completion, harker_ci, harker_matrix, saaty_ci, validate
from hrekit.errors import HasAllMissingRow, HasMissingEntries, NotConsistent, NotIrreducible

from generators import apply_pattern, log_uniform, random_pc_values, spanning_pattern
from test_pcm import RING_BIG, RING_SMALL, example2_c6

SQ27 = math.sqrt(27)
C3 = PCMatrix([[1, 26 + 5 * SQ27, 1], [26 - 5 * SQ27, 1, 1], [1, 1, 1]])
CONSISTENT3 = PCMatrix([[1, 2, 4], [1 / 2, 1, 2], [1 / 4, 1 / 2, 1]])


def eig_ci(h, n):
    rho = np.max(np.abs(np.linalg.eigvals(h)))
    return (rho - n) / (n - 1)


class TestSaaty:
    def test_consistent(self):
        assert saaty_ci(CONSISTENT3).index_value == pytest.approx(0, abs=1e-12)

    def test_c3_example(self):
        rep = saaty_ci(C3)
        assert rep.index_value == pytest.approx(1.0, abs=1e-9)
        assert rep.radius_used == pytest.approx(5.0, rel=1e-12)
        assert rep.kind == "saaty" and rep.dimension == 3

    @given(st.floats(1e-3, 1e3))
    def test_any_2x2_is_consistent(self, x):
        assert saaty_ci(PCMatrix([[1, x], [1 / x, 1]])).index_value == pytest.approx(0, abs=1e-12)

    def test_requires_complete(self):
        with pytest.raises(HasMissingEntries):
            saaty_ci(CONSISTENT3.without([(0, 2)]))

    @given(st.integers(2, 9), st.integers(0, 2**32 - 1))
    @settings(max_examples=50)
    def test_nonnegative(self, n, seed):
        c = PCMatrix(random_pc_values(np.random.default_rng(seed), n))
        assert saaty_ci(c).index_value >= -1e-9


class TestHarkerMatrix:
    def test_complete_is_identity_map(self):
        assert np.array_equal(harker_matrix(C3), C3.values)

    def test_example2_h6(self):
        expected = 4 * np.eye(6)
        for i in range(5):
            expected[i, i + 1] = expected[i + 1, i] = 1
        expected[0, 5] = RING_SMALL
        expected[5, 0] = RING_BIG
        assert np.array_equal(harker_matrix(example2_c6()), expected)

    def test_one_missing_pair(self):
        h = harker_matrix(CONSISTENT3.without([(0, 2)]))
        assert h[0, 0] == h[2, 2] == 2 and h[1, 1] == 1
        assert h[0, 2] == h[2, 0] == 0


class TestHarkerCI:
    def test_complete_equals_saaty_exactly(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            c = PCMatrix(random_pc_values(rng, int(rng.integers(2, 8))))
            assert harker_ci(c).index_value == saaty_ci(c).index_value

    def test_example2(self):
        assert harker_ci(example2_c6()).index_value == pytest.approx(0.4, abs=1e-12)

    def test_consistent_incomplete_is_zero(self):
        m = CONSISTENT3.without([(0, 2)])
        assert eig_ci(harker_matrix(m), 3) == pytest.approx(0, abs=1e-12)
        assert harker_ci(m).index_value == pytest.approx(0, abs=1e-12)

    def test_reducible(self):
        m = PCMatrix.from_weights([1, 2, 3, 4]).without([(0, 2), (0, 3), (1, 2), (1, 3)])
        with pytest.raises(NotIrreducible):
            harker_ci(m)
        assert harker_ci(m, require_irreducible=False).index_value == pytest.approx(
            eig_ci(harker_matrix(m), 4), abs=1e-12)

    def test_all_missing_row(self):
        m = PCMatrix.from_weights([1, 2, 3]).without([(0, 1), (0, 2)])
        with pytest.raises(HasAllMissingRow):
            harker_ci(m)

    @given(st.integers(2, 9), st.integers(0, 2**32 - 1))
    @settings(max_examples=50)
    def test_matches_eigensolver(self, n, seed):
        rng = np.random.default_rng(seed)
        m = PCMatrix(apply_pattern(random_pc_values(rng, n), spanning_pattern(rng, n, 0.3)))
        rep = harker_ci(m)
        assert rep.index_value == pytest.approx(eig_ci(harker_matrix(m), n), abs=1e-9)
        assert rep.index_value >= -1e-9


def ring(weights):
    n = len(weights)
    m = PCMatrix.from_weights(weights)
    return m.without([(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)])


class TestCompletion:
    def test_single_path(self):
        m = PCMatrix.from_upper_triangle([[1, 2, "?"], [0, 1, 3], [0, 0, 1]])
        done = consistent_completion(m)
        assert done.cell(0, 2) == pytest.approx(6, rel=1e-15)
        assert done.cell(2, 0) == pytest.approx(1 / 6, rel=1e-15)

    def test_complete_unchanged(self):
        m = PCMatrix.from_weights([1, 2, 4])
        assert np.array_equal(consistent_completion(m).values, m.values)

    def test_ring_4x4(self):
        w = np.array([1.0, 2.0, 4.0, 8.0])
        m = PCMatrix.from_weights(w).without([(0, 2), (1, 3)])
        done = consistent_completion(m)
        np.testing.assert_allclose(done.values, w[:, None] / w[None, :], rtol=1e-14)

    def test_not_consistent(self):
        with pytest.raises(NotConsistent):
            consistent_completion(C3)

    def test_not_irreducible(self):
        m = PCMatrix.from_weights([1, 2, 3, 4]).without([(0, 2), (0, 3), (1, 2), (1, 3)])
        with pytest.raises(NotIrreducible):
            consistent_completion(m)

    @given(st.integers(2, 10), st.integers(0, 2**32 - 1))
    @settings(max_examples=60)
    def test_properties(self, n, seed):
        rng = np.random.default_rng(seed)
        w = log_uniform(rng, 0.1, 10, n)
        m = PCMatrix(apply_pattern(w[:, None] / w[None, :], spanning_pattern(rng, n, 0.2)))
        done = consistent_completion(m)
        assert validate(done) == []
        assert done.is_complete
        assert saaty_ci(done).index_value == pytest.approx(0, abs=1e-9)
        np.testing.assert_allclose(done.values, w[:, None] / w[None, :], rtol=1e-12)
        again = consistent_completion(done)
        np.testing.assert_allclose(again.values, done.values, rtol=1e-12)
        other = consistent_completion(m, root=int(rng.integers(n)))
        np.testing.assert_allclose(other.values, done.values, rtol=1e-9)
