import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from obcs.core import (
    gen_signal,
    gt_measure,
    gt_measure_matrix,
    l2_error,
    sign_measure,
    sign_to_gt,
    sign_value,
    support,
)
from obcs.matrices import bernoulli_matrix

finite = st.floats(allow_nan=False, allow_infinity=False)


class TestSignValue:
    @pytest.mark.parametrize("y, expected", [(3.2, 1), (-0.0, 0), (0.0, 0), (-7, -1), (5e-324, 1)])
    def test_examples(self, y, expected):
        assert sign_value(y) == expected

    @pytest.mark.parametrize("y", [math.inf, -math.inf, math.nan])
    def test_non_finite(self, y):
        with pytest.raises(ValueError):
            sign_value(y)

    @given(finite)
    def test_odd(self, y):
        assert sign_value(-y) == -sign_value(y)

    def test_tolerance_knob(self):
        assert sign_value(1e-12, tol=1e-9) == 0
        assert sign_value(1e-12) == 1


class TestSignMeasure:
    def test_identity(self):
        np.testing.assert_array_equal(sign_measure(np.eye(2), [0, 1]), [0, 1])

    def test_cancellation(self):
        np.testing.assert_array_equal(sign_measure(np.ones((1, 3)), [1, -1, 0]), [0])

    def test_positive(self):
        np.testing.assert_array_equal(sign_measure([[1, 1, 0]], [0.6, 0.8, 0]), [1])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            sign_measure(np.eye(3), [1.0, 2.0])


class TestGroupTesting:
    @pytest.mark.parametrize(
        "row, x, expected",
        [((1, 0, 1), (0, 2, 0), 0), ((1, 0, 1), (5, 0, 0), 1), ((0, 0, 0), (1, 2, 3), 0)],
    )
    def test_examples(self, row, x, expected):
        assert gt_measure(row, x) == expected

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            gt_measure((1, 0), (1, 0, 0))

    @pytest.mark.parametrize("s, bit", [(1, 1), (0, 0), (-1, 1)])
    def test_sign_to_gt(self, s, bit):
        assert sign_to_gt(s) == bit

    def test_sign_to_gt_rejects(self):
        with pytest.raises(ValueError):
            sign_to_gt(2)

    def test_sign_to_gt_vector(self):
        np.testing.assert_array_equal(sign_to_gt(np.array([-1, 0, 1])), [1, 0, 1])

    def test_sign_recovers_group_tests(self):
        # real-model signals never cancel exactly on a 0/1 row
        rng = np.random.default_rng(12)
        for _ in range(10_000):
            n, k = 30, int(rng.integers(1, 6))
            M = bernoulli_matrix(8, n, 0.3, rng)
            x = gen_signal(n, k, "real", rng)
            np.testing.assert_array_equal(sign_to_gt(sign_measure(M, x)), gt_measure_matrix(M, x))


class TestGenSignal:
    def test_full_support_binary(self):
        x = gen_signal(5, 5, "binary", 0)
        np.testing.assert_allclose(x, 1 / math.sqrt(5), rtol=0, atol=1e-15)
        assert abs(x[0] - 0.4472) < 1e-4

    def test_real_unit_norm(self):
        x = gen_signal(1000, 10, "real", 42)
        assert np.count_nonzero(x) == 10
        assert abs(np.linalg.norm(x) - 1) <= 1e-12

    def test_single_nonnegative(self):
        x = gen_signal(3, 1, "nonnegative", 5)
        assert sorted(x.tolist()) == [0.0, 0.0, 1.0]

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            gen_signal(3, 4)

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            gen_signal(3, 1, "complex")

    @pytest.mark.parametrize("model", ["real", "nonnegative", "binary"])
    def test_deterministic(self, model):
        a = gen_signal(100, 7, model, 123)
        b = gen_signal(100, 7, model, 123)
        assert a.tobytes() == b.tobytes()

    def test_nonnegative_sign(self):
        x = gen_signal(50, 10, "nonnegative", 1)
        assert np.all(x >= 0)

    def test_support_uniform(self):
        # each of the C(5,2)=10 supports should appear about 1/10 of the time
        rng = np.random.default_rng(3)
        counts = {}
        N = 20_000
        for _ in range(N):
            s = support(gen_signal(5, 2, "binary", rng))
            counts[s] = counts.get(s, 0) + 1
        assert len(counts) == 10
        sigma = math.sqrt(N * 0.1 * 0.9)
        assert all(abs(c - N / 10) < 5 * sigma for c in counts.values())


class TestL2Error:
    def test_equal(self):
        x = gen_signal(20, 3, "real", 0)
        assert l2_error(x, x) == 0.0

    def test_antipodal(self):
        assert l2_error([1, 0], [-1, 0]) == 2.0

    def test_orthogonal(self):
        assert abs(l2_error([1, 0], [0, 1]) - math.sqrt(2)) < 1e-15

    def test_zero(self):
        with pytest.raises(ValueError):
            l2_error([0, 0], [1, 0])

    @given(
        st.lists(st.floats(-10, 10), min_size=3, max_size=3),
        st.lists(st.floats(-10, 10), min_size=3, max_size=3),
        st.floats(0.01, 100),
    )
    def test_symmetric_and_scale_invariant(self, a, b, c):
        a, b = np.array(a), np.array(b)
        if np.linalg.norm(a) < 1e-3 or np.linalg.norm(b) < 1e-3:
            return
        e = l2_error(a, b)
        assert 0 <= e <= 2
        assert abs(e - l2_error(b, a)) < 1e-12
        assert abs(e - l2_error(c * a, b)) < 1e-9
        assert abs(e - l2_error(a, c * b)) < 1e-9
