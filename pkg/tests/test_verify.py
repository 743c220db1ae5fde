import itertools
import math

import numpy as np
import pytest
import scipy.linalg
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from obcs import _kernels_py, kernels
from obcs.core import gen_signal, gt_measure_matrix
from obcs.decode import gt_superset_decode
from obcs.matrices import SetFamily, bernoulli_matrix, constant_weight_random, ruff_from_code
from obcs.codes import repetition_code
from obcs.verify import (
    BallSepParams,
    ListRuffParams,
    ball_separation_bound,
    beta_pdf_at_half,
    check_list_disjunct,
    check_list_ruff,
    check_property1,
    check_ruff,
    column_bits,
    compute_TS,
    fact_arccos_lower,
    fact_exp_lower,
    format_report,
    has_full_support_nullvec,
    list_ruff_violation,
    max_TS,
    mc_ball_separation,
    nullspace_basis,
    separation_probability,
)

# ----------------------------------------------------------------------------
# Independent oracles


def oracle_list_disjunct(M, k, l):
    """Literal pairwise definition over disjoint S, T."""
    M = np.asarray(M) != 0
    n = M.shape[1]
    for S in itertools.combinations(range(n), k):
        free_rows = ~M[:, list(S)].any(axis=1)
        rest = [j for j in range(n) if j not in S]
        for T in itertools.combinations(rest, l):
            if not (M[free_rows][:, list(T)]).any():
                return False
    return True


def oracle_ruff(B, k, alpha):
    sets = [set(np.flatnonzero(B[:, j])) for j in range(B.shape[1])]
    if len({len(s) for s in sets}) > 1:
        return False
    n = len(sets)
    for j0 in range(n):
        others = [j for j in range(n) if j != j0]
        for J in itertools.combinations(others, k):
            union = set().union(*(sets[j] for j in J))
            if not len(sets[j0] & union) < alpha * len(sets[j0]):
                return False
    return True


def oracle_max_TS(B, k):
    B = np.asarray(B) != 0
    n = B.shape[1]
    w = B.sum(axis=0)
    best = 0
    for s in range(k + 1):
        for S in itertools.combinations(range(n), s):
            union = B[:, list(S)].any(axis=1)
            count = sum(1 for j in range(n) if j not in S and 2 * int((B[:, j] & union).sum()) >= w[j])
            best = max(best, count)
    return best


def oracle_full_support_nullvec(A, rng):
    """SVD nullspace plus a random combination."""
    N = scipy.linalg.null_space(np.asarray(A, dtype=float))
    if N.shape[1] == 0:
        return False
    v = N @ rng.standard_normal(N.shape[1])
    return bool(np.all(np.abs(v) > 1e-8))


def oracle_list_ruff(B, k, ell, rng):
    """Enumerates every zero pattern of at least ceil(d/2) rows, via SVD nullspaces."""
    B = np.asarray(B, dtype=float)
    nz = B != 0
    n = B.shape[1]
    w = nz.sum(axis=0)
    if len(set(w.tolist())) > 1:
        return False
    d = int(w[0])
    for s in range(min(k, n) + 1):
        for S in itertools.combinations(range(n), s):
            union = nz[:, list(S)].any(axis=1)
            T = [j for j in range(n) if j not in S and 2 * int((nz[:, j] & union).sum()) >= d]
            if len(T) >= ell:
                return False
            for j in T:
                L = [i for i in range(B.shape[0]) if nz[i, j] and union[i]]
                A = B[np.ix_(L, list(S) + [j])]
                for size in range(math.ceil(d / 2), len(L) + 1):
                    for R in itertools.combinations(range(len(L)), size):
                        if oracle_full_support_nullvec(A[list(R)], rng):
                            return False
    return True


# ----------------------------------------------------------------------------


class TestListDisjunct:
    def test_identity(self):
        assert check_list_disjunct(np.eye(3, dtype=np.uint8), 1, 1)

    def test_all_ones_row(self):
        assert not check_list_disjunct(np.ones((1, 3), dtype=np.uint8), 1, 1)

    def test_bernoulli_matches_oracle(self):
        for seed in range(5):
            M = bernoulli_matrix(30, 20, 1 / 3, seed)
            for l in (1, 2, 4):
                assert check_list_disjunct(M, 2, l) == oracle_list_disjunct(M, 2, l)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
    def test_random_matches_oracle(self, seed, k, l):
        M = bernoulli_matrix(6, 8, 0.35, seed)
        assert check_list_disjunct(M, k, l) == oracle_list_disjunct(M, k, l)

    def test_cap(self):
        with pytest.raises(ValueError, match="cap"):
            check_list_disjunct(np.eye(40, dtype=np.uint8), 5, 1, cap=1000)

    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("OBCS_ENUM_CAP", "10")
        with pytest.raises(ValueError, match="cap"):
            check_list_disjunct(np.eye(10, dtype=np.uint8), 2, 1)

    def test_consistent_with_decoding(self):
        # list-disjunct => GT decoding of any k-sparse binary x has at most k + l entries
        for seed in range(8):
            M = bernoulli_matrix(14, 9, 1 / 3, seed)
            for k, l in ((1, 1), (1, 2), (2, 2)):
                if not check_list_disjunct(M, k, l):
                    continue
                for S in itertools.combinations(range(9), k):
                    x = np.zeros(9)
                    x[list(S)] = 1
                    assert len(gt_superset_decode(M, gt_measure_matrix(M, x))) <= k + l


class TestRuff:
    def test_disjoint(self):
        F = SetFamily(6, ((0, 1), (2, 3), (4, 5)))
        for alpha in (1e-6, 0.5, 1.0):
            assert check_ruff(F, 2, alpha)

    def test_duplicate(self):
        F = SetFamily(4, ((0, 1), (0, 1), (2, 3)))
        assert not check_ruff(F, 1, 1.0)

    def test_repetition_small_alpha(self):
        assert check_ruff(ruff_from_code(repetition_code(2, 3)), 1, 1e-9)

    def test_strict_inequality_at_zero(self):
        assert not check_ruff(ruff_from_code(repetition_code(2, 3)), 1, 0.0)

    def test_unequal_sizes(self):
        assert not check_ruff(SetFamily(4, ((0,), (1, 2))), 1, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 3), st.sampled_from([0.25, 0.5, 0.75, 1.0]))
    def test_matches_oracle(self, seed, k, alpha):
        B = constant_weight_random(12, 7, 3, seed)
        assert check_ruff(B, k, alpha) == oracle_ruff(B, k, alpha)


class TestProperty1:
    def test_nonnegative(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            M = bernoulli_matrix(10, 20, 0.3, rng)
            assert check_property1(M, gen_signal(20, 4, "nonnegative", rng))

    def test_cancellation(self):
        assert not check_property1([[1, 1, 0]], [1, -1, 0])

    def test_real_model(self):
        rng = np.random.default_rng(1)
        M = bernoulli_matrix(30, 50, 0.2, rng)
        assert all(check_property1(M, gen_signal(50, 5, "real", rng)) for _ in range(100_000))


class TestTS:
    def test_disjoint(self):
        B = np.kron(np.eye(4, dtype=np.uint8), np.ones((2, 1), dtype=np.uint8))
        assert all(compute_TS(B, S) == () for S in itertools.combinations(range(4), 2))

    def test_identical_columns(self):
        B = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 1], [0, 0, 1]])
        assert 1 in compute_TS(B, (0,))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.integers(0, 3))
    def test_max_matches_oracle(self, seed, k):
        B = constant_weight_random(10, 8, 3, seed)
        best, S = max_TS(B, k)
        assert best == oracle_max_TS(B, k)
        assert len(compute_TS(B, S)) == best


class TestNullspace:
    @pytest.mark.parametrize("A, expected", [([[1, -1]], True), ([[1, 0]], False), (np.eye(2), False)])
    def test_examples(self, A, expected):
        assert has_full_support_nullvec(A) is expected

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 5), st.integers(1, 6))
    def test_basis_matches_svd(self, seed, rows, cols):
        rng = np.random.default_rng(seed)
        A = rng.integers(-1, 2, (rows, cols)).astype(float)
        N = nullspace_basis(A)
        assert N.shape[1] == scipy.linalg.null_space(A).shape[1]
        np.testing.assert_allclose(A @ N, 0, atol=1e-9)
        if N.shape[1]:
            assert np.linalg.matrix_rank(N) == N.shape[1]
        assert has_full_support_nullvec(A) == oracle_full_support_nullvec(A, rng)


HAND = np.zeros((6, 4))
for _j, _rows in enumerate(((0, 1, 2), (0, 1, 3), (2, 4, 5), (3, 4, 5))):
    HAND[list(_rows), _j] = 1


class TestListRuff:
    def test_disjoint(self):
        B = np.kron(np.eye(4), np.ones((2, 1)))
        assert check_list_ruff(B, ListRuffParams(2, 1))

    def test_identical_columns(self):
        B = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 1], [0, 0, 1]])
        reason = list_ruff_violation(B, ListRuffParams(1, 1))
        assert reason and "T_S" in reason

    def test_hand_binary_fails_property2(self):
        reason = list_ruff_violation(HAND, ListRuffParams(1, 3))
        assert reason and "nullvector" in reason
        assert not oracle_list_ruff(HAND, 1, 3, np.random.default_rng(0))

    def test_hand_weighted_entry(self):
        # with a 2 at (1, 1) the S={0}, j=1 block [[1,1],[1,2]] is nonsingular
        B = HAND.copy()
        B[1, 1] = 2
        A = B[np.ix_([0, 1], [0, 1])]
        assert not has_full_support_nullvec(A)
        rng = np.random.default_rng(0)
        for k in (1, 2):
            for ell in (1, 2, 3, 4):
                assert check_list_ruff(B, ListRuffParams(k, ell)) == oracle_list_ruff(B, k, ell, rng)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 5))
    def test_random_matches_oracle(self, seed, k, ell):
        rng = np.random.default_rng(seed)
        B = constant_weight_random(8, 5, 2, rng).astype(float)
        B[B != 0] = rng.integers(1, 3, int(np.count_nonzero(B)))
        assert check_list_ruff(B, ListRuffParams(k, ell)) == oracle_list_ruff(B, k, ell, rng)


class TestBallSeparation:
    def test_orthogonal(self):
        est, err = mc_ball_separation(BallSepParams(math.sqrt(2), 0.0, 10, 200_000), 0)
        assert abs(est - 0.5) < 4 * err + 1e-12
        assert 0.5 >= math.sqrt(2) / math.pi

    def test_antipodal(self):
        est, _ = mc_ball_separation(BallSepParams(2.0, 0.0, 10, 50_000), 0)
        assert est > 0.999
        assert abs(ball_separation_bound(2.0, 0.0, 10) - 2 / math.pi) < 1e-15

    @pytest.mark.parametrize("eps", [0.3, 1.0, 1.7])
    def test_upper_consistency(self, eps):
        est, err = mc_ball_separation(BallSepParams(eps, 0.0, 6, 100_000), 1)
        assert est - 3 * err <= separation_probability(eps)
        assert est + 3 * err >= ball_separation_bound(eps, 0.0, 6)

    def test_workers_do_not_matter(self):
        p = BallSepParams(1.0, 0.01, 10, 200_000)
        assert mc_ball_separation(p, 5, workers=1) == mc_ball_separation(p, 5, workers=3)

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            BallSepParams(2.5, 0.0, 3, 10)

    def test_nonvacuous(self):
        assert BallSepParams(1.0, 0.01, 10, 1).nonvacuous
        assert not BallSepParams(0.1, 0.1, 10, 1).nonvacuous


class TestBetaAndFacts:
    @pytest.mark.parametrize("n", [4, 5, 10, 57, 200, 1000])
    def test_matches_scipy(self, n):
        ref = scipy.stats.beta.pdf(0.5, (n - 1) / 2, (n - 1) / 2)
        assert abs(beta_pdf_at_half(n) - ref) <= 1e-10 * ref

    def test_n5(self):
        assert abs(beta_pdf_at_half(5) - 1.5) < 1e-9

    def test_sqrt_growth(self):
        ratios = [beta_pdf_at_half(n) / math.sqrt(n) for n in range(20, 2001, 20)]
        assert all(0.7 < r < 0.85 for r in ratios)
        assert abs(ratios[-1] - math.sqrt(2 / math.pi)) < 1e-3

    def test_small_n(self):
        with pytest.raises(ValueError):
            beta_pdf_at_half(3)

    def test_fact_exp(self):
        x = np.linspace(-10, 10, 10_000)
        assert fact_exp_lower(x[x != 0]).all()
        assert not fact_exp_lower(0.0)

    def test_fact_arccos(self):
        assert fact_arccos_lower(np.linspace(0, 1, 10_000)).all()
        assert np.arccos(1.0) == np.sqrt(2 * (1 - 1.0))


class TestKernels:
    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(0, 10**6),
        st.integers(1, 130),
        st.integers(1, 9),
        st.integers(0, 3),
        st.sampled_from([0.25, 0.5, 1.0]),
        st.integers(-1, 3),
    )
    def test_backends_agree(self, seed, m, n, s, frac, stop):
        if "cython" not in kernels.backends():
            pytest.skip("extension not built")
        B = bernoulli_matrix(m, n, 0.3, seed)
        bits, w = column_bits(B)
        s = min(s, n)
        a = kernels.backends()["cython"].max_covered(bits, w, s, frac, stop)
        b = _kernels_py.max_covered(bits, w, s, frac, stop)
        assert tuple(a[1]) == tuple(b[1]) and a[0] == b[0]

    def test_column_bits(self):
        B = np.zeros((70, 2), dtype=np.uint8)
        B[[0, 65], 0] = 1
        bits, w = column_bits(B)
        assert bits.shape == (2, 2)
        assert bits[0, 0] == 1 and bits[0, 1] == 2
        assert w.tolist() == [2, 0]


def test_format_report():
    assert format_report("ruff", True, 0, 1) == "PASS ruff 0 1"
    assert format_report("x", False, 0.123456789, 0.5) == "FAIL x 0.123457 0.5"


def test_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, OBCS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import obcs; print(obcs.KERNELS)"], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
