import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from summa import sums
from summa.errors import DomainError, GuardExceeded
from summa.norms import INF, ExactComplex, NormDescriptor
from summa.sums import IndexedFamily

from strategies import rationals, vec2, vectors


def fam(terms, norm=None):
    return IndexedFamily.finite(terms, norm)


def brute_y(terms, norm):
    """Independent oracle: every nonempty subset, summed in plain Python."""
    best = F(0)
    for m in range(1, len(terms) + 1):
        for B in itertools.combinations(terms, m):
            if isinstance(terms[0], tuple):
                s = tuple(sum(c) for c in zip(*B))
            else:
                s = sum(B)
            best = max(best, norm(s) if isinstance(s, tuple) else abs(s))
    return best


class TestSubsetSum:
    def test_real(self):
        assert sums.subset_sum(fam([1, -2, 3]), [0, 2]) == 4

    def test_empty(self):
        assert sums.subset_sum(fam([1, -2, 3]), []) == 0

    def test_vector(self):
        assert sums.subset_sum(fam([(1, 0), (0, 1)]), [0, 1]) == (1, 1)

    def test_index_out_of_range(self):
        with pytest.raises(DomainError):
            sums.subset_sum(fam([1]), [3])


class TestYNorm:
    def test_mixed_signs(self):
        assert sums.y_norm(fam([1, -2, 3])) == 4

    def test_singleton(self):
        assert sums.y_norm(fam([F(-7, 3)])) == F(7, 3)

    def test_all_positive(self):
        assert sums.y_norm(fam([1, 1, 1])) == 3

    def test_witness(self):
        val, B = sums.y_norm(fam([1, -2, 3]), with_witness=True)
        assert val == 4 and B == (0, 2)

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            sums.y_norm(fam([1] * 30))

    def test_guard_override(self):
        with pytest.raises(GuardExceeded):
            sums.y_norm(fam([1] * 8), guard=4)

    @given(vectors(1, 7))
    def test_matches_bruteforce_scalar(self, v):
        assert sums.y_norm(fam(v)) == brute_y(v, abs)

    @given(st.lists(vec2(), min_size=1, max_size=6), st.sampled_from(["l1", "linf"]))
    def test_matches_bruteforce_vector(self, v, name):
        nd = NormDescriptor.parse(name)
        assert sums.y_norm(fam(v, name)) == brute_y(v, nd)


class TestZNorm:
    def test_signs_aligned(self):
        assert sums.z_norm(fam([1, -2, 3])) == 6

    def test_singleton(self):
        assert sums.z_norm(fam([(3, 4)])) == 5

    def test_linf_basis(self):
        assert sums.z_norm(fam([(1, 0), (0, 1)], "linf")) == 1

    @given(st.lists(vec2(), min_size=1, max_size=6), st.sampled_from(["l1", "l2", "linf"]))
    def test_fast_matches_bruteforce(self, v, name):
        a, b = sums.z_norm(fam(v, name)), sums.z_norm_bruteforce(fam(v, name))
        assert math.isclose(float(a), float(b), rel_tol=1e-12, abs_tol=1e-12)

    @given(vectors(1, 8))
    def test_scalar_is_l1(self, v):
        assert sums.z_norm(fam(v)) == sum(abs(x) for x in v)


class TestWNorm:
    def test_phase_alignment(self):
        assert sums.w_norm(fam([ExactComplex(1, 0), ExactComplex(0, 1)]), 4) == 2

    @pytest.mark.parametrize("K", [2, 4, 8])
    def test_singleton(self, K):
        assert math.isclose(float(sums.w_norm(fam([ExactComplex(3, 4)]), K)), 5)

    def test_reduces_to_z(self):
        assert sums.w_norm(fam([1, -1]), 2) == 2

    @given(st.lists(st.builds(ExactComplex, rationals, rationals), min_size=1, max_size=5),
           st.sampled_from([2, 4, 8]))
    def test_fast_matches_bruteforce(self, v, K):
        a, b = sums.w_norm(fam(v), K), sums.w_norm_bruteforce(fam(v), K)
        assert math.isclose(float(a), float(b), rel_tol=1e-9, abs_tol=1e-9)


class TestSandwiches:
    @given(vectors(1, 8))
    def test_scalar_y_bound(self, v):
        assert sum(abs(x) for x in v) <= 2 * sums.y_norm(fam(v))

    @given(st.lists(st.builds(ExactComplex, rationals, rationals), min_size=1, max_size=6))
    def test_complex_y_bound(self, v):
        assert float(sum(abs(complex(z)) for z in v)) <= 4 * float(sums.y_norm(fam(v))) + 1e-9

    @given(st.lists(vec2(), min_size=1, max_size=6), st.sampled_from(["l1", "l2", "linf"]))
    def test_y_z_sandwich(self, v, name):
        F_ = fam(v, name)
        y, z = float(sums.y_norm(F_)), float(sums.z_norm(F_))
        assert y <= z + 1e-12 and z <= 2 * y + 1e-12

    @given(st.lists(st.builds(ExactComplex, rationals, rationals), min_size=1, max_size=5),
           st.sampled_from([4, 8, 16]))
    def test_z_w_sandwich(self, v, K):
        F_ = fam(v)
        z, w = float(sums.z_norm(F_)), float(sums.w_norm(F_, K))
        assert z <= w + 1e-9 and w <= 2 * z + 1e-9

    @given(st.lists(vec2(), min_size=1, max_size=6),
           st.lists(st.fractions(0, 1, max_denominator=5), min_size=6, max_size=6))
    def test_bounded_multipliers(self, v, a):
        G = fam([(c * x, c * y) for c, (x, y) in zip(a, v)], "l1")
        assert sums.y_norm(G) <= sums.y_norm(fam(v, "l1"))


class TestCauchy:
    def test_geometric_prefix_four(self):
        v = sums.generalized_cauchy_check(sums.geometric("1/2"), F(1, 10))
        assert v.passed and v.prefix == 4 and v.bound == F(1, 16)

    def test_alternating_harmonic_fails_with_witness(self):
        v = sums.generalized_cauchy_check(sums.alternating_harmonic(2000), F(1, 2))
        assert v.status == "fail"
        terms = [F((-1) ** (i + 1), i + 1) for i in v.witness]
        assert len({t > 0 for t in terms}) == 1 and abs(sum(terms)) >= F(1, 2)
        assert v.witness_norm == abs(sum(terms))

    def test_all_zero(self):
        v = sums.generalized_cauchy_check(fam([0, 0, 0]), F(1, 10))
        assert v.passed and v.prefix == 0

    def test_eps_must_be_positive(self):
        with pytest.raises(DomainError):
            sums.generalized_cauchy_check(fam([1]), 0)

    def test_harmonic_short_horizon_inconclusive(self):
        v = sums.generalized_cauchy_check(sums.harmonic(3), 10)
        assert v.status == "inconclusive"


class TestEvaluation:
    def test_geometric(self):
        s = sums.unordered_sum_eval(sums.geometric("1/2"), F(1, 10 ** 6))
        assert abs(s - 1) < F(1, 10 ** 6)

    def test_zero(self):
        assert sums.unordered_sum_eval(sums.zero(), F(1, 100)) == 0

    def test_singleton(self):
        assert sums.unordered_sum_eval(fam([5]), F(1, 100)) == 5

    def test_divergent_raises(self):
        with pytest.raises(DomainError):
            sums.unordered_sum_eval(sums.alternating_harmonic(500), F(1, 2))


class TestRearrangement:
    def test_finite(self):
        r = sums.rearrangement_test(fam([1, -2, 3]), [2, 0, 1])
        assert r.sum == r.permuted_sum == 2 and r.agree

    def test_adjacent_swaps_geometric(self):
        N = 64
        perm = [i ^ 1 for i in range(N)]
        assert sums.rearrangement_test(sums.geometric("1/2", horizon=N), perm, F(1, 10 ** 6)).agree

    @given(vectors(1, 8), st.randoms(use_true_random=False))
    def test_identity_and_random(self, v, rnd):
        perm = list(range(len(v)))
        assert sums.rearrangement_test(fam(v), perm).agree
        rnd.shuffle(perm)
        assert sums.rearrangement_test(fam(v), perm).agree

    def test_divergent_witness_is_a_permutation(self):
        N = 400
        r = sums.rearrangement_test(sums.alternating_harmonic(N), list(range(N)), F(1, 4))
        assert not r.agree and sorted(r.divergent_order) == list(range(N)) and r.oscillations >= 2

    def test_bad_permutation(self):
        with pytest.raises(DomainError):
            sums.rearrangement_test(fam([1, 2]), [0, 0])


class TestSignUniform:
    def test_geometric_vector(self):
        v = sums.sign_uniform_convergence_check(sums.geometric("1/2", direction=(1, 0)), F(1, 10))
        assert v.passed and v.start == 4

    def test_scaled_basis(self):
        for eps in (F(1, 2), F(1, 4)):
            assert sums.sign_uniform_convergence_check(sums.scaled_basis(32), eps, window=8).passed

    def test_all_zero(self):
        v = sums.sign_uniform_convergence_check(sums.zero(), F(1, 10))
        assert v.passed and v.start == 0

    def test_window_guard(self):
        with pytest.raises(GuardExceeded):
            sums.sign_uniform_convergence_check(sums.zero(), F(1, 10), window=30)

    @pytest.mark.parametrize("ratio", ["1/2", "-1/3", "2/3"])
    @pytest.mark.parametrize("eps", [F(1, 10), F(1, 1000)])
    def test_cauchy_implies_sign_uniform(self, ratio, eps):
        F_ = sums.geometric(ratio, horizon=48)
        if sums.generalized_cauchy_check(F_, eps).passed:
            assert sums.sign_uniform_convergence_check(F_, 2 * eps, window=10).passed


class TestFamilies:
    def test_named(self):
        F_ = sums.named_family("geometric", 10, ratio="1/3")
        assert len(F_) == 10 and F_.term(0) == F(1, 3)

    def test_unknown(self):
        with pytest.raises(DomainError):
            sums.named_family("nope")

    def test_ratio_bound(self):
        with pytest.raises(DomainError):
            sums.geometric(1)

    def test_truncated_is_finite(self):
        T = sums.geometric("1/2", horizon=5).truncated()
        assert T.kind == "finite" and T.terms[-1] == F(1, 32)

    def test_tail_bound_is_sound(self):
        G = sums.geometric("1/2", horizon=200)
        for n in (0, 3, 10):
            assert sum(G.prefix(200)[n:]) <= G.tail_abs(n)
