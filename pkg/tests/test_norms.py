import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from summa import norms
from summa.errors import DomainError
from summa.norms import INF, ExactComplex, NormDescriptor

from strategies import nonneg, positive, rationals, vectors


class TestLpNorm:
    def test_pythagorean_triple(self):
        assert norms.lp_norm((3, 4), 2) == 5

    def test_l1(self):
        assert norms.lp_norm((1, 1), 1) == 2

    def test_sup(self):
        assert norms.lp_norm((3, -4, 0), INF) == 4

    def test_irrational_goes_float(self):
        v = norms.lp_norm((1, 1), 2)
        assert isinstance(v, float) and math.isclose(v, math.sqrt(2))

    def test_quasinorm_below_one(self):
        assert norms.lp_norm((1, 1), F(1, 2)) == 4

    @pytest.mark.parametrize("p", [0, -1, "-1/2"])
    def test_nonpositive_p_rejected(self, p):
        with pytest.raises(DomainError):
            norms.lp_norm((1, 2), p)

    def test_complex_entries(self):
        assert norms.lp_norm([ExactComplex(3, 4)], 1) == 5

    @given(vectors(), st.sampled_from([F(1, 2), F(1), F(3, 2), F(2), F(3)]))
    def test_monotone_decreasing_in_p(self, v, p):
        assert norms.leq(norms.lp_norm(v, 2 * p), norms.lp_norm(v, p))
        assert norms.leq(norms.lp_norm(v, INF), norms.lp_norm(v, p))

    @given(vectors(), rationals)
    def test_homogeneous(self, v, c):
        lhs = norms.lp_norm([c * x for x in v], 1)
        assert lhs == abs(c) * norms.lp_norm(v, 1)


class TestHolder:
    def test_parallel_equality(self):
        r = norms.holder_verify((1, 1), (1, 1), 2, 2)
        assert (r.lhs, r.rhs, r.holds, r.equality) == (2, 2, True, True)

    @pytest.mark.parametrize("p,q", [(1, INF), (2, 2), (3, F(3, 2)), (INF, 1)])
    def test_disjoint_supports(self, p, q):
        r = norms.holder_verify((1, 0), (0, 1), p, q)
        assert r.lhs == 0 and r.holds

    def test_cauchy_schwarz_exact(self):
        r = norms.holder_verify((1, 2), (2, 1), 2, 2)
        assert (r.lhs, r.rhs, r.holds, r.equality) == (4, 5, True, False)

    def test_non_conjugate_rejected(self):
        with pytest.raises(DomainError):
            norms.holder_verify((1,), (1,), 2, 3)

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            norms.holder_verify((1, 2), (1,), 2, 2)

    @given(st.integers(1, 6).flatmap(lambda n: st.tuples(vectors(n, n), vectors(n, n))),
           st.sampled_from([(1, INF), (2, 2), (F(3, 2), 3), (4, F(4, 3)), (INF, 1)]))
    def test_always_holds(self, fg, pq):
        assert norms.holder_verify(*fg, *pq).holds


class TestInterpolation:
    def test_constant_vector_equality(self):
        r = norms.lp_interpolate((1, 1, 1, 1), 1, INF, 2)
        assert (r.t, r.lhs, r.rhs, r.holds) == (F(1, 2), 2, 2, True)

    @pytest.mark.parametrize("p,q,r", [(1, INF, 2), (F(1, 2), 4, 2), (2, 4, 3)])
    def test_single_atom_equality(self, p, q, r):
        rep = norms.lp_interpolate((5, 0, 0), p, q, r)
        assert norms.close(rep.lhs, rep.rhs)

    def test_two_three_four(self):
        rep = norms.lp_interpolate((2, 1), 2, 4, 3)
        assert rep.t == F(1, 3) and rep.holds
        assert math.isclose(float(rep.lhs), 9 ** (1 / 3))
        assert math.isclose(float(rep.rhs), 5 ** (1 / 6) * 17 ** (1 / 6))

    def test_order_required(self):
        with pytest.raises(DomainError):
            norms.lp_interpolate((1,), 2, 1, 3)

    @given(vectors(), st.sampled_from([(F(1, 2), 4, 1), (1, INF, 2), (1, 3, 2), (2, INF, 4)]))
    def test_log_convexity(self, v, pqr):
        p, q, r = pqr
        assert norms.lp_interpolate(v, p, q, r).holds


class TestSubadditivity:
    def test_equality_at_one(self):
        assert norms.p_subadditivity_check(1, 1, 1)

    def test_half(self):
        assert norms.p_subadditivity_check(1, 1, F(1, 2))

    def test_zero(self):
        assert norms.p_subadditivity_check(0, 5, 0.3)

    def test_p_above_one_rejected(self):
        with pytest.raises(DomainError):
            norms.p_subadditivity_check(1, 1, 2)

    @given(nonneg, nonneg, st.sampled_from([F(1, 3), F(1, 2), F(2, 3), 1, 0.7]))
    def test_holds(self, a, b, p):
        assert norms.p_subadditivity_check(a, b, p)


class TestExactRoots:
    @given(st.integers(0, 10 ** 30), st.integers(1, 5))
    def test_iroot_floor(self, k, n):
        r = norms.iroot(k, n)
        assert r ** n <= k < (r + 1) ** n

    @given(positive, st.integers(2, 5))
    def test_root_bounds_bracket(self, q, n):
        lo, hi = norms.root_bounds(q, n, 40)
        assert lo ** n <= q <= hi ** n and hi - lo <= F(1, 2 ** 30)

    def test_exact_root_rational(self):
        assert norms.exact_root(F(9, 4), 2) == F(3, 2)
        assert norms.exact_root(F(2), 2) is None


class TestComplex:
    def test_arithmetic(self):
        z = ExactComplex(1, 2) * ExactComplex(3, -1)
        assert (z.re, z.im) == (5, 5)

    def test_modulus_exact_for_triples(self):
        assert norms.modulus(ExactComplex(3, 4)) == 5


class TestTolerance:
    def test_context_restores(self):
        before = norms.get_tolerance()
        with norms.tolerance(1e-3):
            assert norms.close(1.0, 1.0005)
        assert norms.get_tolerance() == before
        assert not norms.close(1.0, 1.0005)

    def test_exact_comparisons_ignore_tolerance(self):
        with norms.tolerance(1.0):
            assert not norms.close(F(1), F(3, 2))


class TestDescriptor:
    @pytest.mark.parametrize("text,vec,expected", [
        ("l1", (3, -4), 7), ("linf", (3, -4), 4), ("l2", (3, -4), 5), ("lp:3/2", (0, 4), 4),
    ])
    def test_parse_and_evaluate(self, text, vec, expected):
        assert NormDescriptor.parse(text)(vec) == expected

    def test_weighted(self):
        nd = NormDescriptor.parse({"kind": "weighted", "p": 1, "weights": ["2", "3"]})
        assert nd((1, -1)) == 5

    def test_round_trip(self):
        nd = NormDescriptor.parse("l1.5")
        assert NormDescriptor.parse(nd.to_json()) == nd

    @given(vectors(2, 2), vectors(2, 2), st.sampled_from(["l1", "l2", "linf", "l1.5"]))
    def test_triangle(self, u, v, name):
        nd = NormDescriptor.parse(name)
        s = tuple(a + b for a, b in zip(u, v))
        assert norms.leq(nd(s), float(nd(tuple(u))) + float(nd(tuple(v))))
