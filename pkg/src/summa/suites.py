"""Named verification suites: each runs one module's invariant battery.

A suite is deterministic for a given seed.  Every check returns
``(passed, witness)``; an exception inside a check counts as a failure with
the exception text as its witness, so a broken build reports instead of
crashing.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import dyadic, martingales, measures, norms, paths, sums
from .errors import SummaError
from .norms import INF, ExactComplex
from .report import Report

SUITES: dict[str, list] = {name: [] for name in ("inequalities", "measures", "dyadic", "martingales", "paths")}


def check(suite: str):
    def deco(fn):
        SUITES[suite].append(fn)
        return fn
    return deco


def _q(rng, lo=-9, hi=9, den=6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _first_failure(cases):
    """cases yields (ok, witness); returns (all_ok, first failing witness)."""
    n = 0
    for ok, w in cases:
        n += 1
        if not ok:
            return False, w
    return True, {"cases": n}


# ---------------------------------------------------------------------------
# inequalities: norms and unordered sums


@check("inequalities")
def lp_monotonicity(rng):
    def cases():
        for _ in range(200):
            v = [_q(rng) for _ in range(rng.randint(1, 6))]
            ps = sorted(rng.sample([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)], 2))
            a, b = norms.lp_norm(v, ps[0]), norms.lp_norm(v, ps[1])
            yield norms.leq(b, a) and norms.leq(norms.lp_norm(v, INF), b), (v, ps)
    return _first_failure(cases())


@check("inequalities")
def holder(rng):
    def cases():
        for _ in range(200):
            n = rng.randint(1, 6)
            f, g = [_q(rng) for _ in range(n)], [_q(rng) for _ in range(n)]
            p = rng.choice([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3), INF])
            q = INF if p == 1 else Fraction(1) if p == INF else p / (p - 1)
            yield norms.holder_verify(f, g, p, q).holds, (f, g, p)
    return _first_failure(cases())


@check("inequalities")
def interpolation(rng):
    def cases():
        for _ in range(200):
            f = [_q(rng) for _ in range(rng.randint(1, 6))]
            p, r, q = sorted(rng.sample([Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), Fraction(4)], 3))
            yield norms.lp_interpolate(f, p, q, r).holds, (f, p, q, r)
    return _first_failure(cases())


@check("inequalities")
def p_norm_subadditivity(rng):
    def cases():
        for _ in range(200):
            a, b = abs(_q(rng)), abs(_q(rng))
            p = rng.choice([Fraction(1, 3), Fraction(1, 2), Fraction(1)])
            yield norms.p_subadditivity_check(a, b, p), (a, b, p)
    return _first_failure(cases())


def _random_family(rng, complex_terms=False, vector=False):
    m = rng.randint(1, 8)
    if complex_terms:
        return sums.IndexedFamily.finite([ExactComplex(_q(rng), _q(rng)) for _ in range(m)])
    if vector:
        norm = rng.choice(["l1", "l2", "linf"])
        return sums.IndexedFamily.finite([(_q(rng), _q(rng)) for _ in range(m)], norm)
    return sums.IndexedFamily.finite([_q(rng) for _ in range(m)])


@check("inequalities")
def norm_sandwich(rng):
    def cases():
        for _ in range(60):
            F = _random_family(rng, vector=rng.random() < 0.5)
            y, z = sums.y_norm(F), sums.z_norm(F)
            yield norms.leq(y, z) and norms.leq(z, 2 * y), (F.terms, y, z)
    return _first_failure(cases())


@check("inequalities")
def complex_sandwich(rng):
    def cases():
        for _ in range(30):
            F = _random_family(rng, complex_terms=True)
            z = sums.z_norm(F)
            for K in (4, 8):
                w = sums.w_norm(F, K)
                yield norms.leq(z, w) and norms.leq(w, 2 * z), (F.terms, K, z, w)
    return _first_failure(cases())


@check("inequalities")
def scalar_collapse(rng):
    def cases():
        for _ in range(60):
            F = _random_family(rng)
            total = sum(abs(t) for t in F.terms)
            y = sums.y_norm(F)
            yield sums.z_norm(F) == total and total <= 2 * y, (F.terms,)
    return _first_failure(cases())


@check("inequalities")
def bounded_multipliers(rng):
    def cases():
        for _ in range(40):
            F = _random_family(rng, vector=True)
            a = [Fraction(rng.randint(0, 4), 4) for _ in F.terms]
            G = sums.IndexedFamily.finite([norms.scale(c, t) for c, t in zip(a, F.terms)], F.norm)
            yield norms.leq(sums.y_norm(G), sums.y_norm(F)), (F.terms, a)
    return _first_failure(cases())


@check("inequalities")
def rearrangement_invariance(rng):
    def cases():
        for _ in range(40):
            F = _random_family(rng)
            perm = list(range(len(F)))
            rng.shuffle(perm)
            yield sums.rearrangement_test(F, perm).agree, (F.terms, perm)
    return _first_failure(cases())


@check("inequalities")
def cauchy_implies_sign_uniform(rng):
    def cases():
        for ratio in ("1/2", "1/3", "-1/2"):
            F = sums.geometric(ratio, horizon=40)
            for eps in (Fraction(1, 10), Fraction(1, 100)):
                if sums.generalized_cauchy_check(F, eps).passed:
                    yield sums.sign_uniform_convergence_check(F, 2 * eps, window=8).passed, (ratio, eps)
    return _first_failure(cases())


@check("inequalities")
def cauchy_examples(rng):
    v1 = sums.generalized_cauchy_check(sums.geometric("1/2"), Fraction(1, 10))
    v2 = sums.generalized_cauchy_check(sums.alternating_harmonic(2000), Fraction(1, 2))
    ok = v1.passed and v1.prefix == 4 and v2.status == "fail" and v2.witness_norm >= Fraction(1, 2)
    return ok, {"geometric_prefix": v1.prefix, "harmonic_status": v2.status}


# ---------------------------------------------------------------------------
# measures


def _random_measure(rng, n=None, kind="real"):
    n = n or rng.randint(1, 7)
    if kind == "vector":
        return measures.SignedMeasure.from_weights([(_q(rng), _q(rng)) for _ in range(n)],
                                                   rng.choice(["l1", "l2", "linf"]))
    ws = [_q(rng) if rng.random() > 0.2 else Fraction(0) for _ in range(n)]
    return measures.SignedMeasure.from_weights(ws)


def _nonneg(rng, n, zeros=True):
    ws = [Fraction(rng.randint(0 if zeros else 1, 5), rng.randint(1, 4)) for _ in range(n)]
    return measures.SignedMeasure.from_weights(ws)


@check("measures")
def jordan_reconstruction(rng):
    def cases():
        for _ in range(100):
            mu = _random_measure(rng)
            p, m = measures.jordan_decompose(mu)
            ok = all(a - b == w and a + b == abs(w) and a >= 0 and b >= 0
                     for a, b, w in zip(p.weights, m.weights, mu.weights))
            yield ok, mu.weights
    return _first_failure(cases())


@check("measures")
def hahn_consistency(rng):
    def cases():
        for _ in range(30):
            mu = _random_measure(rng, rng.randint(1, 8))
            P, Q = measures.hahn_decompose(mu)
            p, m = measures.jordan_decompose(mu)
            for A in measures.all_subsets(len(mu)):
                A = set(A)
                ok = (p.measure(A) == mu.measure(A & P) and m.measure(A) == -mu.measure(A & Q)
                      and mu.measure(A & P) >= 0 and mu.measure(A & Q) <= 0)
                if not ok:
                    yield False, (mu.weights, sorted(A))
                    return
            yield True, None
    return _first_failure(cases())


@check("measures")
def two_set_formula(rng):
    def cases():
        for _ in range(40):
            mu = _random_measure(rng, kind="real" if rng.random() < 0.7 else "vector")
            A = [i for i in range(len(mu)) if rng.random() < 0.7]
            if mu.kind == "real":
                yield measures.total_variation(mu, A=A) == measures.two_set_variation(mu, A), (mu.weights, A)
            else:
                # vectors: every two-set sum is dominated by the variation
                yield norms.leq(measures.two_set_variation(mu, A), measures.total_variation(mu, A=A)), (mu.weights, A)
    return _first_failure(cases())


@check("measures")
def variation_minimality(rng):
    def cases():
        for _ in range(60):
            mu = _random_measure(rng)
            slack = [Fraction(rng.randint(0, 3), 2) for _ in range(len(mu))]
            rho = [abs(w) + s for w, s in zip(mu.weights, slack)]
            A = [i for i in range(len(mu)) if rng.random() < 0.6]
            yield measures.total_variation(mu, A=A) <= sum((rho[i] for i in A), Fraction(0)), (mu.weights, rho)
    return _first_failure(cases())


@check("measures")
def radon_nikodym_round_trip(rng):
    def cases():
        for _ in range(60):
            n = rng.randint(1, 7)
            nu = _nonneg(rng, n)
            mu = measures.SignedMeasure.from_weights(
                [_q(rng) if nu.weights[i] else Fraction(0) for i in range(n)])
            h = measures.radon_nikodym(mu, nu)
            ok = all(measures.reconstruct(h, nu, A) == mu.measure(A) for A in measures.all_subsets(n))
            var = measures.variation_measure(mu)
            ok &= measures.total_variation(mu) == sum((abs(h[i]) * nu.weights[i] for i in range(n)), Fraction(0))
            if any(var.weights):
                g = measures.radon_nikodym(mu, var)
                ok &= all(abs(x) in (0, 1) for x in g)
            yield ok, (mu.weights, nu.weights)
    return _first_failure(cases())


@check("measures")
def lebesgue_split(rng):
    def cases():
        for _ in range(60):
            n = rng.randint(1, 7)
            nu, mu = _nonneg(rng, n), _random_measure(rng, n)
            ac, sing, h = measures.lebesgue_decompose(mu, nu)
            ok = all(a + s == w for a, s, w in zip(ac.weights, sing.weights, mu.weights))
            ok &= all(nu.weights[i] == 0 for i in range(n) if sing.weights[i] != 0)
            ok &= all(measures.reconstruct(h, nu, [i]) == ac.weights[i] for i in range(n))
            yield ok, (mu.weights, nu.weights)
    return _first_failure(cases())


@check("measures")
def symdiff_semimetric(rng):
    def cases():
        for _ in range(5):
            n = rng.randint(1, 5)
            mu = _nonneg(rng, n)
            subsets = [set(s) for s in measures.all_subsets(n)]
            for A, B, C in itertools.product(subsets, repeat=3):
                d = measures.symdiff_distance
                if d(mu, A, B) != d(mu, B, A) or d(mu, A, C) > d(mu, A, B) + d(mu, B, C):
                    yield False, (mu.weights, A, B, C)
                    return
            yield True, None
    return _first_failure(cases())


@check("measures")
def vector_domination(rng):
    def cases():
        for _ in range(60):
            mu = _random_measure(rng, kind="vector")
            A = [i for i in range(len(mu)) if rng.random() < 0.6]
            yield norms.leq(norms.norm_of(mu.measure(A), mu.norm), measures.total_variation(mu, A=A)), mu.weights
    return _first_failure(cases())


# ---------------------------------------------------------------------------
# dyadic


def _random_step(rng, level):
    return dyadic.DyadicStep(level, tuple(_q(rng) for _ in range(1 << level)))


def random_dyadic_measure(rng, max_level=3, max_atoms=3):
    lvl = rng.randint(0, max_level)
    dens = dyadic.DyadicStep(lvl, tuple(Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(1 << lvl)))
    atoms = {}
    for _ in range(rng.randint(0, max_atoms)):
        k = rng.randint(0, 4)
        atoms[Fraction(rng.randrange(1 << k), 1 << k)] = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    return dyadic.DyadicMeasure(dens, tuple(atoms.items()))


@check("dyadic")
def averaging_projections(rng):
    def cases():
        for _ in range(40):
            f = _random_step(rng, rng.randint(0, 5))
            j, l = rng.randint(0, f.level), rng.randint(0, f.level)
            lhs = dyadic.dyadic_average(dyadic.dyadic_average(f, max(j, l)), min(j, l))
            ok = lhs == dyadic.dyadic_average(f, min(j, l))
            ok &= dyadic.dyadic_average(f, l).integral() == f.integral()
            A = dyadic.dyadic_average(f, l)
            ok &= all(norms.leq(A.lp_norm(p), f.lp_norm(p)) for p in (1, 2, INF))
            yield ok, (f.values, j, l)
    return _first_failure(cases())


@check("dyadic")
def rademacher_truncation(rng):
    def cases():
        for _ in range(30):
            m = rng.randint(1, 6)
            a = [_q(rng) for _ in range(m)]
            S = dyadic.rademacher_sum(a, m)
            n = rng.randint(0, m)
            yield dyadic.dyadic_average(S, n) == dyadic.rademacher_sum(a[:n], n) if n else \
                dyadic.dyadic_average(S, 0).values == (Fraction(0),), (a, n)
    return _first_failure(cases())


@check("dyadic")
def dyadic_weak_type(rng):
    def cases():
        for _ in range(60):
            mu = random_dyadic_measure(rng)
            for t in (Fraction(1, 2), Fraction(1), Fraction(3), Fraction(8)):
                rep = dyadic.maximal_level_sets(mu, t, 5)
                yield rep.certified, (dyadic_measure_repr(mu), t)
    return _first_failure(cases())


def dyadic_measure_repr(mu):
    return {"density": mu.density.values, "atoms": mu.atoms}


@check("dyadic")
def hl_constant_two(rng):
    def cases():
        for _ in range(15):
            mu = random_dyadic_measure(rng, max_level=2, max_atoms=2)
            t = rng.choice([Fraction(1), Fraction(2), Fraction(4)])
            rep = dyadic.hl_maximal_weak_type(mu, t, 4)
            yield rep.holds and rep.lower <= rep.upper, (dyadic_measure_repr(mu), t)
    return _first_failure(cases())


@check("dyadic")
def hl_constant_one_fails(rng):
    mu = dyadic.DyadicMeasure.point_masses([(Fraction(1, 4), Fraction(1, 2)), (Fraction(3, 4), Fraction(1, 2))])
    rep = dyadic.hl_maximal_weak_type(mu, 4, 6)
    return (not rep.constant_one_holds) and rep.holds, {"lower": rep.lower, "mu_over_t": Fraction(1, 4)}


@check("dyadic")
def covering_multiplicity(rng):
    def cases():
        for _ in range(200):
            ivs = []
            for _ in range(rng.randint(1, 8)):
                a = Fraction(rng.randint(0, 20), 2)
                ivs.append((a, a + Fraction(rng.randint(1, 10), 2)))
            out = dyadic.covering_reduce(ivs)
            ok = dyadic.max_multiplicity(out) <= 2 and dyadic._union(out) == dyadic._union(ivs)
            yield ok, ivs
    return _first_failure(cases())


@check("dyadic")
def rademacher_products(rng):
    def cases():
        L = 6
        for m in range(1, L + 1):
            for ls in itertools.combinations(range(1, L + 1), m):
                prod = dyadic.DyadicStep.constant(1, L)
                for l in ls:
                    prod = prod * dyadic.rademacher(l, L)
                yield prod.integral() == 0, ls
    return _first_failure(cases())


@check("dyadic")
def walsh_orthonormal(rng):
    n = 4
    subsets = [s for m in range(n + 1) for s in itertools.combinations(range(1, n + 1), m)]
    ws = [dyadic.walsh(s, n) for s in subsets]
    for i, a in enumerate(ws):
        for j, b in enumerate(ws):
            if a.inner(b) != (1 if i == j else 0):
                return False, (subsets[i], subsets[j])
    return True, {"dimension": len(ws)}


@check("dyadic")
def khintchine_exact(rng):
    def cases():
        for _ in range(60):
            a = [_q(rng) for _ in range(rng.randint(1, 8))]
            m4 = dyadic.moment_by_enumeration(a, 4)
            s2 = sum(x * x for x in a)
            closed = 3 * s2 * s2 - 2 * sum(x ** 4 for x in a)
            ok = m4 == dyadic.moment_by_multinomial(a, 4) == closed
            ok &= dyadic.moment_by_enumeration(a, 2) == s2
            S = dyadic.rademacher_sum(a)
            ok &= S.lp_norm(INF) == sum(abs(x) for x in a)
            yield ok, a
    return _first_failure(cases())


@check("dyadic")
def khintchine_lower(rng):
    def cases():
        for _ in range(30):
            a = [_q(rng) for _ in range(rng.randint(1, 7))]
            if not any(a):
                continue
            p = rng.choice([Fraction(1), Fraction(1, 2), Fraction(3, 2)])
            yield dyadic.khintchine_report(a, p).holds, (a, p)
    return _first_failure(cases())


@check("dyadic")
def lacunary_orthogonality(rng):
    def cases():
        for _ in range(30):
            m = rng.randint(1, 5)
            freqs = sorted(rng.sample(range(1, 40), m))
            coeffs = [ExactComplex(_q(rng), _q(rng)) for _ in range(m)]
            yield dyadic.lacunary_moment(freqs, coeffs, 1) == sum(c.abs2() for c in coeffs), (freqs,)
    return _first_failure(cases())


# ---------------------------------------------------------------------------
# martingales


def _random_sequence(rng, filt=None, dim=1):
    filt = filt or martingales.Filtration.random(rng, rng.randint(2, 12), rng.randint(2, 4))
    N = len(filt)

    def val():
        return _q(rng) if dim == 1 else tuple(_q(rng) for _ in range(dim))

    f = [val() for _ in range(filt.n_atoms)]
    f = filt.expand(N, [f[c[0]] for c in filt.stage(N).cells])
    return martingales.AdaptedSequence.of_terminal(filt, f)


@check("martingales")
def tower_and_contraction(rng):
    def cases():
        for _ in range(40):
            seq = _random_sequence(rng)
            filt, N = seq.filtration, len(seq)
            f = seq.f(N)
            j, k = sorted(rng.sample(range(1, N + 1), 2)) if N > 1 else (1, 1)
            ce = martingales.conditional_expectation
            ok = ce(filt, ce(filt, f, k), j) == ce(filt, f, j)
            g = ce(filt, f, j)
            for p in (1, 2):
                ok &= martingales.lp_integral(filt, [abs(x) for x in g], p) <= \
                    martingales.lp_integral(filt, [abs(x) for x in f], p)
            ok &= max(abs(x) for x in g) <= max(abs(x) for x in f)
            yield ok, (f, j, k)
    return _first_failure(cases())


@check("martingales")
def conditional_jensen_and_product(rng):
    def cases():
        for _ in range(40):
            seq = _random_sequence(rng)
            filt, N = seq.filtration, len(seq)
            f = seq.f(N)
            j = rng.randint(1, N)
            ce = martingales.conditional_expectation
            Ef = ce(filt, f, j)
            ok = True
            for phi in (abs, lambda x: x * x, lambda x: max(x, Fraction(0))):
                ok &= all(phi(a) <= b for a, b in zip(Ef, ce(filt, [phi(x) for x in f], j)))
            g = seq.f(j)
            ok &= ce(filt, [x * y for x, y in zip(f, g)], j) == tuple(x * y for x, y in zip(Ef, g))
            yield ok, (f, j)
    return _first_failure(cases())


@check("martingales")
def vector_contraction(rng):
    def cases():
        for _ in range(30):
            d = rng.randint(2, 4)
            seq = _random_sequence(rng, dim=d)
            filt, N = seq.filtration, len(seq)
            f = seq.f(N)
            j = rng.randint(1, N)
            for nm in (norms.L1, norms.L2, norms.LINF):
                Ef = martingales.conditional_expectation(filt, f, j)
                En = martingales.conditional_expectation(filt, [nm(x) for x in f], j)
                if not all(norms.leq(nm(a), b) for a, b in zip(Ef, En)):
                    yield False, (f, j, nm.label())
                    return
            yield classify_kind(seq.with_values([seq.norms(i) for i in range(1, N + 1)])) in \
                ("martingale", "submartingale"), f
    return _first_failure(cases())


def classify_kind(seq):
    return martingales.classify(seq).kind


@check("martingales")
def orthogonality(rng):
    def cases():
        for _ in range(40):
            seq = _random_sequence(rng)
            filt, N = seq.filtration, len(seq)
            inner = lambda u, v: filt.integral([a * b for a, b in zip(u, v)])
            diffs = [tuple(a - b for a, b in zip(seq.f(j + 1), seq.f(j))) for j in range(1, N)]
            ok = all(inner(seq.f(1), d) == 0 for d in diffs)
            ok &= all(inner(diffs[a], diffs[b]) == 0 for a in range(len(diffs)) for b in range(a + 1, len(diffs)))
            ok &= inner(seq.f(N), seq.f(N)) == inner(seq.f(1), seq.f(1)) + sum((inner(d, d) for d in diffs), Fraction(0))
            yield ok, seq.values
    return _first_failure(cases())


@check("martingales")
def doob_round_trip(rng):
    def cases():
        for _ in range(40):
            seq = _random_sequence(rng)
            sub = seq.with_values([tuple(abs(x) for x in seq.f(j)) for j in range(1, len(seq) + 1)])
            m, A = martingales.doob_decompose(sub)
            ok = martingales.classify(m).kind == "martingale"
            ok &= all(tuple(a + b for a, b in zip(m.f(j), A.f(j))) == sub.f(j) for j in range(1, len(sub) + 1))
            ok &= all(x == 0 for x in A.f(1))
            ok &= all(a <= b for j in range(1, len(A)) for a, b in zip(A.f(j), A.f(j + 1)))
            ok &= all(A.filtration.stage(j - 1).is_function_measurable(A.f(j)) for j in range(2, len(A) + 1))
            means = {m.filtration.integral(m.f(j)) for j in range(1, len(m) + 1)}
            ok &= len(means) == 1
            yield ok, sub.values
    return _first_failure(cases())


@check("martingales")
def stopping(rng):
    def cases():
        for _ in range(40):
            seq = _random_sequence(rng)
            N = len(seq)
            t = Fraction(rng.randint(0, 6), 2)
            tau = martingales.first_passage(seq, t).truncate(N)
            stopped = martingales.stopped_sequence(seq, tau)
            ok = martingales.classify(stopped).kind == "martingale"
            ok &= martingales.optional_stopping_check(seq, tau).holds
            ftau = martingales.stop(seq, tau).values
            ok &= seq.filtration.integral(ftau) == seq.filtration.integral(seq.f(1))
            ok &= martingales.weak_type_check(stopped, rng.choice([Fraction(1, 2), Fraction(1), Fraction(2)])).holds
            yield ok, (seq.values, t)
    return _first_failure(cases())


@check("martingales")
def doob_lp(rng):
    def cases():
        for _ in range(60):
            depth = rng.randint(1, 4)
            seq = martingales.random_dyadic_martingale(rng, depth, lo=0, hi=8)
            if rng.random() < 0.5:
                seq = seq.with_values([tuple(abs(x - 1) for x in seq.f(j)) for j in range(1, len(seq) + 1)])
            if martingales.classify(seq).kind not in ("martingale", "submartingale"):
                continue
            p = rng.choice([2, Fraction(3, 2)])
            rep = martingales.doob_lp_check(seq, p)
            yield rep.holds and rep.certified, (seq.values, p)
    return _first_failure(cases())


@check("martingales")
def experiments(rng):
    for name in sorted(martingales.EXPERIMENTS):
        params = {"doubling": {"depth": 5, "seed": rng.randint(0, 10 ** 6)},
                  "slln_average": {"n": 64},
                  "dirac_singular": {"stages": 8},
                  "unit_square": {"J": 3}}[name]
        table = martingales.run_experiment(name, **params)
        if not table.ok:
            return False, {"experiment": name, "checks": table.checks}
    return True, {"experiments": len(martingales.EXPERIMENTS)}


# ---------------------------------------------------------------------------
# paths


def _refinement(rng, f):
    pts = set(f.knots)
    for x, y in zip(f.knots, f.knots[1:]):
        for _ in range(rng.randint(0, 2)):
            pts.add(x + (y - x) * Fraction(rng.randint(1, 7), 8))
    return sorted(pts)


@check("paths")
def variation_identities(rng):
    def cases():
        for _ in range(200):
            f = paths.random_polyline(rng, rng.randint(1, 6))
            P, N, lam = paths.pos_neg_variation(f)
            ok = P + N == lam == paths.path_length(f) and P - N == f.points[-1] - f.points[0]
            for r in f.knots[1:-1]:
                ok &= paths.path_length(f, a=f.a, b=r) + paths.path_length(f, a=r, b=f.b) == lam
            mono = paths.Polyline(f.knots, tuple(sorted(f.points)))
            ok &= paths.path_length(mono) == mono.points[-1] - mono.points[0]
            yield ok, (f.knots, f.points)
    return _first_failure(cases())


@check("paths")
def refinement_monotonicity(rng):
    def cases():
        for _ in range(60):
            f = paths.random_polyline(rng, rng.randint(1, 5), dim=2, norm=rng.choice(["l1", "linf"]))
            coarse = sorted(set([f.a, f.b] + rng.sample(list(f.knots), min(2, len(f.knots)))))
            fine = _refinement(rng, f)
            lam = paths.path_length(f)
            a, b = paths.partition_sum(f, coarse), paths.partition_sum(f, fine)
            end = f.norm(norms.sub(f.points[-1], f.points[0]))
            yield a <= b == lam and end <= lam, (f.knots, f.points)
    return _first_failure(cases())


@check("paths")
def lipschitz_bounds(rng):
    def cases():
        for _ in range(60):
            f = paths.random_polyline(rng, rng.randint(1, 5), dim=2, norm="l1")
            slopes = [f.norm(norms.sub(q, p)) / (t - s)
                      for (s, p), (t, q) in zip(zip(f.knots, f.points), zip(f.knots[1:], f.points[1:]))]
            k = max(slopes)
            lam = paths.path_length(f)
            proj = f.map_points(lambda v: v[0])
            yield lam <= k * (f.b - f.a) and paths.path_length(proj) <= lam, (f.knots, f.points)
    return _first_failure(cases())


@check("paths")
def measure_additivity(rng):
    def cases():
        for _ in range(100):
            f = paths.random_polyline(rng, rng.randint(1, 5), interp=rng.choice(paths.MODES))
            nu = paths.path_measure(f)
            c = rng.choice(list(f.knots[1:-1]) or [(f.a + f.b) / 2])
            left_closed = rng.random() < 0.5
            whole = paths.Interval(f.a, f.b)
            parts = [paths.Interval(f.a, c, True, not left_closed), paths.Interval(c, f.b, left_closed, True)]
            ok = nu(whole) == nu(parts) == f.points[-1] - f.points[0]
            ok &= nu.dominated(parts[0]) and nu.dominated(whole)
            yield ok, (f.knots, f.points, f.interp, c)
    return _first_failure(cases())


@check("paths")
def stieltjes_bound(rng):
    def cases():
        for _ in range(20):
            f = paths.random_polyline(rng, rng.randint(1, 3), dim=2, interp=rng.choice(paths.MODES))
            phi = paths.PiecewisePolynomial.polynomial((_q(rng), _q(rng), _q(rng)), f.a, f.b)
            r1 = paths.riemann_stieltjes(phi, f, Fraction(1, 8))
            r2 = paths.riemann_stieltjes(phi, f, Fraction(1, 16))
            lam = paths.path_length(f)
            diff = f.norm(norms.sub(r1.value, r2.value))
            ok = norms.leq(f.norm(r1.value), phi.sup_abs(f.a, f.b) * lam)
            ok &= norms.leq(diff, 2 * r1.bound)
            yield ok, (f.knots, f.points, phi.polys)
    return _first_failure(cases())


@check("paths")
def equality_chain(rng):
    def cases():
        for _ in range(40):
            d = (_q(rng), _q(rng))
            if d == (0, 0):
                continue
            weights = [Fraction(rng.randint(0, 5), rng.randint(1, 3)) for _ in range(rng.randint(1, 5))]
            p0 = (_q(rng), _q(rng))
            pts, cur = [p0], p0
            for w in weights:
                cur = norms.add(cur, norms.scale(w, d))
                pts.append(cur)
            f = paths.Polyline(tuple(range(len(pts))), tuple(pts))
            rep = paths.equality_chain_check(f)
            yield (not rep.endpoint_equals_length) or (rep.collinear_in_order and rep.affine_reconstruction), pts
    return _first_failure(cases())


@check("paths")
def convexity(rng):
    rows = paths.uniform_convexity_modulus("l2", [0.5, 1.0, 1.5], G=1024, scan=128)
    ok = all(abs(r.delta - r.oracle) < 1e-4 for r in rows)
    ok &= not paths.strict_convexity_witness("l1", G=1024).strictly_convex
    ok &= not paths.strict_convexity_witness("linf", G=1024).strictly_convex
    ok &= paths.strict_convexity_witness("l2", G=1024).strictly_convex
    return ok, {"modulus": [(r.eps, r.delta) for r in rows]}


@check("paths")
def averaged_convexity(rng):
    def cases():
        for _ in range(200):
            eps = rng.choice([0.25, 0.5, 1.0])
            eta = paths.l2_eta(eps)
            m = rng.randint(1, 4)
            base = [rng.gauss(0, 1), rng.gauss(0, 1)]
            vs = []
            for _ in range(m):
                v = [base[0] + rng.gauss(0, 0.05), base[1] + rng.gauss(0, 0.05)]
                n = (v[0] ** 2 + v[1] ** 2) ** 0.5
                vs.append(tuple(Fraction(c / n).limit_denominator(10 ** 6) * Fraction(999, 1000) for c in v))
            raw = [rng.randint(1, 5) for _ in range(m)]
            ws = [Fraction(r, sum(raw)) for r in raw]
            yield paths.averaged_convexity_check("l2", vs, ws, eps, eta).holds, (vs, ws, eps)
    return _first_failure(cases())


# ---------------------------------------------------------------------------


def run_suite(name: str, seed: int = 0) -> Report:
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise SummaError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    report = Report(["suite", name, f"seed={seed}"])
    for n in names:
        for fn in SUITES[n]:
            rng = random.Random(f"{seed}:{n}:{fn.__name__}")
            try:
                ok, witness = fn(rng)
            except Exception as exc:  # a crashing check is a failing check
                ok, witness = False, {"error": f"{type(exc).__name__}: {exc}"}
            report.check(f"{n}.{fn.__name__}", ok, None if ok else witness)
    report.payload = {"suite": name, "seed": seed, "checks": len(report.checks),
                      "failed": sum(not c.passed for c in report.checks)}
    return report
