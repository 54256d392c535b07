"""Acceptance runs: one test per criterion, each at its stated scale.

Every test draws from a fixed seed so a failure reproduces.  The summary
section at the end of the pytest run lists one PASS/FAIL line per criterion.
"""

import itertools
import math
import random
import subprocess
import sys
import warnings
from fractions import Fraction as F

import pytest

from summa import dyadic, martingales, measures, paths, sums
from summa.dyadic import DyadicMeasure, DyadicStep
from summa.martingales import AdaptedSequence, Filtration
from summa.norms import ExactComplex, NormDescriptor

criterion = pytest.mark.criterion


def q(rng, lo=-9, hi=9, den=6):
    return F(rng.randint(lo, hi), rng.randint(1, den))


def sign_sum_moments(a, p):
    """E|sum eps_j a_j|^p by walking all 2^n sign patterns in plain Python."""
    D = math.lcm(*(x.denominator for x in a)) if a else 1
    ints = [int(x * D) for x in a]
    tot = 0
    for signs in itertools.product((1, -1), repeat=len(ints)):
        tot += abs(sum(s * x for s, x in zip(signs, ints))) ** p
    return F(tot, 2 ** len(ints) * D ** p)


# ---------------------------------------------------------------------------


@criterion(1, "Khintchine fourth moment: enumeration = multinomial = closed form")
def test_khintchine_exactness():
    rng = random.Random(101)
    for _ in range(1000):
        a = [q(rng) for _ in range(rng.randint(1, 12))]
        s2 = sum(x * x for x in a)
        closed = 3 * s2 ** 2 - 2 * sum(x ** 4 for x in a)
        enum = dyadic.moment_by_enumeration(a, 4)
        assert enum == dyadic.moment_by_multinomial(a, 4) == closed == dyadic.rademacher_moment(a, 4), a
        if len(a) <= 8:
            assert sign_sum_moments(a, 4) == closed, a


@criterion(2, "Rademacher sums: L2 norm squared and sup norm identities")
def test_rademacher_l2_linf():
    rng = random.Random(102)
    cases = [[q(rng) for _ in range(rng.randint(1, 12))] for _ in range(300)]
    cases += [[F(1)] * 12, [F(0)] * 12, [F(-1, 3)] + [F(0)] * 11]
    for a in cases:
        f = dyadic.rademacher_sum(a)
        assert f.power_integral(2) == sum(x * x for x in a)
        assert f.lp_norm(math.inf) == sum(abs(x) for x in a)


def random_measure(rng):
    level = rng.randint(0, 3)
    dens = DyadicStep(level, tuple(F(rng.randint(0, 4), rng.randint(1, 3)) for _ in range(1 << level)))
    atoms = {}
    for _ in range(rng.randint(0, 3)):
        L = rng.randint(0, 5)
        atoms[F(rng.randrange(1 << L), 1 << L)] = F(rng.randint(1, 4), rng.randint(1, 4))
    return DyadicMeasure(dens, tuple(atoms.items()))


def cell_masses(mu, level):
    """Independent mu of every level-`level` dyadic interval."""
    d = mu.density
    if d.level <= level:
        rep = 1 << (level - d.level)
        out = [v / (1 << level) for v in d.values for _ in range(rep)]
    else:
        w = 1 << (d.level - level)
        out = [sum(d.values[j * w:(j + 1) * w], F(0)) / (1 << d.level) for j in range(1 << level)]
    for loc, m in mu.atoms:
        out[int(loc * (1 << level))] += m
    return out


@criterion(3, "Dyadic maximal weak type is strict; grid HL level sets obey the factor-2 bound")
def test_dyadic_weak_type():
    rng = random.Random(103)
    depth, hl_depth = 5, 3
    ts = [F(1, 4), F(1, 2), F(1), F(3, 2), F(2), F(4), F(8)]
    nonempty = 0
    for _ in range(1000):
        mu = random_measure(rng)
        per_level = [cell_masses(mu, k) for k in range(depth + 1)]
        finest = per_level[depth]
        star = [max(per_level[k][j >> (depth - k)] * (1 << k) for k in range(depth + 1))
                for j in range(1 << depth)]
        for t in ts:
            rep = dyadic.maximal_level_sets(mu, t, depth)
            cells = [j for j in range(1 << depth) if star[j] > t]
            assert rep.lebesgue == F(len(cells), 1 << depth)
            assert rep.mass == sum((finest[j] for j in cells), F(0))
            if cells:
                nonempty += 1
                assert t * rep.lebesgue < rep.mass and rep.certified
            hl = dyadic.hl_maximal_weak_type(mu, t, hl_depth)
            assert hl.lower <= 2 * mu.total() / t and hl.lower <= hl.upper
    assert nonempty > 1000


def subset_sums(w):
    """Sum of w over every subset, indexed by bitmask."""
    out = [0] * (1 << len(w))
    for mask in range(1, 1 << len(w)):
        low = mask & -mask
        out[mask] = out[mask ^ low] + w[low.bit_length() - 1]
    return out


@criterion(4, "Jordan, Hahn, Radon-Nikodym and Lebesgue identities on full subset lattices")
def test_measure_decompositions():
    rng = random.Random(104)
    for n in range(1, 13):
        for _ in range(3):
            v = [q(rng) if rng.random() < 0.8 else F(0) for _ in range(n)]
            base = [F(rng.randint(1, 5), rng.randint(1, 3)) if rng.random() < 0.7 else F(0) for _ in range(n)]
            mu, nu = measures.SignedMeasure.from_weights(v), measures.SignedMeasure.from_weights(base)
            p, m = measures.jordan_decompose(mu)
            P, Q = measures.hahn_decompose(mu)
            var = measures.variation_measure(mu)
            assert P | Q == set(range(n)) and not P & Q
            ac, sing, h = measures.lebesgue_decompose(mu, nu)
            cont = measures.SignedMeasure.from_weights([x if b else F(0) for x, b in zip(v, base)])
            rn = measures.radon_nikodym(cont, nu)
            mu_s, var_s = subset_sums(v), subset_sums([abs(x) for x in v])
            for mask in range(1 << n):
                A = {i for i in range(n) if mask >> i & 1}
                assert mu.measure(A) == mu_s[mask]
                assert p.measure(A) - m.measure(A) == mu_s[mask]
                assert p.measure(A) + m.measure(A) == var.measure(A) == var_s[mask]
                assert p.measure(A) == mu.measure(A & P) and m.measure(A) == -mu.measure(A & Q)
                assert ac.measure(A) + sing.measure(A) == mu_s[mask]
                assert ac.measure(A) == sum((h[i] * base[i] for i in A), F(0))
                assert measures.reconstruct(rn, nu, A) == cont.measure(A)
            assert all(base[i] == 0 for i, s in enumerate(sing.weights) if s)
            lattice = range(1 << n) if n <= 10 else rng.sample(range(1 << n), 48)
            for mask in lattice:
                A = {i for i in range(n) if mask >> i & 1}
                assert measures.total_variation(mu, A=A) == measures.two_set_variation(mu, A) == var_s[mask]


def cell_average(filt, f, j):
    """Independent E(f | B_j) from the cell weights."""
    out = list(f)
    for c in filt.stage(j).cells:
        mass = sum(filt.weights[i] for i in c)
        avg = sum(filt.weights[i] * f[i] for i in c) / mass
        for i in c:
            out[i] = avg
    return tuple(out)


@criterion(5, "Martingale identities on random filtrations (<= 5 stages, <= 32 atoms)")
def test_martingale_identities():
    rng = random.Random(105)
    ce = martingales.conditional_expectation
    for _ in range(1000):
        filt = Filtration.random(rng, rng.randint(2, 32), rng.randint(2, 5))
        N = len(filt)
        raw = [q(rng) for _ in range(filt.n_atoms)]
        fN = filt.expand(N, [raw[c[0]] for c in filt.stage(N).cells])
        seq = AdaptedSequence.of_terminal(filt, fN)
        E = lambda g: sum((w * x for w, x in zip(filt.weights, g)), F(0))
        j, k = sorted(rng.sample(range(1, N + 1), 2))
        # tower and the independent cell average
        assert ce(filt, fN, j) == cell_average(filt, fN, j) == seq.f(j)
        assert ce(filt, ce(filt, fN, k), j) == ce(filt, fN, j)
        # conditional Jensen for |x| and x^2, product rule with a stage-j factor
        Ef = seq.f(j)
        for phi in (abs, lambda x: x * x):
            assert all(phi(a) <= b for a, b in zip(Ef, ce(filt, [phi(x) for x in fN], j)))
        g = seq.f(j)
        assert ce(filt, [x * y for x, y in zip(fN, g)], j) == tuple(x * y for x, y in zip(Ef, g))
        # orthogonal differences and Pythagoras
        d = [tuple(a - b for a, b in zip(seq.f(i + 1), seq.f(i))) for i in range(1, N)]
        inner = lambda u, v: E([a * b for a, b in zip(u, v)])
        assert all(inner(seq.f(1), x) == 0 for x in d)
        assert all(inner(d[a], d[b]) == 0 for a in range(len(d)) for b in range(a + 1, len(d)))
        assert inner(fN, fN) == inner(seq.f(1), seq.f(1)) + sum((inner(x, x) for x in d), F(0))
        # Doob decomposition of the submartingale |f_j|
        sub = seq.with_values([tuple(abs(x) for x in seq.f(i)) for i in range(1, N + 1)])
        mart, A = martingales.doob_decompose(sub)
        assert martingales.classify(mart).kind == "martingale"
        assert all(tuple(a + b for a, b in zip(mart.f(i), A.f(i))) == sub.f(i) for i in range(1, N + 1))
        assert all(x == 0 for x in A.f(1))
        assert all(a <= b for i in range(1, N) for a, b in zip(A.f(i), A.f(i + 1)))
        assert all(filt.stage(i - 1).is_function_measurable(A.f(i)) for i in range(2, N + 1))
        # stopped sequence and optional stopping
        tau = martingales.first_passage(seq, F(rng.randint(0, 8), 2)).truncate(N)
        assert martingales.classify(martingales.stopped_sequence(seq, tau)).kind == "martingale"
        assert martingales.optional_stopping_check(seq, tau).holds
        ftau = martingales.stop(seq, tau).values
        assert E(ftau) == E(seq.f(1))
        for n, c in tau.stopped_algebra():
            assert sum(filt.weights[i] * ftau[i] for i in c) == sum(filt.weights[i] * fN[i] for i in c)


@criterion(6, "Doob L^p maximal bound at p = 2 and p = 3/2 on nonnegative submartingales")
def test_doob_lp():
    rng = random.Random(106)
    seen = {2: 0, F(3, 2): 0}
    for i in range(10000):
        depth = rng.randint(1, 3)
        seq = martingales.random_dyadic_martingale(rng, depth, lo=0, hi=8)
        if i % 2:
            c = F(rng.randint(0, 8), rng.randint(1, 4))
            seq = seq.with_values([tuple(abs(x - c) for x in seq.f(j)) for j in range(1, len(seq) + 1)])
        p = 2 if i % 4 < 2 else F(3, 2)
        rep = martingales.doob_lp_check(seq, p)
        assert rep.holds and rep.certified, seq.values
        filt, last = seq.filtration, seq.f(len(seq))
        star = [max(seq.f(j)[a] for j in range(1, len(seq) + 1)) for a in range(filt.n_atoms)]
        if p == 2:
            lhs = sum(w * x * x for w, x in zip(filt.weights, star))
            assert lhs == rep.lhs and lhs <= 4 * sum(w * x * x for w, x in zip(filt.weights, last))
        else:
            lhs = sum(float(w) * float(x) ** 1.5 for w, x in zip(filt.weights, star))
            rhs = 3 * math.sqrt(2) * sum(float(w) * float(x) ** 1.5 for w, x in zip(filt.weights, last))
            assert lhs <= rhs * (1 + 1e-12) and math.isclose(float(rep.lhs), lhs, rel_tol=1e-12, abs_tol=1e-15)
        seen[p] += 1
    assert seen[2] == seen[F(3, 2)] == 5000


@criterion(7, "Singular martingale: unit L1 norm at every stage, pointwise zero eventually")
def test_dirac_singular():
    table = martingales.run_experiment("dirac_singular", stages=8)
    assert table.ok and table.checks["l1_norm_one"] and table.checks["eventually_zero"]
    assert [r[0] for r in table.rows] == list(range(1, 9))
    assert all(r[1] == 1 for r in table.rows)
    samples = [F(0), F(1, 2), F(3, 4), F(7, 8)]
    first = table.columns.index("f(0)")
    for row in table.rows:
        j = row[0]
        for s, x in enumerate(samples):
            k = next(k for k in range(1, 9) if x < 1 - F(1, 2 ** k))
            if j > k:
                assert row[first + s] == 0


@criterion(8, "Norm sandwiches y <= z <= 2y and z <= w(K) <= 2z for K in {4, 8, 16}")
def test_norm_sandwiches():
    rng = random.Random(108)
    for m in range(1, 13):
        for _ in range(12):
            real = [q(rng) for _ in range(m)]
            fam = sums.IndexedFamily.finite(real)
            y, z = sums.y_norm(fam), sums.z_norm(fam)
            assert z == sum(abs(x) for x in real)
            pos = sum(x for x in real if x > 0)
            assert y == max(pos, -sum(x for x in real if x < 0))
            assert y <= z <= 2 * y
            for name in ("l1", "linf"):
                vecs = [(q(rng), q(rng)) for _ in range(m)]
                fv = sums.IndexedFamily.finite(vecs, name)
                y, z = sums.y_norm(fv), sums.z_norm(fv)
                assert y <= z <= 2 * y
                if m <= 8:
                    assert z == sums.z_norm_bruteforce(fv)
            cplx = [ExactComplex(q(rng), q(rng)) for _ in range(m)]
            fc = sums.IndexedFamily.finite(cplx)
            z = float(sums.z_norm(fc))
            for K in (4, 8, 16):
                w = float(sums.w_norm(fc, K))
                assert z <= w * (1 + 1e-12) + 1e-12 and w <= 2 * z * (1 + 1e-12) + 1e-12


@criterion(9, "Path variation identities on random rational polylines")
def test_path_identities():
    rng = random.Random(109)
    for _ in range(10000):
        f = paths.random_polyline(rng, rng.randint(1, 8), interp=rng.choice(paths.MODES))
        P, N, lam = paths.pos_neg_variation(f)
        steps = [b - a for a, b in zip(f.points, f.points[1:])]
        assert P == sum(s for s in steps if s > 0) and N == -sum(s for s in steps if s < 0)
        assert P + N == lam == paths.path_length(f)
        assert P - N == f.points[-1] - f.points[0]
        for r in f.knots[1:-1]:
            assert paths.path_length(f, a=f.a, b=r) + paths.path_length(f, a=r, b=f.b) == lam
        mono = paths.Polyline(f.knots, tuple(sorted(f.points)), f.interp)
        assert paths.path_length(mono) == mono.points[-1] - mono.points[0]


def lacunary_oracle(freqs, coeffs, k):
    """Group the m-fold products by frequency sum; the moment is the sum of |c_s|^2."""
    m = 1 << (k - 1)
    groups = {}
    for idx in itertools.product(range(len(freqs)), repeat=m):
        re, im = F(1), F(0)
        for i in idx:
            a, b = coeffs[i]
            re, im = re * a - im * b, re * b + im * a
        s = sum(freqs[i] for i in idx)
        gr, gi = groups.get(s, (F(0), F(0)))
        groups[s] = (gr + re, gi + im)
    return sum((a * a + b * b for a, b in groups.values()), F(0))


@criterion(10, "Lacunary moments against an independent frequency-matching oracle")
def test_lacunary_moment():
    assert dyadic.lacunary_moment((1, 2), (1, 1), k=2) == 6
    rng = random.Random(110)
    for _ in range(100):
        m = rng.randint(1, 6)
        freqs = sorted(rng.sample(range(1, 51), m))
        pairs = [(q(rng, -4, 4, 3), q(rng, -4, 4, 3) if rng.random() < 0.5 else F(0)) for _ in range(m)]
        k = rng.randint(1, 3)
        coeffs = [ExactComplex(a, b) for a, b in pairs]
        assert dyadic.lacunary_moment(freqs, coeffs, k) == lacunary_oracle(freqs, pairs, k), (freqs, pairs, k)


@criterion(11, "Euclidean convexity modulus at G = 10^4; flat-norm strict convexity witnesses")
def test_convexity_modulus():
    rows = paths.uniform_convexity_modulus("l2", [0.5, 1.0, 1.5], dim=2, G=10 ** 4)
    for r in rows:
        assert abs(r.delta - (1 - math.sqrt(1 - r.eps ** 2 / 4))) < 1e-4
    for name in ("l1", "linf"):
        res = paths.strict_convexity_witness(name)
        nd = NormDescriptor.parse(name)
        assert not res.strictly_convex and res.exact
        mid = tuple((a + b) / 2 for a, b in zip(res.v, res.w))
        assert res.v != res.w and nd(res.v) == nd(res.w) == nd(mid) == 1
    assert paths.strict_convexity_witness("l2").strictly_convex


@criterion(12, "Suite report for seed 1 is byte-identical across runs")
def test_determinism():
    cmd = [sys.executable, "-m", "summa.cli", "suite", "all", "--seed", "1"]
    first = subprocess.run(cmd, capture_output=True, timeout=120)
    second = subprocess.run(cmd, capture_output=True, timeout=120)
    assert first.returncode == second.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout and first.stdout
