"""Dyadic analysis on [0, 1).

Step functions live on the dyadic intervals ``[j 2^-l, (j+1) 2^-l)`` of one
level and carry exact rational values.  Measures are a nonnegative step
density plus finitely many point masses at dyadic rationals; a mass sitting
on an endpoint belongs to the interval it opens (left-closed convention).
"""

from __future__ import annotations

import math
import warnings
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, GuardExceeded
from .norms import INF, ExactComplex, as_scalar, exact_root, exponent, is_exact, real_power

ENUMERATION_GUARD = 20


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class DyadicStep:
    """Function on [0,1) constant on each dyadic interval of a given level."""

    level: int
    values: tuple

    def __post_init__(self):
        if self.level < 0:
            raise DomainError("level must be nonnegative")
        vals = tuple(as_scalar(v) for v in self.values)
        if len(vals) != 1 << self.level:
            raise DomainError(f"a level-{self.level} step needs {1 << self.level} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, c, level: int = 0) -> "DyadicStep":
        return cls(level, (as_scalar(c),) * (1 << level))

    @classmethod
    def indicator(cls, level: int, cells: Iterable[int], height=1) -> "DyadicStep":
        cells = set(cells)
        h = as_scalar(height)
        return cls(level, tuple(h if j in cells else Fraction(0) for j in range(1 << level)))

    def __len__(self):
        return len(self.values)

    def relevel(self, level: int) -> "DyadicStep":
        """The same function described at a finer level."""
        if level < self.level:
            raise DomainError("relevel only refines; use dyadic_average to coarsen")
        rep = 1 << (level - self.level)
        return DyadicStep(level, tuple(v for v in self.values for _ in range(rep)))

    def _common(self, other: "DyadicStep"):
        L = max(self.level, other.level)
        return self.relevel(L), other.relevel(L)

    def __add__(self, other):
        if not isinstance(other, DyadicStep):
            return DyadicStep(self.level, tuple(v + other for v in self.values))
        a, b = self._common(other)
        return DyadicStep(a.level, tuple(x + y for x, y in zip(a.values, b.values)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, other):
        if not isinstance(other, DyadicStep):
            return DyadicStep(self.level, tuple(v * other for v in self.values))
        a, b = self._common(other)
        return DyadicStep(a.level, tuple(x * y for x, y in zip(a.values, b.values)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DyadicStep):
            return NotImplemented
        a, b = self._common(other)
        return a.values == b.values

    def __hash__(self):
        return hash(self.values)

    def value_at(self, x) -> object:
        x = as_scalar(x)
        if not 0 <= x < 1:
            raise DomainError("x must lie in [0, 1)")
        return self.values[math.floor(x * len(self.values))]

    def integral(self):
        return sum(self.values, Fraction(0)) / len(self.values)

    def power_integral(self, p):
        """Integral of |f|^p (exact for integer p)."""
        return sum((real_power(abs(v), p) for v in self.values), Fraction(0)) / len(self.values)

    def lp_norm(self, p):
        p = exponent(p)
        if p == INF:
            return max(abs(v) for v in self.values)
        return real_power(self.power_integral(p), 1 / p)

    def inner(self, other: "DyadicStep"):
        return (self * other).integral()


def dyadic_average(f: DyadicStep, l: int) -> DyadicStep:
    """A_l(f): the mean of f over each dyadic interval of level l.

    A level finer than f's own returns f, resampled to that level.
    """
    if l < 0:
        raise DomainError(f"target level {l} must be nonnegative")
    if l >= f.level:
        return f.relevel(l)
    block = 1 << (f.level - l)
    vals = f.values
    return DyadicStep(l, tuple(sum(vals[j * block:(j + 1) * block], Fraction(0)) / block
                               for j in range(1 << l)))


# ---------------------------------------------------------------------------
# measures and maximal functions


@dataclass(frozen=True)
class DyadicMeasure:
    """Nonnegative step density plus point masses at dyadic rationals in [0,1)."""

    density: DyadicStep
    atoms: tuple = ()

    def __post_init__(self):
        if any(v < 0 for v in self.density.values):
            raise DomainError("density values must be nonnegative")
        atoms = []
        for loc, mass in self.atoms:
            loc, mass = Fraction(as_scalar(loc)), Fraction(as_scalar(mass))
            if not (0 <= loc < 1 and _is_dyadic(loc)):
                raise DomainError(f"atom location {loc} is not a dyadic rational in [0,1)")
            if mass <= 0:
                raise DomainError("atom masses must be positive")
            atoms.append((loc, mass))
        object.__setattr__(self, "atoms", tuple(sorted(atoms)))

    @classmethod
    def lebesgue(cls) -> "DyadicMeasure":
        return cls(DyadicStep.constant(1))

    @classmethod
    def point_masses(cls, atoms) -> "DyadicMeasure":
        return cls(DyadicStep.constant(0), tuple(atoms))

    def total(self) -> Fraction:
        return self.density.integral() + sum((m for _, m in self.atoms), Fraction(0))

    def level_masses(self, level: int) -> list[Fraction]:
        """mu of every dyadic interval of the given level."""
        d = self.density
        if d.level >= level:
            dens = dyadic_average(d, level).values
        else:
            dens = d.relevel(level).values
        size = Fraction(1, 1 << level)
        out = [v * size for v in dens]
        for loc, m in self.atoms:
            out[math.floor(loc * (1 << level))] += m
        return out

    def interval_mass(self, level: int, j: int) -> Fraction:
        return self.level_masses(level)[j]


def dyadic_maximal(mu: DyadicMeasure, depth: int) -> DyadicStep:
    """mu*_delta truncated to dyadic intervals of level <= depth.

    The value on a level-``depth`` cell is the largest ratio mu(I)/|I| over
    its dyadic ancestors I (including the cell itself).
    """
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    ratios = _ancestor_ratios(mu, depth)
    vals = []
    for j in range(1 << depth):
        vals.append(max(ratios[k][j >> (depth - k)] for k in range(depth + 1)))
    return DyadicStep(depth, tuple(vals))


def _ancestor_ratios(mu: DyadicMeasure, depth: int) -> list[list[Fraction]]:
    masses = [None] * (depth + 1)
    masses[depth] = mu.level_masses(depth)
    for k in range(depth - 1, -1, -1):
        child = masses[k + 1]
        masses[k] = [child[2 * j] + child[2 * j + 1] for j in range(1 << k)]
    return [[m * (1 << k) for m in masses[k]] for k in range(depth + 1)]


@dataclass(frozen=True)
class LevelSetReport:
    intervals: tuple         # maximal dyadic intervals as (level, j)
    lebesgue: Fraction
    mass: Fraction
    certified: bool          # |E_t| < mu(E_t)/t, or E_t empty

    def as_endpoints(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(j, 1 << k), Fraction(j + 1, 1 << k)) for k, j in self.intervals]


def maximal_level_sets(mu: DyadicMeasure, t, depth: int) -> LevelSetReport:
    """E_t = {mu*_delta > t} as a disjoint union of maximal dyadic intervals."""
    t = as_scalar(t)
    if not t > 0:
        raise DomainError("t must be positive")
    ratios = _ancestor_ratios(mu, depth)
    chosen = []
    covered: set[tuple[int, int]] = set()
    for k in range(depth + 1):
        for j in range(1 << k):
            if k and (k - 1, j >> 1) in covered:
                covered.add((k, j))
                continue
            if ratios[k][j] > t:
                chosen.append((k, j))
                covered.add((k, j))
    leb = sum((Fraction(1, 1 << k) for k, _ in chosen), Fraction(0))
    mass = sum((ratios[k][j] / (1 << k) for k, j in chosen), Fraction(0))
    ok = not chosen or t * leb < mass
    return LevelSetReport(tuple(chosen), leb, mass, ok)


def _union(intervals) -> list[tuple]:
    """Union of open intervals as a sorted list of disjoint open intervals."""
    out = []
    for a, b in sorted(intervals):
        if out and a < out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def max_multiplicity(intervals) -> int:
    """Largest number of the open intervals sharing a common point (exact sweep)."""
    events = []
    for a, b in intervals:
        events.append((a, 1))
        events.append((b, -1))
    # at equal coordinates, closings come first because the intervals are open
    events.sort(key=lambda e: (e[0], e[1]))
    best = cur = 0
    for _, d in events:
        cur += d
        best = max(best, cur)
    return best


def covering_reduce(intervals: Sequence[tuple]) -> list[tuple]:
    """Sublist with the same union in which no point lies in three intervals.

    Greedy sweep over each connected component of the union: start with the
    leftmost interval and repeatedly add, among the intervals overlapping the
    covered stretch, the one reaching furthest right.  Two chosen intervals
    that are not consecutive cannot meet, or the later one would have been
    chosen earlier.
    """
    ivs = [(as_scalar(a), as_scalar(b)) for a, b in intervals]
    if not ivs:
        raise DomainError("covering_reduce needs at least one interval")
    if any(not a < b for a, b in ivs):
        raise DomainError("intervals must satisfy a < b")
    order = sorted(range(len(ivs)), key=lambda i: (ivs[i][0], -ivs[i][1]))
    chosen: list[int] = []
    k = 0
    while k < len(order):
        first = order[k]
        chosen.append(first)
        reach = ivs[first][1]
        k += 1
        while True:
            best, best_b = None, reach
            m = k
            while m < len(order) and ivs[order[m]][0] < reach:
                if ivs[order[m]][1] > best_b:
                    best, best_b = order[m], ivs[order[m]][1]
                m += 1
            k = m
            if best is None:
                break
            chosen.append(best)
            reach = best_b
    result = [ivs[i] for i in chosen]
    assert _union(result) == _union(ivs) and max_multiplicity(result) <= 2
    return [intervals[i] for i in chosen]


@dataclass(frozen=True)
class WeakTypeReport:
    lower: Fraction          # measure of grid-detected part of E_t in [0,1)
    upper: Fraction          # measure of a grid superset of E_t in [0,1)
    bound: Fraction          # 2 mu(total) / t
    holds: bool              # lower <= bound
    constant_one_holds: bool  # lower <= mu(total) / t
    values: DyadicStep       # grid maximal function (lower bound) per cell


def hl_maximal_weak_type(mu: DyadicMeasure, t, depth: int) -> WeakTypeReport:
    """Grid version of the Hardy-Littlewood weak-type (1,1) estimate.

    Uses all open intervals whose endpoints are multiples of h = 2^-depth in
    [-h, 1+h].  Cells where some such interval has mu(I) > t|I| give a lower
    bound for |E_t|; an open interval I with mu(I) > t|I| sits inside a grid
    interval J with mu(J) > t(|J| - 2h), which gives the upper bound.
    """
    t = as_scalar(t)
    if not t > 0:
        raise DomainError("t must be positive")
    G = 1 << depth
    h = Fraction(1, G)
    ends = list(range(-1, G + 2))
    M = len(ends)
    dens = mu.level_masses(depth) if not mu.atoms else \
        DyadicMeasure(mu.density).level_masses(depth)
    cum = [Fraction(0)]
    for v in dens:
        cum.append(cum[-1] + v)

    def cum_at(e):
        return cum[min(max(e, 0), G)]

    locs = [loc for loc, _ in mu.atoms]
    acc = [Fraction(0)]
    for _, m in mu.atoms:
        acc.append(acc[-1] + m)

    def atoms_inside(a, b):
        # atoms with a*h < loc < b*h
        lo = bisect_left(locs, a * h)
        while lo < len(locs) and locs[lo] <= a * h:
            lo += 1
        hi = bisect_left(locs, b * h)
        return acc[hi] - acc[lo] if hi > lo else Fraction(0)

    mass = [[None] * M for _ in range(M)]
    for ia in range(M):
        for ib in range(ia + 1, M):
            a, b = ends[ia], ends[ib]
            mass[ia][ib] = cum_at(b) - cum_at(a) + atoms_inside(a, b)

    # best[ia][ib]: max ratio over grid intervals containing (a, b)
    best = [[Fraction(0)] * M for _ in range(M)]
    for width in range(M - 1, 0, -1):
        for ia in range(0, M - width):
            ib = ia + width
            r = mass[ia][ib] / ((ib - ia) * h)
            cands = [r]
            if ia > 0:
                cands.append(best[ia - 1][ib])
            if ib < M - 1:
                cands.append(best[ia][ib + 1])
            best[ia][ib] = max(cands)
    values = tuple(best[j + 1][j + 2] for j in range(G))   # cell j spans ends j..j+1
    lower = sum(1 for v in values if v > t) * h

    reach = [None] * M
    for ia in range(M):
        for ib in range(M - 1, ia, -1):
            if mass[ia][ib] > 0 and mass[ia][ib] > t * ((ib - ia) * h - 2 * h):
                reach[ia] = ib
                break
    covered = [False] * G
    for ia, ib in enumerate(reach):
        if ib is None:
            continue
        for e in range(max(ends[ia], 0), min(ends[ib], G)):
            covered[e] = True
    upper = sum(covered) * h
    tot = mu.total()
    bound = 2 * tot / t
    return WeakTypeReport(lower, upper, bound, lower <= bound, lower <= tot / t,
                          DyadicStep(depth, values))


# ---------------------------------------------------------------------------
# Rademacher and Walsh systems


def rademacher(l: int, level: int | None = None) -> DyadicStep:
    """r_l: +1 on [j 2^-l, (j+1) 2^-l) for even j, -1 for odd j."""
    if l < 1:
        raise DomainError("Rademacher functions are indexed from 1")
    level = l if level is None else level
    if level < l:
        raise DomainError(f"r_{l} needs level >= {l}")
    shift = level - l
    return DyadicStep(level, tuple(Fraction(1) if (j >> shift) % 2 == 0 else Fraction(-1)
                                   for j in range(1 << level)))


def walsh(I: Iterable[int], level: int | None = None) -> DyadicStep:
    """w_I = product of r_l over l in I (w_empty = 1)."""
    I = sorted(set(I))
    level = (I[-1] if I else 0) if level is None else level
    if I and level < I[-1]:
        raise DomainError(f"w_I needs level >= {I[-1]}")
    out = DyadicStep.constant(1, level)
    for l in I:
        out = out * rademacher(l, level)
    return out


def rademacher_sum(a: Sequence, level: int | None = None) -> DyadicStep:
    """sum_l a_l r_l as a step function (level >= len(a))."""
    a = [as_scalar(x) for x in a]
    level = len(a) if level is None else level
    out = DyadicStep.constant(0, level)
    for l, c in enumerate(a, start=1):
        out = out + c * rademacher(l, level)
    return out


def _sign_sums(a: Sequence[Fraction]):
    """All 2^n values of sum eps_j a_j, scaled by the common denominator D."""
    D = 1
    for x in a:
        D = math.lcm(D, Fraction(x).denominator)
    ints = [int(Fraction(x) * D) for x in a]
    big = sum(abs(x) for x in ints)
    dtype = np.int64 if big < 2 ** 40 else object
    S = np.zeros(1, dtype=dtype)
    for x in ints:
        S = np.concatenate([S + x, S - x])
    return S, D


def moment_by_enumeration(a: Sequence, p) -> object:
    """E|sum eps_j a_j|^p averaged over all 2^n sign patterns."""
    a = [as_scalar(x) for x in a]
    if len(a) > ENUMERATION_GUARD:
        raise GuardExceeded(f"{len(a)} coefficients exceed the sign enumeration guard")
    if not all(is_exact(x) for x in a):
        S = np.array([0.0])
        for x in a:
            S = np.concatenate([S + float(x), S - float(x)])
        return float(np.mean(np.abs(S) ** float(p)))
    S, D = _sign_sums(a)
    p = exponent(p)
    if isinstance(p, Fraction) and p.denominator == 1:
        k = int(p)
        absS = np.abs(S)
        if S.dtype == object or int(absS.max(initial=0)) ** k * len(S) >= 2 ** 62:
            tot = sum(int(s) ** k for s in absS)
        else:
            tot = int((absS.astype(np.int64) ** k).sum())
        return Fraction(tot, len(S) * D ** k)
    return float(np.mean((np.abs(S.astype(float)) / D) ** float(p)))


def moment_by_multinomial(a: Sequence, p: int) -> Fraction:
    """E(sum eps_j a_j)^p for even p, keeping only even-multiplicity terms.

    Coefficient of x^p in prod_j sum_{e even} (a_j x)^e / e!, times p!.
    """
    p = int(p)
    if p % 2:
        raise DomainError("the multinomial expansion needs an even exponent")
    fact = [math.factorial(e) for e in range(p + 1)]
    poly = [Fraction(0)] * (p + 1)
    poly[0] = Fraction(1)
    for x in a:
        x = Fraction(as_scalar(x))
        powers = [x ** e / fact[e] for e in range(0, p + 1, 2)]
        new = [Fraction(0)] * (p + 1)
        for k in range(p + 1):
            if poly[k]:
                for idx, c in enumerate(powers):
                    e = 2 * idx
                    if k + e > p:
                        break
                    new[k + e] += poly[k] * c
        poly = new
    return poly[p] * fact[p]


def rademacher_moment(a: Sequence, p=4):
    """E|sum eps_j a_j|^p, exact for integer p and rational coefficients.

    For even p both the sign enumeration (n <= 20) and the multinomial
    expansion are computed and must agree; larger n uses the expansion only.
    Odd or fractional p falls back to enumeration with a warning.
    """
    p = exponent(p)
    a = [as_scalar(x) for x in a]
    even = isinstance(p, Fraction) and p.denominator == 1 and int(p) % 2 == 0
    if even and all(is_exact(x) for x in a):
        multi = moment_by_multinomial(a, int(p))
        if len(a) <= ENUMERATION_GUARD:
            enum = moment_by_enumeration(a, p)
            if enum != multi:
                raise ArithmeticError(f"enumeration {enum} and expansion {multi} disagree")
        return multi
    warnings.warn(f"p={p} is not an even integer; using sign enumeration only", stacklevel=2)
    return moment_by_enumeration(a, p)


@dataclass(frozen=True)
class SignAverageReport:
    n: int
    p: object
    moment: object        # E|sum eps a|^p, or the sup norm when p = INF
    comparison: object    # (sum a^2)^(p/2), or (sum a^2)^(1/2) when p = INF
    ratio: object
    bound: object         # C(p)^p above (p >= 2) or C(p)^-p below (p < 2)
    holds: bool
    monotone: bool


def _double_factorial_odd(k: int) -> int:
    out = 1
    for m in range(1, 2 * k, 2):
        out *= m
    return out


def khintchine_constant(p) -> float:
    """C(p): an admissible constant for both Khintchine inequalities.

    For p >= 2 the even-moment bound ((2k-1)!!)^(1/2k) with 2k >= p; for
    p < 2 the interpolation constant 3^((2-p)/(2p)) built from C(4)^4 = 3.
    """
    p = exponent(p)
    if p == INF:
        return INF
    if p >= 2:
        k = math.ceil(p / 2)
        return _double_factorial_odd(k) ** (1 / (2 * k))
    return 3 ** ((2 - float(p)) / (2 * float(p)))


def _norm_ratio(a, q) -> float:
    s2 = float(sum(x * x for x in a))
    if q == INF:
        return float(sum(abs(x) for x in a)) / math.sqrt(s2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        m = rademacher_moment(a, q) if len(a) <= ENUMERATION_GUARD or int(q) % 2 == 0 else None
    return float(m) ** (1 / float(q)) / math.sqrt(s2)


def khintchine_report(a: Sequence, p=4) -> SignAverageReport:
    a = [as_scalar(x) for x in a]
    p = exponent(p)
    n = len(a)
    s2 = sum((x * x for x in a), Fraction(0))
    if p == INF:
        moment = sum((abs(x) for x in a), Fraction(0))
        if n <= ENUMERATION_GUARD and n:
            S, D = _sign_sums(a)
            assert Fraction(int(np.abs(S).max()), D) == moment
        comparison = real_power(s2, Fraction(1, 2))
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            moment = rademacher_moment(a, p)
        comparison = real_power(s2, p / 2)
    if not s2:
        return SignAverageReport(n, p, moment, comparison, None, None, True, True)
    ratio = moment / comparison if is_exact(moment) and is_exact(comparison) \
        else float(moment) / float(comparison)
    C = khintchine_constant(p)
    if p == INF:
        bound, holds = math.sqrt(n), float(ratio) <= math.sqrt(n) + 1e-12
    elif p >= 2:
        k = math.ceil(p / 2)
        bound = Fraction(_double_factorial_odd(k)) if 2 * k == p else C ** float(p)
        holds = ratio <= bound if is_exact(ratio) and is_exact(bound) else float(ratio) <= float(bound) + 1e-12
    else:
        bound = C ** (-float(p))
        holds = float(ratio) >= bound - 1e-12
    qs = sorted({Fraction(1), Fraction(2), Fraction(4)} | ({p} if p != INF else set()))
    rs = [_norm_ratio(a, q) for q in qs] + ([_norm_ratio(a, INF)] if p == INF else [])
    monotone = all(x <= y + 1e-9 for x, y in zip(rs, rs[1:]))
    return SignAverageReport(n, p, moment, comparison, ratio, bound, holds, monotone)


# ---------------------------------------------------------------------------
# lacunary series


def _check_lacunary_args(freqs, coeffs, k):
    freqs = [int(f) for f in freqs]
    if len(freqs) != len(coeffs):
        raise DomainError("one coefficient per frequency")
    if any(f <= 0 for f in freqs) or any(x >= y for x, y in zip(freqs, freqs[1:])):
        raise DomainError("frequencies must be strictly increasing positive integers")
    if len(freqs) > 12 or not 1 <= k <= 3:
        raise GuardExceeded("lacunary moments take at most 12 terms and 1 <= k <= 3")
    return freqs, [_exact_coeff(c) for c in coeffs]


def _exact_coeff(c):
    if isinstance(c, ExactComplex):
        return c
    if isinstance(c, complex):
        raise DomainError("lacunary coefficients must be exact")
    return ExactComplex(as_scalar(c))


def _power_coefficients(freqs, coeffs, m) -> dict:
    poly = {0: ExactComplex(1)}
    for _ in range(m):
        new: dict = {}
        for e, c in poly.items():
            for f, a in zip(freqs, coeffs):
                new[e + f] = new.get(e + f, ExactComplex(0)) + c * a
        poly = new
    return poly


def lacunary_moment(freqs: Sequence[int], coeffs: Sequence, k: int) -> Fraction:
    """||sum a_j z^(n_j)||_{2^k}^{2^k} on the unit circle, exactly.

    |f|^(2m) = f^m conj(f)^m with m = 2^(k-1); integrating over the circle
    keeps the products whose frequency sums match, which is the sum of the
    squared moduli of the coefficients of f^m.
    """
    freqs, coeffs = _check_lacunary_args(freqs, coeffs, k)
    poly = _power_coefficients(freqs, coeffs, 1 << (k - 1))
    return sum((c.abs2() for c in poly.values()), Fraction(0))


def lacunary_collapse(freqs: Sequence[int], k: int) -> bool:
    """True when distinct m-multisets of frequencies have distinct sums.

    Then only the trivial pairings survive in the moment expansion, which is
    what a large enough gap ratio guarantees.
    """
    from itertools import combinations_with_replacement
    m = 1 << (k - 1)
    seen = set()
    for combo in combinations_with_replacement(freqs, m):
        s = sum(combo)
        if s in seen:
            return False
        seen.add(s)
    return True


def gap_ratio(freqs: Sequence[int]) -> Fraction | None:
    """min n_{j+1}/n_j, the lacunarity constant q (None for a single term)."""
    if len(freqs) < 2:
        return None
    return min(Fraction(b, a) for a, b in zip(freqs, freqs[1:]))
