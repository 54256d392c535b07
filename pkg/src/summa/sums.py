"""Unordered sums over index sets.

A family is either finite (an explicit list of terms) or streamed (a term
generator plus a declared horizon and, when available, analytic tail
bounds supplied by the constructor).  No verdict is ever drawn from finitely
many terms alone: convergence is certified by a tail bound, divergence by
an explicit witness block, and anything else is reported as inconclusive.

Terms are exact rationals, :class:`~summa.norms.ExactComplex` numbers, or
tuples of rationals measured with the family's norm.  Indices are 0-based:
the certified set ``A`` of a verdict is ``range(prefix)``.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, GuardExceeded
from .norms import (INF, L2, ExactComplex, NormDescriptor, as_scalar, close,
                    exact_root, is_exact, leq, lt, modulus, norm_of, total)

SUBSET_GUARD = 24
SIGN_WINDOW_GUARD = 20
W_GUARD = 12


def set_subset_guard(n: int) -> None:
    global SUBSET_GUARD
    SUBSET_GUARD = int(n)


@dataclass(frozen=True)
class IndexedFamily:
    """A finite or streamed family of terms.

    For streamed families ``generator(j)`` returns the term of 1-based index
    ``j``.  ``abs_tail(n)`` bounds the sum of the norms of all terms after the
    first ``n``; ``subsum_tail(n)`` bounds the norm of every finite subsum
    taken beyond the first ``n`` terms.  Either may be absent or return INF.
    """

    terms: tuple | None = None
    generator: Callable[[int], object] | None = None
    horizon: int | None = None
    norm: NormDescriptor = L2
    abs_tail: Callable[[int], object] | None = None
    subsum_tail: Callable[[int], object] | None = None
    name: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.terms is None) == (self.generator is None):
            raise DomainError("a family is either finite or streamed")
        if self.terms is not None:
            object.__setattr__(self, "terms", tuple(_coerce(t) for t in self.terms))
        elif self.horizon is None or self.horizon < 0:
            raise DomainError("streamed families need a nonnegative horizon")

    @classmethod
    def finite(cls, terms: Sequence, norm=None) -> "IndexedFamily":
        return cls(terms=tuple(terms), norm=NormDescriptor.parse(norm))

    @property
    def kind(self) -> str:
        return "finite" if self.terms is not None else "streamed"

    def __len__(self):
        return len(self.terms) if self.terms is not None else self.horizon

    def term(self, i: int):
        if self.terms is not None:
            return self.terms[i]
        return _coerce(self.generator(i + 1))

    def prefix(self, n: int) -> list:
        return [self.term(i) for i in range(n)]

    def term_norm(self, x):
        return norm_of(x, self.norm)

    def tail_abs(self, n: int):
        """Bound on the sum of term norms beyond the first n terms, or None."""
        if self.terms is not None:
            return _fsum(self.term_norm(t) for t in self.terms[n:])
        if self.abs_tail is None:
            return None
        return self.abs_tail(n)

    def tail_subsum(self, n: int):
        """Bound on the norm of any finite subsum beyond the first n terms."""
        if self.terms is None and self.subsum_tail is not None:
            return self.subsum_tail(n)
        return self.tail_abs(n)

    def truncated(self, n: int | None = None) -> "IndexedFamily":
        n = len(self) if n is None else n
        return IndexedFamily(terms=tuple(self.prefix(n)), norm=self.norm)


def _coerce(t):
    if isinstance(t, (tuple, list)):
        return tuple(as_scalar(c) for c in t)
    return as_scalar(t)


def _fsum(values):
    vals = list(values)
    if all(is_exact(v) for v in vals):
        return sum(vals, Fraction(0))
    return math.fsum(float(v) for v in vals)


# ---------------------------------------------------------------------------
# named streamed families


def geometric(ratio="1/2", scale=1, direction=None, horizon: int = 64) -> IndexedFamily:
    """f_j = scale * ratio**j (times a fixed direction vector, if given)."""
    r, c = as_scalar(ratio), as_scalar(scale)
    if not abs(r) < 1:
        raise DomainError("geometric families need |ratio| < 1")
    d = None if direction is None else tuple(as_scalar(x) for x in direction)
    unit = Fraction(1) if d is None else norm_of(d, L2)

    def gen(j):
        v = c * r ** j
        return v if d is None else tuple(v * x for x in d)

    def tail(n):
        return abs(c) * unit * abs(r) ** (n + 1) / (1 - abs(r))

    return IndexedFamily(generator=gen, horizon=horizon, abs_tail=tail,
                         name="geometric",
                         params={"ratio": str(r), "scale": str(c),
                                 **({"direction": [str(x) for x in d]} if d else {})})


def alternating_harmonic(horizon: int = 10_000) -> IndexedFamily:
    """f_j = (-1)**j / j; conditionally but not unconditionally summable."""
    return IndexedFamily(generator=lambda j: Fraction((-1) ** j, j), horizon=horizon,
                         abs_tail=lambda n: INF, name="alternating_harmonic")


def harmonic(horizon: int = 10_000) -> IndexedFamily:
    return IndexedFamily(generator=lambda j: Fraction(1, j), horizon=horizon,
                         abs_tail=lambda n: INF, name="harmonic")


def zero(horizon: int = 16) -> IndexedFamily:
    return IndexedFamily(generator=lambda j: Fraction(0), horizon=horizon,
                         abs_tail=lambda n: Fraction(0), name="zero")


def scaled_basis(horizon: int = 32) -> IndexedFamily:
    """v_j = e_j / j in l^2 of dimension ``horizon``.

    The norms 1/j are not summable, but every subsum beyond n has squared
    norm at most sum_{j>n} 1/j^2 <= 1/n.
    """

    def gen(j):
        return tuple(Fraction(1, j) if k == j else Fraction(0) for k in range(1, horizon + 1))

    def sub_tail(n):
        return math.sqrt(1 / n) if n else math.pi / math.sqrt(6)

    return IndexedFamily(generator=gen, horizon=horizon, abs_tail=lambda n: INF,
                         subsum_tail=sub_tail, name="scaled_basis")


FAMILIES = {
    "geometric": geometric,
    "alternating_harmonic": alternating_harmonic,
    "harmonic": harmonic,
    "zero": zero,
    "scaled_basis": scaled_basis,
}


def named_family(name: str, horizon: int | None = None, **params) -> IndexedFamily:
    try:
        factory = FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; known: {sorted(FAMILIES)}") from None
    if horizon is not None:
        params["horizon"] = horizon
    return factory(**params)


# ---------------------------------------------------------------------------
# subset enumeration


def subset_sum(F: IndexedFamily, B) -> object:
    """Exact sum of the terms indexed by B (termwise for vectors)."""
    n = len(F)
    idx = list(B)
    for i in idx:
        if not 0 <= i < n:
            raise DomainError(f"index {i} out of range for a family of length {n}")
    if not idx:
        sample = F.term(0) if n else Fraction(0)
        if isinstance(sample, tuple):
            return tuple(Fraction(0) for _ in sample)
        return Fraction(0)
    return total(F.term(i) for i in idx)


def _as_int_matrix(terms):
    """Scale exact terms to a common denominator: returns (D, M, kind).

    Complex terms become (re, im) pairs.  ``kind`` is "real", "complex" or
    "vector".
    """
    if not terms:
        return 1, np.zeros((0, 1), dtype=np.int64), "real"
    first = terms[0]
    if isinstance(first, tuple):
        rows, kind = [list(t) for t in terms], "vector"
    elif any(isinstance(t, ExactComplex) for t in terms):
        rows, kind = [[ExactComplex.lift(t).re, ExactComplex.lift(t).im] for t in terms], "complex"
    else:
        rows, kind = [[t] for t in terms], "real"
    if not all(is_exact(c) for r in rows for c in r):
        raise DomainError("exhaustive norms need exact terms")
    D = 1
    for r in rows:
        for c in r:
            D = math.lcm(D, Fraction(c).denominator)
    ints = [[int(Fraction(c) * D) for c in r] for r in rows]
    big = max((abs(c) for r in ints for c in r), default=0) * (len(ints) + 1)
    dtype = np.int64 if big < 2 ** 28 else object
    return D, np.array(ints, dtype=dtype), kind


def _subset_table(M) -> np.ndarray:
    """All 2^m subset sums; row k sums the terms whose bits are set in k."""
    S = np.zeros((1, M.shape[1]), dtype=M.dtype)
    for row in M:
        S = np.concatenate([S, S + row])
    return S


class _RowNorm:
    """Exact norms of integer rows scaled by 1/D, comparable without rounding."""

    def __init__(self, norm: NormDescriptor, kind: str, D: int):
        self.norm, self.kind, self.D = norm, kind, D
        p = norm.p if norm.kind == "lp" else None
        if kind == "real":
            self.mode = "abs"
        elif kind == "complex" or p == 2:
            self.mode = "l2sq"
        elif p == 1:
            self.mode = "l1"
        elif p == INF:
            self.mode = "linf"
        else:
            self.mode = "generic"

    def keys(self, S):
        if self.mode == "abs":
            return np.abs(S[:, 0])
        if self.mode == "l1":
            return np.abs(S).sum(axis=1)
        if self.mode == "linf":
            return np.abs(S).max(axis=1)
        if self.mode == "l2sq":
            return (S * S).sum(axis=1)
        return None

    def value(self, key):
        key = int(key)
        if self.mode == "l2sq":
            q = Fraction(key, self.D * self.D)
            r = exact_root(q, 2)
            return r if r is not None else math.sqrt(q)
        return Fraction(key, self.D)

    def best(self, S):
        """(value, row index) of the row with the largest norm."""
        keys = self.keys(S)
        if keys is not None:
            k = int(np.argmax(keys)) if keys.dtype != object else max(range(len(keys)), key=keys.__getitem__)
            return self.value(keys[k]), k
        best, arg = None, 0
        for k, row in enumerate(S):
            v = self.norm(tuple(Fraction(int(c), self.D) for c in row))
            if best is None or v > best:
                best, arg = v, k
        return best, arg


def _check_guard(m: int, guard: int | None):
    g = SUBSET_GUARD if guard is None else guard
    if m > g:
        raise GuardExceeded(f"{m} indices exceed the enumeration guard {g}; "
                            "use a sampling mode or raise the guard")


def _finite_terms(F) -> tuple:
    if isinstance(F, IndexedFamily):
        return F.terms if F.terms is not None else tuple(F.prefix(len(F)))
    return tuple(_coerce(t) for t in F)


def _family_norm(F):
    return F.norm if isinstance(F, IndexedFamily) else L2


def y_norm(F, guard: int | None = None, with_witness: bool = False):
    """max over nonempty subsets B of ||sum_B f||, by exhaustive enumeration."""
    terms = _finite_terms(F)
    _check_guard(len(terms), guard)
    if not terms:
        return (Fraction(0), ()) if with_witness else Fraction(0)
    D, M, kind = _as_int_matrix(terms)
    S = _subset_table(M)[1:]
    val, k = _RowNorm(_family_norm(F), kind, D).best(S)
    if with_witness:
        bits = k + 1
        return val, tuple(i for i in range(len(terms)) if bits >> i & 1)
    return val


def z_norm(F, guard: int | None = None):
    """max over nonempty B and signs beta of ||sum_B beta f||.

    The norm is convex in the coefficient vector, so the maximum over
    coefficients in {-1, 0, 1} is attained at a full sign pattern; only the
    2^m full patterns are enumerated.
    """
    terms = _finite_terms(F)
    _check_guard(len(terms), guard)
    if not terms:
        return Fraction(0)
    D, M, kind = _as_int_matrix(terms)
    S = _subset_table(M)
    signed = 2 * S - M.sum(axis=0)
    return _RowNorm(_family_norm(F), kind, D).best(signed)[0]


def z_norm_bruteforce(F) -> object:
    """Reference enumeration over all 3^m coefficient patterns in {-1,0,1}."""
    terms = _finite_terms(F)
    best = Fraction(0)
    norm = _family_norm(F)
    for coeffs in itertools.product((-1, 0, 1), repeat=len(terms)):
        if not any(coeffs):
            continue
        s = total(c * t if not isinstance(t, tuple) else tuple(c * x for x in t)
                  for c, t in zip(coeffs, terms) if c)
        v = norm_of(s, norm)
        if v > best:
            best = v
    return best


def _complex_terms(F):
    out = []
    for t in _finite_terms(F):
        if isinstance(t, tuple):
            raise DomainError("w_norm takes scalar (real or complex) terms")
        out.append(t)
    return out


def _roots(K: int):
    if K == 1:
        return [ExactComplex(1)]
    if K == 2:
        return [ExactComplex(1), ExactComplex(-1)]
    if K == 4:
        return [ExactComplex(1), ExactComplex(0, 1), ExactComplex(-1), ExactComplex(0, -1)]
    return [cmath.exp(2j * math.pi * k / K) for k in range(K)]


def w_norm(F, K: int = 8, guard: int = W_GUARD):
    """max over coefficients beta in the K-th roots of unity of |sum beta f|.

    A lower bound for the supremum over unimodular coefficients.  For a fixed
    direction theta each term independently picks the root best aligned with
    theta, and that choice only changes at finitely many breakpoint angles,
    so one candidate per arc between consecutive breakpoints suffices.
    Exact for K in {1, 2, 4} with exact terms.
    """
    terms = _complex_terms(F)
    if len(terms) > guard:
        raise GuardExceeded(f"{len(terms)} terms exceed the W-norm guard {guard}")
    if K < 1:
        raise DomainError("K must be positive")
    roots = _roots(K)
    fl = [complex(t) for t in terms]
    live = [i for i, z in enumerate(fl) if z != 0]
    if not live:
        return Fraction(0)
    breaks = sorted({(cmath.phase(fl[i]) + (2 * k + 1) * math.pi / K) % (2 * math.pi)
                     for i in live for k in range(K)})
    cands = [(a + b) / 2 for a, b in zip(breaks, breaks[1:] + [breaks[0] + 2 * math.pi])]
    exact = K in (1, 2, 4) and all(is_exact(terms[i]) for i in live)
    seen, best = set(), None
    for theta in cands:
        choice = tuple(round((theta - cmath.phase(fl[i])) * K / (2 * math.pi)) % K for i in live)
        if choice in seen:
            continue
        seen.add(choice)
        if exact:
            s = sum((roots[k] * terms[i] for k, i in zip(choice, live)), ExactComplex(0))
        else:
            s = sum(complex(roots[k]) * fl[i] for k, i in zip(choice, live))
        v = modulus(s) if isinstance(s, ExactComplex) else abs(s)
        if best is None or _gt(v, best):
            best = v
    return best


def _gt(a, b):
    if is_exact(a) and is_exact(b):
        return a > b
    return float(a) > float(b)


def w_norm_bruteforce(F, K: int = 8) -> float:
    """Reference enumeration over all K^m root assignments (float)."""
    terms = [complex(t) for t in _complex_terms(F)]
    roots = [cmath.exp(2j * math.pi * k / K) for k in range(K)]
    best = 0.0
    for choice in itertools.product(range(K), repeat=len(terms)):
        best = max(best, abs(sum(roots[k] * t for k, t in zip(choice, terms))))
    return best


# ---------------------------------------------------------------------------
# Cauchy criterion, evaluation, rearrangements


@dataclass(frozen=True)
class CauchyVerdict:
    status: str                      # "pass", "fail" or "inconclusive"
    prefix: int | None = None        # certified A = range(prefix)
    bound: object = None             # tail bound certifying the pass
    witness: tuple = ()              # B, for a failure
    witness_norm: object = None
    witness_prefix: int | None = None  # B is disjoint from every A within range(witness_prefix)
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _is_scalar_family(F: IndexedFamily, N: int) -> bool:
    return N == 0 or not isinstance(F.term(0), tuple)


def generalized_cauchy_check(F: IndexedFamily, eps, horizon: int | None = None,
                             seed: int = 0) -> CauchyVerdict:
    """Look for a finite prefix A with every finite subsum beyond it below eps.

    Passing uses the family's tail bound (exact for finite families).  On
    failure a block B of terms beyond some prefix with ||sum_B f|| >= eps is
    returned, searched exhaustively for vector families with N <= 20 and by
    random sign-aligned subsets otherwise.
    """
    eps = as_scalar(eps)
    if not eps > 0:
        raise DomainError("eps must be positive")
    N = len(F) if horizon is None else min(horizon, len(F)) if F.terms is not None else horizon
    for n in range(N + 1):
        b = F.tail_subsum(n)
        if b is None:
            break
        if b != INF and lt(b, eps, 0.0):
            return CauchyVerdict("pass", prefix=n, bound=b)
    terms = F.prefix(N)
    if _is_scalar_family(F, N):
        found = _scalar_witness(terms, eps)
    elif N <= SIGN_WINDOW_GUARD:
        found = _vector_witness_exhaustive(F, terms, eps)
    else:
        found = _vector_witness_sampled(F, terms, eps, seed)
    if found is None:
        return CauchyVerdict("inconclusive", note="no witness found within the horizon")
    n0, B, val = found
    return CauchyVerdict("fail", witness=B, witness_norm=val, witness_prefix=n0)


def _scalar_witness(terms, eps):
    """Largest n0 such that a same-sign (per real/imag part) block beyond n0 reaches eps."""
    parts = []
    for t in terms:
        z = ExactComplex.lift(t) if is_exact(t) else complex(t)
        parts.append((z.re, z.im) if isinstance(z, ExactComplex) else (z.real, z.imag))
    acc = {key: 0 for key in ("re+", "re-", "im+", "im-")}
    for n0 in range(len(terms) - 1, -1, -1):
        re, im = parts[n0]
        acc["re+" if re > 0 else "re-"] += abs(re)
        acc["im+" if im > 0 else "im-"] += abs(im)
        key = max(acc, key=lambda k: acc[k])
        if acc[key] >= eps:
            comp, sign = (0 if key.startswith("re") else 1), (1 if key.endswith("+") else -1)
            B = tuple(i for i in range(n0, len(terms)) if sign * parts[i][comp] > 0)
            val = modulus(total(terms[i] for i in B))
            return n0, B, val
    return None


def _vector_witness_exhaustive(F, terms, eps):
    for n0 in range(len(terms) - 1, -1, -1):
        val, B = y_norm(IndexedFamily(terms=tuple(terms[n0:]), norm=F.norm),
                        guard=SIGN_WINDOW_GUARD, with_witness=True)
        if leq(eps, val, 0.0):
            return n0, tuple(n0 + i for i in B), val
    return None


def _vector_witness_sampled(F, terms, eps, seed, trials: int = 64):
    rng = random.Random(seed)
    d = len(terms[0])
    arr = np.array([[float(c) for c in t] for t in terms])
    step = max(1, len(terms) // 32)
    for n0 in range(len(terms) - 1, -1, -step):
        window = arr[n0:]
        for _ in range(trials):
            u = np.array([rng.gauss(0, 1) for _ in range(d)])
            mask = window @ u > 0
            if not mask.any():
                continue
            B = tuple(n0 + int(i) for i in np.nonzero(mask)[0])
            val = norm_of(total(terms[i] for i in B), F.norm)
            if leq(eps, val, 0.0):
                return n0, B, val
    return None


def unordered_sum_eval(F: IndexedFamily, eps, horizon: int | None = None):
    """Sum over the certified prefix; within eps of the unordered sum."""
    v = generalized_cauchy_check(F, eps, horizon)
    if not v.passed:
        raise DomainError(f"generalized Cauchy check did not pass at eps={eps} ({v.status})")
    return subset_sum(F, range(v.prefix))


@dataclass(frozen=True)
class RearrangementReport:
    sum: object
    permuted_sum: object
    agree: bool
    divergent_order: tuple = ()
    oscillations: int = 0


def _check_bijection(perm, n):
    if sorted(perm) != list(range(n)):
        raise DomainError(f"permutation is not a bijection of range({n})")


def rearrangement_test(F: IndexedFamily, perm: Sequence[int], eps="1/1000000",
                       horizon: int | None = None) -> RearrangementReport:
    """Compare the sum with the sum of the permuted family.

    Finite families are compared exactly.  Streamed families compare the
    certified prefix sum with the shortest permuted partial sum that covers
    it; when the Cauchy check fails, the witness mode builds a divergent
    ordering instead.
    """
    perm = list(perm)
    if F.terms is not None:
        _check_bijection(perm, len(F))
        s = total(F.terms)
        ps = total(F.terms[i] for i in perm)
        return RearrangementReport(s, ps, s == ps)
    N = len(F) if horizon is None else horizon
    _check_bijection(perm, N)
    eps = as_scalar(eps)
    v = generalized_cauchy_check(F, eps, N)
    if not v.passed:
        order, osc = divergent_rearrangement(F, eps, N)
        return RearrangementReport(None, None, False, tuple(order), osc)
    s = subset_sum(F, range(v.prefix))
    need, k = set(range(v.prefix)), 0
    while need:
        need.discard(perm[k])
        k += 1
    ps = subset_sum(F, perm[:k])
    diff = norm_of(_diff(s, ps), F.norm)
    return RearrangementReport(s, ps, leq(diff, 2 * eps))


def _diff(a, b):
    if isinstance(a, tuple):
        return tuple(x - y for x, y in zip(a, b))
    return a - b


def divergent_rearrangement(F: IndexedFamily, eps, horizon: int | None = None):
    """Reorder a real family so partial sums keep jumping by at least eps.

    Rounds alternate sign.  Each round first takes the smallest unused index
    (so every index is eventually used) and then, first-fit by index, unused
    terms of the round's sign until their total reaches eps.  Returns the
    ordering of range(N) and the number of completed jumps.
    """
    eps = as_scalar(eps)
    N = len(F) if horizon is None else horizon
    terms = F.prefix(N)
    if terms and isinstance(terms[0], tuple):
        raise DomainError("divergent rearrangements are built for real families")
    used = [False] * N
    order: list[int] = []
    pos = [i for i in range(N) if terms[i] > 0]
    neg = [i for i in range(N) if terms[i] < 0]
    ptr = {1: 0, -1: 0}
    pools = {1: pos, -1: neg}
    first, jumps, sign = 0, 0, 1
    while True:
        while first < N and used[first]:
            first += 1
        if first < N:
            used[first] = True
            order.append(first)
        pool, block, acc = pools[sign], [], Fraction(0)
        while ptr[sign] < len(pool) and acc < eps:
            i = pool[ptr[sign]]
            ptr[sign] += 1
            if not used[i]:
                block.append(i)
                acc += abs(terms[i])
        if acc < eps:
            for i in block:
                used[i] = True
                order.append(i)
            break
        for i in block:
            used[i] = True
        order.extend(block)
        jumps += 1
        sign = -sign
    order.extend(i for i in range(N) if not used[i])
    return order, jumps


@dataclass(frozen=True)
class SignUniformVerdict:
    status: str
    start: int | None = None           # L_eps
    max_window_norm: object = None
    windows_checked: int = 0
    witness: tuple = ()
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _window_sign_max(arr: np.ndarray, start: int, length: int, norm: NormDescriptor):
    """Max over k <= length and sign patterns of ||sum_{start<=j<start+k} eps_j v_j||."""
    T = np.zeros((1, arr.shape[1]))
    best = 0.0
    for k in range(length):
        v = arr[start + k]
        T = np.concatenate([T + v, T - v])
        best = max(best, float(norm.evaluate_array(T).max()))
    return best


def sign_uniform_convergence_check(F: IndexedFamily, eps, horizon: int | None = None,
                                   window: int = 12, sampling: bool = False) -> SignUniformVerdict:
    """Check sup over signs of ||sum_{l<j<=n} eps_j v_j|| < 2 eps for n > l >= L.

    The analytic part is the bound 2 * subsum_tail(L) (split any signed sum
    into its + and - subsums); the numeric part enumerates every sign pattern
    on every window of length <= ``window`` starting at or after L.
    """
    if window > SIGN_WINDOW_GUARD and not sampling:
        raise GuardExceeded(f"sign window {window} exceeds {SIGN_WINDOW_GUARD} without sampling")
    eps = as_scalar(eps)
    N = len(F) if horizon is None else horizon
    v = generalized_cauchy_check(F, eps, N)
    terms = F.prefix(N)
    if not terms:
        return SignUniformVerdict("pass", start=0, max_window_norm=Fraction(0))
    arr = np.array([[float(c) for c in t] if isinstance(t, tuple) else [complex(t).real, complex(t).imag]
                    for t in terms])
    norm = F.norm if isinstance(terms[0], tuple) else L2
    L = v.prefix if v.passed else v.witness_prefix
    if L is None:
        return SignUniformVerdict("inconclusive", note="no Cauchy verdict")
    best, count = 0.0, 0
    w = min(window, SIGN_WINDOW_GUARD)
    for start in range(L, min(N, L + w)):
        length = min(w, N - start)
        best = max(best, _window_sign_max(arr, start, length, norm))
        count += length
    if v.passed:
        analytic = 2 * float(v.bound)
        ok = best < 2 * float(eps) and analytic < 2 * float(eps)
        return SignUniformVerdict("pass" if ok else "fail", start=L, max_window_norm=best,
                                  windows_checked=count)
    if best >= 2 * float(eps):
        return SignUniformVerdict("fail", start=L, max_window_norm=best, windows_checked=count,
                                  witness=v.witness)
    return SignUniformVerdict("inconclusive", start=L, max_window_norm=best,
                              windows_checked=count, note="Cauchy check failed; no 2eps window found")
