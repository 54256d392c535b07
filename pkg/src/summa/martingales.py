"""Martingales on finite filtrations.

A filtration is a list of partitions of a finite probability space, each
refining the previous one.  Stages are numbered from 1 and functions are
stored atom by atom, so a stage-j function is simply a tuple that happens to
be constant on the stage-j cells.  Values may be rationals or d-vectors
(tuples) measured with a :class:`~summa.norms.NormDescriptor`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, MeasurabilityError
from .measures import AtomSpace, PartitionAlgebra
from .norms import (L2, INF, NormDescriptor, add, as_scalar, close, exponent, is_exact,
                    norm_of, real_power, root_bounds, scale, sub, total, zero_like)


@dataclass(frozen=True)
class Filtration:
    space: AtomSpace
    stages: tuple

    def __post_init__(self):
        if self.space.base_weights is None:
            raise DomainError("a filtration needs base probability weights")
        stages = tuple(s if isinstance(s, PartitionAlgebra) else PartitionAlgebra(tuple(s), len(self.space))
                       for s in self.stages)
        if not stages:
            raise DomainError("a filtration needs at least one stage")
        for k, P in enumerate(stages, start=1):
            if P.n != len(self.space):
                raise DomainError(f"stage {k} partitions the wrong number of atoms")
            for c in P.cells:
                if self.space.prob(c) <= 0:
                    raise DomainError(f"stage {k} has a cell {c} of zero mass")
        for k in range(1, len(stages)):
            if not stages[k].refines(stages[k - 1]):
                raise DomainError(f"stage {k + 1} does not refine stage {k}")
        object.__setattr__(self, "stages", stages)

    @classmethod
    def dyadic(cls, depth: int, first_level: int = 0) -> "Filtration":
        """[0,1) at resolution 2^-depth with stages = levels first_level..depth."""
        n = 1 << depth
        space = AtomSpace(tuple(range(n)), tuple(Fraction(1, n) for _ in range(n)))
        stages = []
        for lvl in range(first_level, depth + 1):
            w = 1 << (depth - lvl)
            stages.append(PartitionAlgebra(tuple(tuple(range(j * w, (j + 1) * w)) for j in range(1 << lvl)), n))
        return cls(space, tuple(stages))

    @classmethod
    def random(cls, rng: random.Random, atoms: int = 16, stages: int = 4) -> "Filtration":
        """Random refining chain, starting from the trivial partition."""
        raw = [rng.randint(1, 6) for _ in range(atoms)]
        tot = sum(raw)
        space = AtomSpace(tuple(range(atoms)), tuple(Fraction(r, tot) for r in raw))
        chain = [[list(range(atoms))]]
        for _ in range(stages - 1):
            nxt = []
            for c in chain[-1]:
                if len(c) > 1 and rng.random() < 0.8:
                    cut = rng.randint(1, len(c) - 1)
                    shuffled = c[:]
                    rng.shuffle(shuffled)
                    nxt += [sorted(shuffled[:cut]), sorted(shuffled[cut:])]
                else:
                    nxt.append(c)
            chain.append(nxt)
        return cls(space, tuple(PartitionAlgebra(tuple(map(tuple, s)), atoms) for s in chain))

    def __len__(self):
        return len(self.stages)

    @property
    def n_atoms(self) -> int:
        return len(self.space)

    @property
    def weights(self) -> tuple:
        return self.space.base_weights

    def stage(self, j: int) -> PartitionAlgebra:
        if not 1 <= j <= len(self.stages):
            raise DomainError(f"stage {j} outside 1..{len(self.stages)}")
        return self.stages[j - 1]

    def cell_mass(self, cell) -> Fraction:
        return self.space.prob(cell)

    def integral(self, f: Sequence, A=None):
        A = range(self.n_atoms) if A is None else A
        A = list(A)
        if not A:
            return zero_like(f[0])
        return total(scale(self.weights[i], f[i]) for i in A)

    def expand(self, j: int, cell_values: Sequence) -> tuple:
        """Per-atom tuple from one value per stage-j cell."""
        P = self.stage(j)
        if len(cell_values) != len(P.cells):
            raise DomainError(f"stage {j} has {len(P.cells)} cells, got {len(cell_values)} values")
        out = [None] * self.n_atoms
        for c, v in zip(P.cells, cell_values):
            for i in c:
                out[i] = _coerce(v)
        return tuple(out)


def _coerce(v):
    if isinstance(v, (list, tuple)):
        return tuple(as_scalar(c) for c in v)
    return as_scalar(v)


def conditional_expectation(filt: Filtration, f: Sequence, j: int, l: int | None = None) -> tuple:
    """E(f | B_j): the weighted mean of f over each stage-j cell.

    When ``l`` is given, f must be a stage-l function and j <= l.
    """
    if l is not None:
        if j > l:
            raise DomainError(f"target stage {j} is finer than source stage {l}")
        if not filt.stage(l).is_function_measurable(f):
            raise MeasurabilityError(f"f is not constant on stage-{l} cells")
    if len(f) != filt.n_atoms:
        raise DomainError("f needs one value per atom")
    out = [None] * filt.n_atoms
    for c in filt.stage(j).cells:
        m = filt.cell_mass(c)
        avg = scale(1 / m, filt.integral(f, c))
        for i in c:
            out[i] = avg
    return tuple(out)


@dataclass(frozen=True)
class AdaptedSequence:
    filtration: Filtration
    values: tuple                      # values[j-1] is the per-atom tuple of f_j
    norm: NormDescriptor = L2

    def __post_init__(self):
        vals = tuple(tuple(_coerce(v) for v in f) for f in self.values)
        if len(vals) > len(self.filtration):
            raise DomainError("more functions than stages")
        for j, f in enumerate(vals, start=1):
            if len(f) != self.filtration.n_atoms:
                raise DomainError(f"f_{j} needs one value per atom")
            if not self.filtration.stage(j).is_function_measurable(f):
                raise MeasurabilityError(f"f_{j} is not constant on stage-{j} cells")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_cells(cls, filt: Filtration, cell_values: Sequence, norm=None) -> "AdaptedSequence":
        vals = tuple(filt.expand(j, cv) for j, cv in enumerate(cell_values, start=1))
        return cls(filt, vals, NormDescriptor.parse(norm))

    @classmethod
    def of_terminal(cls, filt: Filtration, f: Sequence, norm=None) -> "AdaptedSequence":
        """The martingale E(f | B_j), j = 1..N, of a stage-N function."""
        N = len(filt)
        f = tuple(_coerce(v) for v in f)
        vals = tuple(conditional_expectation(filt, f, j) for j in range(1, N))
        return cls(filt, vals + (conditional_expectation(filt, f, N),), NormDescriptor.parse(norm))

    def __len__(self):
        return len(self.values)

    def f(self, j: int) -> tuple:
        if not 1 <= j <= len(self.values):
            raise DomainError(f"stage {j} outside 1..{len(self.values)}")
        return self.values[j - 1]

    @property
    def is_scalar(self) -> bool:
        return not any(isinstance(v, tuple) for f in self.values for v in f)

    def norms(self, j: int) -> tuple:
        return tuple(norm_of(v, self.norm) for v in self.f(j))

    def with_values(self, values) -> "AdaptedSequence":
        return AdaptedSequence(self.filtration, tuple(values), self.norm)

    def cell_values(self, j: int) -> list:
        f = self.f(j)
        return [f[c[0]] for c in self.filtration.stage(j).cells]


def _norm_map(seq: AdaptedSequence) -> AdaptedSequence:
    return AdaptedSequence(seq.filtration, tuple(seq.norms(j) for j in range(1, len(seq) + 1)))


# ---------------------------------------------------------------------------
# classification and decomposition


@dataclass(frozen=True)
class Classification:
    kind: str                 # martingale | submartingale | supermartingale | none
    witness: tuple | None     # (stage j, cell, f_j value, E(f_{j+1}|B_j) value)


def _next_expectations(seq: AdaptedSequence):
    filt = seq.filtration
    for j in range(1, len(seq)):
        yield j, conditional_expectation(filt, seq.f(j + 1), j)


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(close(x, y) for x, y in zip(a, b))
    return close(a, b)


def classify(seq: AdaptedSequence) -> Classification:
    """Compare f_j with E(f_{j+1}|B_j) on every cell; exactly for rationals, within tolerance for floats."""
    is_mart = is_sub = is_super = True
    first_bad = {}
    for j, e in _next_expectations(seq):
        f = seq.f(j)
        for c in seq.filtration.stage(j).cells:
            a, b = f[c[0]], e[c[0]]
            if not _same(a, b):
                is_mart = False
                first_bad.setdefault("martingale", (j, c, a, b))
                if not seq.is_scalar:
                    continue
                if a > b:
                    is_sub = False
                    first_bad.setdefault("submartingale", (j, c, a, b))
                else:
                    is_super = False
                    first_bad.setdefault("supermartingale", (j, c, a, b))
    if is_mart:
        return Classification("martingale", None)
    if not seq.is_scalar:
        return Classification("none", first_bad["martingale"])
    if is_sub:
        return Classification("submartingale", first_bad["martingale"])
    if is_super:
        return Classification("supermartingale", first_bad["martingale"])
    return Classification("none", first_bad["submartingale"])


def doob_decompose(seq: AdaptedSequence) -> tuple[AdaptedSequence, AdaptedSequence]:
    """f = m + A with m a martingale and A predictable, A_1 = 0, nondecreasing."""
    kind = classify(seq).kind
    if kind not in ("martingale", "submartingale"):
        raise DomainError(f"Doob decomposition needs a submartingale, got {kind}")
    filt = seq.filtration
    zero = tuple(Fraction(0) for _ in range(filt.n_atoms))
    A = [zero]
    for j, e in _next_expectations(seq):
        a_j = tuple(x - y for x, y in zip(e, seq.f(j)))
        A.append(tuple(x + y for x, y in zip(A[-1], a_j)))
    m = [tuple(x - y for x, y in zip(seq.f(j), A[j - 1])) for j in range(1, len(seq) + 1)]
    # A_l is stage-(l-1) measurable, so it is also adapted
    return seq.with_values(m), seq.with_values(A)


def increments(seq: AdaptedSequence) -> list[tuple]:
    """a_j = E(f_{j+1} - f_j | B_j) for j = 1..N-1."""
    return [tuple(sub(x, y) for x, y in zip(e, seq.f(j))) for j, e in _next_expectations(seq)]


# ---------------------------------------------------------------------------
# maximal inequalities


def maximal_function(seq: AdaptedSequence, n: int | None = None) -> tuple:
    """f*_n = max over j <= n of ||f_j||, atom by atom."""
    n = len(seq) if n is None else n
    if not 1 <= n <= len(seq):
        raise DomainError(f"n must lie in 1..{len(seq)}")
    cols = [seq.norms(j) for j in range(1, n + 1)]
    return tuple(max(vals) for vals in zip(*cols))


def lp_integral(filt: Filtration, values: Sequence, p) -> object:
    """Integral of |g|^p for a nonnegative per-atom g (exact for integer p)."""
    return total(filt.weights[i] * real_power(values[i], p) for i in range(filt.n_atoms))


@dataclass(frozen=True)
class WeakTypeReport:
    level_measure: Fraction   # mu{f* > t}
    bound: object             # sup_n ||f_n||_1 / t
    holds: bool


def weak_type_check(seq: AdaptedSequence, t) -> WeakTypeReport:
    t = as_scalar(t)
    if not t > 0:
        raise DomainError("t must be positive")
    filt = seq.filtration
    star = maximal_function(seq)
    level = filt.space.prob(i for i, v in enumerate(star) if v > t)
    sup_l1 = max(filt.integral(seq.norms(j)) for j in range(1, len(seq) + 1))
    bound = sup_l1 / t
    holds = level <= bound if is_exact(bound) else float(level) <= float(bound) + 1e-12
    return WeakTypeReport(level, bound, holds)


def doob_constant(p) -> object:
    """p 2^(p-1) / (p-1); exact when p is an integer."""
    p = exponent(p)
    if p == INF or not p > 1:
        raise DomainError("Doob's L^p bound needs 1 < p < infinity")
    if isinstance(p, Fraction) and p.denominator == 1:
        return p * 2 ** (int(p) - 1) / (p - 1)
    return float(p) * 2 ** (float(p) - 1) / (float(p) - 1)


@dataclass(frozen=True)
class DoobReport:
    p: object
    lhs: object          # integral of (f_n*)^p (a rational bracket midpoint for fractional p)
    constant: object
    rhs: object          # constant * integral of f_n^p
    ratio: float | None
    holds: bool
    certified: bool      # decided by exact arithmetic or certified brackets


def _power_bracket(x: Fraction, p: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """lo <= x**p <= hi for x >= 0 and rational p > 0."""
    if x == 0:
        return Fraction(0), Fraction(0)
    lo, hi = root_bounds(x ** p.numerator, p.denominator, bits)
    return lo, hi


def doob_lp_check(seq: AdaptedSequence, p=2, max_bits: int = 512) -> DoobReport:
    """Check the integral of (f_n*)^p against (p 2^(p-1)/(p-1)) times that of f_n^p.

    Integer p is compared exactly.  Fractional rational p is decided with
    rational brackets for every root involved, refined until the two sides
    separate; floats are a last resort.
    """
    if not seq.is_scalar or any(v < 0 for f in seq.values for v in f):
        raise DomainError("Doob's L^p bound is checked on nonnegative scalar sequences")
    if classify(seq).kind not in ("martingale", "submartingale"):
        raise DomainError("Doob's L^p bound needs a submartingale")
    p = exponent(p)
    C = doob_constant(p)
    filt = seq.filtration
    star = maximal_function(seq)
    last = seq.f(len(seq))
    w = filt.weights
    if isinstance(p, Fraction) and p.denominator == 1:
        lhs = lp_integral(filt, star, p)
        rhs = C * lp_integral(filt, last, p)
        ratio = float(lhs / lp_integral(filt, last, p)) if rhs else None
        return DoobReport(p, lhs, C, rhs, ratio, lhs <= rhs, True)
    if isinstance(p, Fraction):
        # C = p/(p-1) * 2^(p-1), and 2^(p-1) is a root as well
        base = p / (p - 1)
        bits = 64
        while bits <= max_bits:
            l_lo = l_hi = r_lo = r_hi = Fraction(0)
            for i in range(filt.n_atoms):
                a, b = _power_bracket(star[i], p, bits)
                l_lo, l_hi = l_lo + w[i] * a, l_hi + w[i] * b
                a, b = _power_bracket(last[i], p, bits)
                r_lo, r_hi = r_lo + w[i] * a, r_hi + w[i] * b
            c_lo, c_hi = _power_bracket(Fraction(2), p - 1, bits)
            r_lo, r_hi = base * c_lo * r_lo, base * c_hi * r_hi
            if l_hi <= r_lo or l_lo > r_hi:
                holds = l_hi <= r_lo
                ratio = float((l_lo + l_hi) / (r_lo + r_hi) * base * (c_lo + c_hi) / 2) if r_hi else None
                return DoobReport(p, (l_lo + l_hi) / 2, C, (r_lo + r_hi) / 2, ratio, holds, True)
            bits *= 2
    lhs = sum(float(w[i]) * float(star[i]) ** float(p) for i in range(filt.n_atoms))
    base_int = sum(float(w[i]) * float(last[i]) ** float(p) for i in range(filt.n_atoms))
    rhs = float(C) * base_int
    return DoobReport(p, lhs, C, rhs, lhs / base_int if base_int else None, lhs <= rhs + 1e-12, False)


# ---------------------------------------------------------------------------
# stopping times


@dataclass(frozen=True)
class StoppingTime:
    filtration: Filtration
    values: tuple          # per atom: stage in 1..N, or None for infinity

    def __post_init__(self):
        N = len(self.filtration)
        vals = tuple(None if v is None or v == INF else int(v) for v in self.values)
        if len(vals) != self.filtration.n_atoms:
            raise DomainError("a stopping time needs one value per atom")
        if any(v is not None and not 1 <= v <= N for v in vals):
            raise DomainError(f"stopping values must lie in 1..{N} or be infinite")
        for n in range(1, N + 1):
            A = [i for i, v in enumerate(vals) if v is not None and v <= n]
            if not self.filtration.stage(n).is_measurable(A):
                raise MeasurabilityError(f"{{tau <= {n}}} is not a union of stage-{n} cells")
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, filt: Filtration, n: int) -> "StoppingTime":
        return cls(filt, (n,) * filt.n_atoms)

    @property
    def bounded(self) -> bool:
        return all(v is not None for v in self.values)

    def truncate(self, N: int) -> "StoppingTime":
        """min(tau, N)."""
        return StoppingTime(self.filtration, tuple(N if v is None else min(v, N) for v in self.values))

    def stopped_algebra(self) -> list[tuple[int, tuple]]:
        """Generators of B_tau: the stage-n cells inside {tau = n}."""
        out = []
        for n in range(1, len(self.filtration) + 1):
            for c in self.filtration.stage(n).cells:
                if all(self.values[i] == n for i in c):
                    out.append((n, c))
        return out


def first_passage(seq: AdaptedSequence, t) -> StoppingTime:
    """tau = min{n : ||f_n|| > t}, infinite where no stage exceeds t."""
    t = as_scalar(t)
    vals = [None] * seq.filtration.n_atoms
    for j in range(1, len(seq) + 1):
        for i, v in enumerate(seq.norms(j)):
            if vals[i] is None and v > t:
                vals[i] = j
    return StoppingTime(seq.filtration, tuple(vals))


@dataclass(frozen=True)
class StopResult:
    values: tuple          # f_tau per atom (None where tau is infinite and restricted)
    algebra: tuple         # generators of B_tau as (stage, cell)


def stop(seq: AdaptedSequence, tau: StoppingTime, restrict: bool = False) -> StopResult:
    if not restrict and not tau.bounded:
        raise DomainError("tau is infinite on some atoms; truncate it or pass restrict=True")
    if any(v is not None and v > len(seq) for v in tau.values):
        raise DomainError("tau exceeds the number of stages in the sequence")
    vals = tuple(None if v is None else seq.f(v)[i] for i, v in enumerate(tau.values))
    return StopResult(vals, tuple(tau.stopped_algebra()))


def stopped_sequence(seq: AdaptedSequence, tau: StoppingTime) -> AdaptedSequence:
    """n -> f_{min(tau, n)}, adapted to the same filtration."""
    out = []
    for n in range(1, len(seq) + 1):
        out.append(tuple(seq.f(n if v is None else min(v, n))[i] for i, v in enumerate(tau.values)))
    return seq.with_values(out)


@dataclass(frozen=True)
class OptionalStoppingReport:
    holds: bool
    checked: int
    witness: tuple | None     # (stage, cell, integral of f_tau, integral of f_N)


def optional_stopping_check(seq: AdaptedSequence, tau: StoppingTime) -> OptionalStoppingReport:
    """For every generator A of B_tau, the integrals of f_tau and f_N over A agree."""
    if classify(seq).kind != "martingale":
        raise DomainError("optional stopping is checked on martingales")
    if not tau.bounded:
        raise DomainError("optional stopping needs a bounded stopping time")
    filt = seq.filtration
    ftau = stop(seq, tau).values
    fN = seq.f(len(seq))
    gens = tau.stopped_algebra()
    for n, c in gens:
        a, b = filt.integral(ftau, c), filt.integral(fN, c)
        if a != b:
            return OptionalStoppingReport(False, len(gens), (n, c, a, b))
    return OptionalStoppingReport(True, len(gens), None)


# ---------------------------------------------------------------------------
# diagnostics


def ui_diagnostic(seq: AdaptedSequence, ts: Sequence) -> list[tuple]:
    """(t, sup_n integral of ||f_n|| over {||f_n|| > t}) for each t; no verdict."""
    filt = seq.filtration
    rows = []
    for t in ts:
        t = as_scalar(t)
        best = Fraction(0)
        for j in range(1, len(seq) + 1):
            nv = seq.norms(j)
            v = total((filt.weights[i] * nv[i] for i in range(filt.n_atoms) if nv[i] > t), Fraction(0))
            best = max(best, v)
        rows.append((t, best))
    return rows


def variant_surrogates(seq: AdaptedSequence, p=2) -> list[tuple]:
    """Finite-stage surrogates of the two summability hypotheses.

    Rows (j, partial sum of ||f_{i+1}-f_i||_p, partial sum of ||a_i||_p,
    max_{i<=j+1} ||f_i||_p) for j = 1..N-1.  No convergence verdict is drawn.
    """
    filt = seq.filtration
    p = exponent(p)

    def lp(values):
        nv = [norm_of(v, seq.norm) for v in values]
        if p == INF:
            return max(nv)
        return real_power(lp_integral(filt, nv, p), 1 / p)

    rows, s_diff, s_inc = [], 0, 0
    incs = increments(seq)
    for j in range(1, len(seq)):
        s_diff = s_diff + lp([sub(x, y) for x, y in zip(seq.f(j + 1), seq.f(j))])
        s_inc = s_inc + lp(incs[j - 1])
        fmax = max(lp(seq.f(i)) for i in range(1, j + 2))
        rows.append((j, s_diff, s_inc, fmax))
    return rows


@dataclass(frozen=True)
class ApproximantRow:
    cell: tuple
    good: bool                # cell lies in the well-approximated family
    spread: float             # sum_A t_n(A) ||v_n(A) - a_{j,n}(B)||, good cells only
    drift: float              # ||a_j(B) - a_{j,n}(B)||, good cells only


def convexity_approximant(seq: AdaptedSequence, j: int, eta: float, n: int | None = None) -> list[ApproximantRow]:
    """Per stage-j cell B, how well f_n on B is approximated by the direction of f_j(B).

    The limit of the integrals over B is replaced by the value at stage n
    (the last stage by default).  Cells are visited in least-atom order.
    Good cells are those with the integral of ||f_j|| over B above
    (1 - eta) times the integral of ||f_n|| over B.
    """
    filt = seq.filtration
    n = len(seq) if n is None else n
    if not 1 <= j <= n <= len(seq):
        raise DomainError("need 1 <= j <= n <= number of stages")
    norm = seq.norm
    fj, fn = seq.f(j), seq.f(n)
    rows = []
    for B in filt.stage(j).cells:
        muB = float(filt.cell_mass(B))
        int_j = float(norm_of(fj[B[0]], norm)) * muB
        int_n = sum(float(filt.weights[i]) * float(norm_of(fn[i], norm)) for i in B)
        if not int_j > (1 - eta) * int_n:
            rows.append(ApproximantRow(B, False, math.nan, math.nan))
            continue
        vec = _as_float_vec(fj[B[0]])
        a_jn = [x * muB / int_n for x in vec]
        nj = float(norm_of(fj[B[0]], norm))
        a_j = [x / nj for x in vec]
        spread = 0.0
        for A in filt.stage(n).cells:
            if A[0] not in B:
                continue
            v = _as_float_vec(fn[A[0]])
            nv = float(norm_of(fn[A[0]], norm))
            t_A = nv * float(filt.cell_mass(A)) / int_n
            unit = [x / nv for x in v] if nv else [0.0] * len(v)
            spread += t_A * float(norm([u - a for u, a in zip(unit, a_jn)]))
        drift = float(norm([x - y for x, y in zip(a_j, a_jn)]))
        rows.append(ApproximantRow(B, True, spread, drift))
    return rows


def _as_float_vec(v) -> list[float]:
    if isinstance(v, tuple):
        return [float(c) for c in v]
    return [float(v)]


# ---------------------------------------------------------------------------
# experiments


@dataclass
class ExperimentTable:
    name: str
    columns: tuple
    rows: list
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _dirac_singular(stages: int = 8) -> ExperimentTable:
    L = stages
    filt = Filtration.dyadic(L, first_level=1)
    n = 1 << L
    vals = []
    for j in range(1, L + 1):
        start = n - (n >> j)                 # first atom of [1 - 2^-j, 1)
        vals.append(tuple(Fraction(1 << j) if i >= start else Fraction(0) for i in range(n)))
    seq = AdaptedSequence(filt, tuple(vals))
    samples = [Fraction(0), Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)]
    sample_atoms = [int(x * n) for x in samples]
    rows, l1_ok = [], True
    for j in range(1, L + 1):
        f = seq.f(j)
        l1 = filt.integral(f)
        l1_ok &= l1 == 1
        star_level = filt.space.prob(i for i, v in enumerate(maximal_function(seq, j)) if v > 1)
        rows.append((j, l1, lp_integral(filt, f, 2), star_level) + tuple(f[a] for a in sample_atoms))
    # f_j(x) = 0 for j > k whenever x < 1 - 2^-k
    eventually_zero = all(seq.f(j)[i] == 0
                          for k in range(1, L + 1)
                          for i in range(n - (n >> k))
                          for j in range(k + 1, L + 1))
    cols = ("stage", "l1", "l2_squared", "maximal_level_gt_1") + tuple(f"f({x})" for x in samples)
    return ExperimentTable("dirac_singular", cols, rows, {
        "l1_norm_one": l1_ok,
        "eventually_zero": eventually_zero,
        "martingale": classify(seq).kind == "martingale",
    })


def _unit_square(J: int = 3) -> ExperimentTable:
    side = 1 << J
    n = side * side
    space = AtomSpace(tuple(range(n)), tuple(Fraction(1, n) for _ in range(n)))

    def atom(x, y):
        return x * side + y

    stages, vals = [], []
    for j in range(J + 1):
        w = side >> j
        cells = []
        for bx in range(1 << j):
            for by in range(1 << j):
                cells.append(tuple(atom(x, y) for x in range(bx * w, (bx + 1) * w)
                                   for y in range(by * w, (by + 1) * w)))
        stages.append(PartitionAlgebra(tuple(cells), n))
        vals.append(tuple(Fraction(1 << j) if (x >> (J - j)) == (y >> (J - j)) else Fraction(0)
                          for x in range(side) for y in range(side)))
    filt = Filtration(space, tuple(stages))
    seq = AdaptedSequence(filt, tuple(vals))
    rows, ok = [], True
    for j in range(J + 1):
        f = seq.f(j + 1)
        integral = filt.integral(f)
        ok &= integral == 1
        rows.append((j, integral, lp_integral(filt, f, 2), max(f)))
    return ExperimentTable("unit_square", ("j", "integral", "l2_squared", "max"), rows, {
        "integral_one": ok,
        "martingale": classify(seq).kind == "martingale",
    })


def _slln_average(n: int = 64, enumerate_upto: int = 12) -> ExperimentTable:
    from .dyadic import DyadicStep, rademacher, rademacher_moment
    rows, ok = [], True
    sizes = sorted({m for m in (1, 2, 4, 8, 16, 32, 64, 128, 256, n) if m <= n} | {n})
    for m in sizes:
        l2sq = rademacher_moment([Fraction(1, m)] * m, 2)
        expected = Fraction(1, m)
        row_ok = l2sq == expected
        if m <= enumerate_upto:
            f = DyadicStep.constant(0, m)
            for j in range(1, m + 1):
                f = f + Fraction(1, m) * rademacher(j, m)
            row_ok &= f.power_integral(2) == expected
        ok &= row_ok
        rows.append((m, l2sq, expected, row_ok))
    # a_m = E(f_{m+1} - f_m | B_m) = -f_m/(m+1), checked on the dyadic filtration
    L = min(n, enumerate_upto)
    filt = Filtration.dyadic(L, first_level=1)
    seq_vals = []
    for m in range(1, L + 1):
        f = DyadicStep.constant(0, L)
        for j in range(1, m + 1):
            f = f + Fraction(1, m) * rademacher(j, L)
        seq_vals.append(f.values)
    seq = AdaptedSequence(filt, tuple(seq_vals))
    incs = increments(seq)
    inc_ok = all(incs[m - 1] == tuple(-v / (m + 1) for v in seq.f(m)) for m in range(1, L))
    return ExperimentTable("slln_average", ("n", "l2_squared", "one_over_n", "agree"), rows, {
        "l2_identity": ok,
        "increment_identity": inc_ok,
    })


def random_dyadic_martingale(rng: random.Random, depth: int, dim: int = 1, lo: int = -4, hi: int = 4,
                             first_level: int = 0) -> AdaptedSequence:
    filt = Filtration.dyadic(depth, first_level)
    n = 1 << depth
    if dim == 1:
        f = [Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(n)]
    else:
        f = [tuple(Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(dim)) for _ in range(n)]
    return AdaptedSequence.of_terminal(filt, f)


def _doubling(depth: int = 6, seed: int = 0, t=None, dim: int = 2) -> ExperimentTable:
    rng = random.Random(seed)
    seq = random_dyadic_martingale(rng, depth, dim=dim)             # f_0 .. f_depth
    N = len(seq)
    filt = seq.filtration
    phi = _norm_map(seq)
    psi = [conditional_expectation(filt, phi.f(k + 1), k) for k in range(1, N)]
    f0 = phi.f(1)[0]
    t = max(Fraction(f0), Fraction(1)) if t is None else as_scalar(t)
    doubling_ok = all(phi.f(k + 1)[i] <= 2 * psi[k - 1][i] for k in range(1, N) for i in range(filt.n_atoms))
    psi_seq = AdaptedSequence(filt, tuple(psi))
    psi_sub = classify(psi_seq).kind in ("martingale", "submartingale")
    vals = [None] * filt.n_atoms
    for k, ps in enumerate(psi, start=1):
        for i, v in enumerate(ps):
            if vals[i] is None and v > t:
                vals[i] = k
    tau = StoppingTime(filt, tuple(vals))
    g = stopped_sequence(seq, tau)
    rows, bound_ok = [], True
    for k in range(1, N + 1):
        gn = g.norms(k)
        sup_g = max(gn)
        bound_ok &= float(sup_g) <= 2 * float(t) + 1e-12
        rows.append((k - 1, filt.integral(phi.f(k)), max(phi.f(k)), sup_g))
    # nonnegative scalar martingales satisfy f_{j+1} <= 2 f_j on dyadic cells
    scal = random_dyadic_martingale(rng, depth, lo=0, hi=8)
    ratio_ok = all(scal.f(k + 1)[i] <= 2 * scal.f(k)[i] for k in range(1, N) for i in range(filt.n_atoms))
    return ExperimentTable("doubling", ("j", "l1_of_norm", "max_norm", "sup_stopped"), rows, {
        "doubling_ratio": ratio_ok,
        "norm_doubling": doubling_ok,
        "psi_submartingale": psi_sub,
        "stopped_martingale": classify(g).kind == "martingale",
        "stopped_bound_2t": bound_ok,
    })


EXPERIMENTS = {
    "dirac_singular": _dirac_singular,
    "unit_square": _unit_square,
    "slln_average": _slln_average,
    "doubling": _doubling,
}


def run_experiment(name: str, **params) -> ExperimentTable:
    if name not in EXPERIMENTS:
        raise DomainError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[name](**params)
