"""Paths in finite-dimensional normed spaces.

A :class:`Polyline` is known at finitely many rational knots.  Between knots
it is either the straight segment (``linear``), a right-continuous step
(``jump-right``: the value at a knot holds until the next knot), or a
left-continuous step (``jump-left``: the value at a knot holds back to the
previous knot).  Convexity diagnostics work in floats on sphere grids and
snap promising candidates back to rationals for exact confirmation.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .norms import (INF, L2, NormDescriptor, add, as_scalar, get_tolerance, is_exact,
                    norm_of, scale, sub, zero_like)

MODES = ("linear", "jump-left", "jump-right")


def _pt(v):
    if isinstance(v, (tuple, list)):
        return tuple(as_scalar(c) for c in v)
    return as_scalar(v)


def _sum(values, start):
    out = start
    for v in values:
        out = out + v if is_exact(out) and is_exact(v) else float(out) + float(v)
    return out


@dataclass(frozen=True)
class Polyline:
    knots: tuple
    points: tuple
    interp: str = "linear"
    norm: NormDescriptor = L2

    def __post_init__(self):
        knots = tuple(Fraction(as_scalar(t)) for t in self.knots)
        points = tuple(_pt(p) for p in self.points)
        if len(knots) < 2:
            raise DomainError("a polyline needs at least two knots")
        if len(knots) != len(points):
            raise DomainError("one point per knot")
        if any(a >= b for a, b in zip(knots, knots[1:])):
            raise DomainError("knots must be strictly increasing")
        if self.interp not in MODES:
            raise DomainError(f"interpolation must be one of {MODES}")
        kinds = {isinstance(p, tuple) and len(p) for p in points}
        if len(kinds) != 1:
            raise DomainError("all points must have the same dimension")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "norm", NormDescriptor.parse(self.norm))

    @property
    def a(self) -> Fraction:
        return self.knots[0]

    @property
    def b(self) -> Fraction:
        return self.knots[-1]

    @property
    def is_scalar(self) -> bool:
        return not isinstance(self.points[0], tuple)

    def _check(self, t):
        t = Fraction(as_scalar(t))
        if not self.a <= t <= self.b:
            raise DomainError(f"t={t} outside [{self.a}, {self.b}]")
        return t

    def value_at(self, t):
        """F(t)."""
        t = self._check(t)
        ks = self.knots
        i = bisect_right(ks, t) - 1
        if ks[i] == t:
            return self.points[i]
        if self.interp == "linear":
            lam = (t - ks[i]) / (ks[i + 1] - ks[i])
            return add(scale(1 - lam, self.points[i]), scale(lam, self.points[i + 1]))
        if self.interp == "jump-right":
            return self.points[i]
        return self.points[i + 1]

    def left_limit(self, t):
        """F(t-), with F(a-) = f(a)."""
        t = self._check(t)
        if t == self.a or self.interp != "jump-right":
            return self.value_at(t)
        i = bisect_left(self.knots, t)
        return self.points[i - 1]          # t lies in (t_{i-1}, t_i]

    def right_limit(self, t):
        """F(t+), with F(b+) = f(b)."""
        t = self._check(t)
        if t == self.b or self.interp != "jump-left":
            return self.value_at(t)
        i = bisect_right(self.knots, t)
        return self.points[i]              # t lies in [t_{i-1}, t_i)

    def restrict(self, r, s) -> "Polyline":
        """The path on [r, s]; jump paths need knot endpoints."""
        r, s = self._check(r), self._check(s)
        if not r < s:
            raise DomainError("restrict needs r < s")
        if self.interp != "linear" and (r not in self.knots or s not in self.knots):
            raise DomainError("jump paths restrict only at knots")
        inner = [(t, p) for t, p in zip(self.knots, self.points) if r < t < s]
        ks = [r] + [t for t, _ in inner] + [s]
        ps = [self.value_at(r)] + [p for _, p in inner] + [self.value_at(s)]
        return Polyline(tuple(ks), tuple(ps), self.interp, self.norm)

    def increments(self) -> list:
        return [sub(q, p) for p, q in zip(self.points, self.points[1:])]

    def map_points(self, g: Callable) -> "Polyline":
        return Polyline(self.knots, tuple(g(p) for p in self.points), self.interp, self.norm)

    def with_norm(self, norm) -> "Polyline":
        return Polyline(self.knots, self.points, self.interp, NormDescriptor.parse(norm))


def path_length(f: Polyline, norm=None, a=None, b=None):
    """Total variation of F on [a, b]: the sum of knot-to-knot increment norms."""
    norm = f.norm if norm is None else NormDescriptor.parse(norm)
    if a is not None or b is not None:
        f = f.restrict(f.a if a is None else a, f.b if b is None else b)
    return _sum((norm_of(d, norm) for d in f.increments()), Fraction(0))


def partition_sum(f: Polyline, partition: Sequence, norm=None):
    """Lambda(P) = sum of ||F(s_k) - F(s_{k-1})|| over a partition of [a, b]."""
    norm = f.norm if norm is None else NormDescriptor.parse(norm)
    pts = [Fraction(as_scalar(s)) for s in partition]
    if pts[0] != f.a or pts[-1] != f.b or any(x >= y for x, y in zip(pts, pts[1:])):
        raise DomainError("partition must increase strictly from a to b")
    vals = [f.value_at(s) for s in pts]
    return _sum((norm_of(sub(q, p), norm) for p, q in zip(vals, vals[1:])), Fraction(0))


def pos_neg_variation(f: Polyline) -> tuple:
    """(P, N, Lambda) for a scalar path."""
    if not f.is_scalar:
        raise DomainError("positive and negative variation need a scalar path")
    inc = f.increments()
    P = sum((d for d in inc if d > 0), Fraction(0))
    N = sum((-d for d in inc if d < 0), Fraction(0))
    return P, N, P + N


# ---------------------------------------------------------------------------
# interval measures


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    left_closed: bool = True
    right_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(as_scalar(self.lo)))
        object.__setattr__(self, "hi", Fraction(as_scalar(self.hi)))
        if self.lo > self.hi or (self.lo == self.hi and not (self.left_closed and self.right_closed)):
            raise DomainError(f"empty or inverted interval {self}")

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """'[0,1/2)' style notation."""
        text = text.strip()
        if text[0] not in "[(" or text[-1] not in "])":
            raise DomainError(f"bad interval {text!r}")
        lo, hi = text[1:-1].split(",")
        return cls(lo.strip(), hi.strip(), text[0] == "[", text[-1] == "]")

    def overlaps(self, other: "Interval") -> bool:
        if self.hi < other.lo or other.hi < self.lo:
            return False
        if self.hi == other.lo:
            return self.right_closed and other.left_closed
        if other.hi == self.lo:
            return other.right_closed and self.left_closed
        return True


@dataclass(frozen=True)
class PathMeasure:
    """nu on finite unions of subintervals of [a, b], from one-sided limits of F."""

    path: Polyline

    def interval(self, I: Interval):
        f = self.path
        if I.lo < f.a or I.hi > f.b:
            raise DomainError("interval leaves [a, b]")
        top = f.right_limit(I.hi) if I.right_closed else f.left_limit(I.hi)
        bottom = f.left_limit(I.lo) if I.left_closed else f.right_limit(I.lo)
        return sub(top, bottom)

    def __call__(self, intervals):
        if isinstance(intervals, Interval):
            intervals = [intervals]
        intervals = list(intervals)
        for i, I in enumerate(intervals):
            for J in intervals[i + 1:]:
                if I.overlaps(J):
                    raise DomainError(f"intervals {I} and {J} overlap")
        out = zero_like(self.path.points[0])
        for I in intervals:
            out = add(out, self.interval(I))
        return out

    def length_measure(self) -> "PathMeasure":
        """The measure of the cumulative-length path t -> Lambda_a^t."""
        f = self.path
        cum = [Fraction(0)]
        for d in f.increments():
            v = norm_of(d, f.norm)
            cum.append(cum[-1] + v if is_exact(v) and is_exact(cum[-1]) else float(cum[-1]) + float(v))
        return PathMeasure(Polyline(f.knots, tuple(cum), f.interp, f.norm))

    def dominated(self, intervals) -> bool:
        """||nu(A)|| <= length measure of A."""
        lhs = norm_of(self(intervals), self.path.norm)
        rhs = self.length_measure()(intervals)
        if is_exact(lhs) and is_exact(rhs):
            return lhs <= rhs
        return float(lhs) <= float(rhs) + get_tolerance()


def path_measure(f: Polyline) -> PathMeasure:
    return PathMeasure(f)


# ---------------------------------------------------------------------------
# Riemann-Stieltjes sums


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Continuous piecewise polynomial: polys[k] (coefficients c0, c1, ...) on [breaks[k], breaks[k+1]]."""

    breaks: tuple
    polys: tuple

    def __post_init__(self):
        br = tuple(Fraction(as_scalar(b)) for b in self.breaks)
        ps = tuple(tuple(Fraction(as_scalar(c)) for c in p) for p in self.polys)
        if len(br) != len(ps) + 1 or any(x >= y for x, y in zip(br, br[1:])):
            raise DomainError("need strictly increasing breaks, one more than pieces")
        object.__setattr__(self, "breaks", br)
        object.__setattr__(self, "polys", ps)
        for k in range(1, len(ps)):
            if _poly_eval(ps[k - 1], br[k]) != _poly_eval(ps[k], br[k]):
                raise DomainError(f"piecewise polynomial is discontinuous at {br[k]}")

    @classmethod
    def polynomial(cls, coeffs, a=0, b=1) -> "PiecewisePolynomial":
        return cls((a, b), (tuple(coeffs),))

    def __call__(self, t):
        t = Fraction(as_scalar(t))
        if not self.breaks[0] <= t <= self.breaks[-1]:
            raise DomainError(f"phi is not defined at {t}")
        k = min(bisect_right(self.breaks, t) - 1, len(self.polys) - 1)
        return _poly_eval(self.polys[k], t)

    def lipschitz_bound(self, a, b) -> Fraction:
        """An upper bound for |phi'| on [a, b] (coefficient-wise)."""
        best = Fraction(0)
        for k, p in enumerate(self.polys):
            lo, hi = max(self.breaks[k], a), min(self.breaks[k + 1], b)
            if lo > hi:
                continue
            r = max(abs(lo), abs(hi))
            best = max(best, sum((abs(j * c) * r ** (j - 1) for j, c in enumerate(p) if j), Fraction(0)))
        return best

    def sup_abs(self, a, b) -> Fraction:
        """An upper bound for |phi| on [a, b]."""
        best = Fraction(0)
        for k, p in enumerate(self.polys):
            lo, hi = max(self.breaks[k], a), min(self.breaks[k + 1], b)
            if lo > hi:
                continue
            r = max(abs(lo), abs(hi))
            best = max(best, sum((abs(c) * r ** j for j, c in enumerate(p)), Fraction(0)))
        return best


def _poly_eval(coeffs, t):
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * t + c
    return out


@dataclass(frozen=True)
class StieltjesResult:
    value: object
    bound: object          # omega(mesh) * Lambda
    points: int


def mesh_partition(f: Polyline, mesh) -> list[Fraction]:
    """All knots plus equal subdivisions so that no gap exceeds ``mesh``."""
    mesh = Fraction(as_scalar(mesh))
    if not mesh > 0:
        raise DomainError("mesh must be positive")
    pts = [f.a]
    for x, y in zip(f.knots, f.knots[1:]):
        k = math.ceil((y - x) / mesh)
        pts += [x + (y - x) * i / k for i in range(1, k + 1)]
    return pts


def riemann_stieltjes(phi: PiecewisePolynomial, f: Polyline, mesh) -> StieltjesResult:
    """Left-tagged sum of phi(r_j)(F(t_j) - F(t_{j-1})) over a mesh refinement."""
    if phi.breaks[0] > f.a or phi.breaks[-1] < f.b:
        raise DomainError("phi must be defined on all of [a, b]")
    pts = mesh_partition(f, mesh)
    vals = [f.value_at(t) for t in pts]
    total = zero_like(vals[0])
    for k in range(1, len(pts)):
        total = add(total, scale(phi(pts[k - 1]), sub(vals[k], vals[k - 1])))
    lam = path_length(f)
    omega = phi.lipschitz_bound(f.a, f.b) * Fraction(as_scalar(mesh))
    bound = omega * lam if is_exact(lam) else float(omega) * float(lam)
    return StieltjesResult(total, bound, len(pts))


# ---------------------------------------------------------------------------
# geometry of the norm


def l2_modulus(eps: float) -> float:
    """1 - sqrt(1 - eps^2/4), the modulus of convexity of the Euclidean norm."""
    return 1 - math.sqrt(1 - eps * eps / 4)


def l2_eta(eps: float) -> float:
    """eta(eps) for the averaged convexity lemma in the Euclidean norm.

    If ||a|| > 1 - eta then sum t_j ||v_j - a||^2 = sum t_j ||v_j||^2 - ||a||^2
    < 2 eta, so the weighted spread is below sqrt(2 eta).  The modulus is
    smaller than eps^2/2, so it is a valid (conservative) choice.
    """
    return l2_modulus(eps)


def _circle_points(norm: NormDescriptor, theta: np.ndarray) -> np.ndarray:
    u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return u / norm.evaluate_array(u)[..., None]


def _fibonacci_sphere(norm: NormDescriptor, G: int) -> np.ndarray:
    k = np.arange(G) + 0.5
    z = 1 - 2 * k / G
    r = np.sqrt(1 - z * z)
    ang = math.pi * (1 + 5 ** 0.5) * k
    u = np.stack([r * np.cos(ang), r * np.sin(ang), z], axis=-1)
    return u / norm.evaluate_array(u)[:, None]


@dataclass(frozen=True)
class ModulusRow:
    eps: float
    delta: float             # grid estimate, an upper bound for the true modulus
    oracle: float | None     # closed form for the Euclidean norm


def uniform_convexity_modulus(norm, eps_grid: Sequence[float], dim: int = 2, G: int = 4096,
                              scan: int = 512, chunk: int = 2048) -> list[ModulusRow]:
    """Estimate delta(eps) = 1 - sup{||(v+w)/2|| : ||v|| = ||w|| = 1, ||v - w|| >= eps}.

    In the plane, each of G sphere points v is paired with a scan of
    partners along the circle; every crossing of ||v - w|| = eps is located
    by bisection, and feasible scan points are kept as candidates too.  In
    3-space all pairs of a G-point Fibonacci grid are compared.
    """
    norm = NormDescriptor.parse(norm)
    if dim not in (1, 2, 3):
        raise DomainError("the sphere grid supports dimensions 1 to 3")
    eps_grid = [float(e) for e in eps_grid]
    if any(not 0 < e <= 2 for e in eps_grid):
        raise DomainError("eps must lie in (0, 2]")
    oracle = norm.kind == "lp" and norm.p == 2
    rows = []
    for eps in eps_grid:
        if dim == 1:
            best = 0.0                               # only v = 1, w = -1
        elif dim == 2:
            best = _best_midpoint_2d(norm, eps, G, scan, chunk)
        else:
            best = _best_midpoint_3d(norm, eps, G, chunk)
        rows.append(ModulusRow(eps, max(0.0, 1 - best), l2_modulus(eps) if oracle else None))
    return rows


def _best_midpoint_2d(norm, eps, G, scan, chunk) -> float:
    theta_v = 2 * math.pi * np.arange(G) / G
    offsets = math.pi * np.arange(1, scan + 1) / scan        # partners on the half circle
    best = -np.inf
    for s in range(0, G, chunk):
        tv = theta_v[s:s + chunk]
        v = _circle_points(norm, tv)                          # (c, 2)
        tw = tv[:, None] + offsets[None, :]                   # (c, scan)
        w = _circle_points(norm, tw)
        gap = norm.evaluate_array(v[:, None, :] - w) - eps
        mid = norm.evaluate_array((v[:, None, :] + w) / 2)
        feasible = gap >= 0
        if feasible.any():
            best = max(best, float(mid[feasible].max()))
        # bisection on every sign change between consecutive scan points,
        # starting from the partner at offset 0 (w = v, gap = -eps)
        g_prev = np.concatenate([np.full((len(tv), 1), -eps), gap[:, :-1]], axis=1)
        o_prev = np.concatenate([[0.0], offsets[:-1]])
        ci, cj = np.nonzero((g_prev < 0) != (gap < 0))
        if len(ci) == 0:
            continue
        lo = o_prev[cj].copy()
        hi = offsets[cj].copy()
        lo_neg = g_prev[ci, cj] < 0
        base = tv[ci]
        vv = v[ci]
        for _ in range(48):
            m = (lo + hi) / 2
            gm = norm.evaluate_array(vv - _circle_points(norm, base + m)) - eps
            same_as_lo = (gm < 0) == lo_neg
            lo = np.where(same_as_lo, m, lo)
            hi = np.where(same_as_lo, hi, m)
        # keep the feasible end of each bracket
        feas_end = np.where(lo_neg, hi, lo)
        w = _circle_points(norm, base + feas_end)
        ok = norm.evaluate_array(vv - w) >= eps
        if ok.any():
            best = max(best, float(norm.evaluate_array((vv + w) / 2)[ok].max()))
    return best


def _best_midpoint_3d(norm, eps, G, chunk) -> float:
    pts = _fibonacci_sphere(norm, G)
    best = -np.inf
    for s in range(0, G, chunk):
        v = pts[s:s + chunk]
        diff = norm.evaluate_array(v[:, None, :] - pts[None, :, :])
        mid = norm.evaluate_array((v[:, None, :] + pts[None, :, :]) / 2)
        feasible = diff >= eps
        if feasible.any():
            best = max(best, float(mid[feasible].max()))
    return best


@dataclass(frozen=True)
class AveragedConvexityReport:
    a: tuple
    a_norm: float
    spread: float            # sum t_j ||v_j - a||
    premise: bool            # ||a|| > 1 - eta
    holds: bool              # premise implies spread < eps
    counterexample: dict | None


def averaged_convexity_check(norm, vectors: Sequence, weights: Sequence, eps, eta) -> AveragedConvexityReport:
    norm = NormDescriptor.parse(norm)
    w = [as_scalar(t) for t in weights]
    if len(w) != len(vectors):
        raise DomainError("one weight per vector")
    if not all(is_exact(t) for t in w) or any(t < 0 for t in w) or sum(w) != 1:
        raise DomainError("weights must be nonnegative exact rationals summing to 1")
    vs = [_pt(v) for v in vectors]
    tol = get_tolerance()
    if any(float(norm_of(v, norm)) > 1 + tol for v in vs):
        raise DomainError("every vector must have norm at most 1")
    a = zero_like(vs[0])
    for t, v in zip(w, vs):
        a = add(a, scale(t, v))
    a_norm = float(norm_of(a, norm))
    spread = sum(float(t) * float(norm_of(sub(v, a), norm)) for t, v in zip(w, vs))
    premise = a_norm > 1 - float(eta)
    holds = not premise or spread < float(eps)
    ce = None if holds else {"vectors": vs, "weights": w, "a_norm": a_norm, "spread": spread,
                             "eps": float(eps), "eta": float(eta)}
    return AveragedConvexityReport(a if isinstance(a, tuple) else (a,), a_norm, spread, premise, holds, ce)


@dataclass(frozen=True)
class StrictConvexityResult:
    strictly_convex: bool          # True means no witness up to the grid
    v: tuple | None = None
    w: tuple | None = None
    t: Fraction | None = None
    exact: bool = False            # witness confirmed in rational arithmetic


def _snap_unit(x: np.ndarray, norm: NormDescriptor, den: int):
    """Nearest rational point with exact norm 1, if the norm allows it."""
    q = tuple(Fraction(float(c)).limit_denominator(den) for c in x)
    n = norm(q)
    if not is_exact(n) or n == 0:
        return None
    return tuple(c / n for c in q)


def _confirm(norm, x, y, den=1 << 12):
    v, w = _snap_unit(x, norm, den), _snap_unit(y, norm, den)
    if v is None or w is None or v == w:
        return None
    mid = tuple((p + q) / 2 for p, q in zip(v, w))
    if norm(mid) == 1:
        return v, w
    return None


def strict_convexity_witness(norm, dim: int = 2, G: int = 4096, trials: int = 20000, seed: int = 0,
                             min_sep: float = 1e-3) -> StrictConvexityResult:
    """Look for unit vectors v != w whose midpoint also has norm 1.

    Candidates with a midpoint deficit below the tolerance are snapped to
    nearby rational points and confirmed exactly whenever the norm of a
    rational vector is rational; otherwise the float witness is returned
    with ``exact=False``.
    """
    norm = NormDescriptor.parse(norm)
    if dim not in (2, 3):
        raise DomainError("strict convexity search supports dimensions 2 and 3")
    tol = get_tolerance()
    cands = _planar_candidates(norm, G, tol, min_sep) if norm.dim in (None, 2) else []
    if dim == 3 and norm.dim in (None, 3):
        embedded = []
        for (x, y) in cands:
            for axes in ((0, 1), (0, 2), (1, 2)):
                ex, ey = np.zeros(3), np.zeros(3)
                ex[list(axes)], ey[list(axes)] = x, y
                embedded.append((ex, ey))
        cands = embedded + _random_candidates(norm, trials, seed, tol, min_sep)
    float_hit = None
    for x, y in cands:
        hit = _confirm(norm, x, y)
        if hit:
            return StrictConvexityResult(False, hit[0], hit[1], Fraction(1, 2), True)
        float_hit = float_hit or (x, y)
    if float_hit is not None:
        x, y = float_hit
        return StrictConvexityResult(False, tuple(map(float, x)), tuple(map(float, y)), Fraction(1, 2), False)
    return StrictConvexityResult(True)


def _planar_candidates(norm, G, tol, min_sep, limit=64):
    theta = 2 * math.pi * np.arange(G) / G
    v = _circle_points(norm, theta)
    offs = np.unique(np.geomspace(1, G // 2, 64).astype(int))
    out = []
    for k in offs:
        w = np.roll(v, -k, axis=0)
        sep = norm.evaluate_array(v - w)
        deficit = 1 - norm.evaluate_array((v + w) / 2)
        idx = np.nonzero((deficit <= tol) & (sep >= min_sep))[0]
        for i in idx[:limit]:
            out.append((v[i], w[i]))
        if len(out) >= limit:
            break
    return out


def _random_candidates(norm, trials, seed, tol, min_sep, limit=64):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(trials, 3))
    y = x + rng.normal(scale=0.3, size=(trials, 3))
    x /= norm.evaluate_array(x)[:, None]
    y /= norm.evaluate_array(y)[:, None]
    sep = norm.evaluate_array(x - y)
    deficit = 1 - norm.evaluate_array((x + y) / 2)
    idx = np.nonzero((deficit <= tol) & (sep >= min_sep))[0][:limit]
    return [(x[i], y[i]) for i in idx]


# ---------------------------------------------------------------------------
# equality in the endpoint bound


@dataclass(frozen=True)
class EqualityChainReport:
    endpoint_equals_length: bool
    collinear_in_order: bool
    affine_reconstruction: bool


def equality_chain_check(f: Polyline) -> EqualityChainReport:
    """When ||f(b) - f(a)|| equals the length, every increment is a nonnegative
    multiple of f(b) - f(a) and the knots sit at the length-proportional
    points f(a) + (Lambda_a^x / Lambda_a^b)(f(b) - f(a)).
    """
    D = sub(f.points[-1], f.points[0])
    lam = path_length(f)
    end = norm_of(D, f.norm)
    equal = end == lam if is_exact(end) and is_exact(lam) else abs(float(end) - float(lam)) <= get_tolerance()
    coords = D if isinstance(D, tuple) else (D,)
    ratios = []
    if all(c == 0 for c in coords):
        # a closed loop is collinear only when it never moves
        still = all(all(x == 0 for x in (d if isinstance(d, tuple) else (d,))) for d in f.increments())
        return EqualityChainReport(equal, still, still)
    collinear = True
    for d in f.increments():
        dc = d if isinstance(d, tuple) else (d,)
        k = next((i for i, c in enumerate(coords) if c != 0), None)
        if k is None:
            collinear = False
            break
        r = dc[k] / coords[k]
        if r < 0 or any(x != r * c for x, c in zip(dc, coords)):
            collinear = False
            break
        ratios.append(r)
    affine = False
    if collinear:
        cum, affine = Fraction(0), True
        for r, p in zip(ratios, f.points[1:]):
            cum += r
            if p != add(f.points[0], scale(cum, D)):
                affine = False
    return EqualityChainReport(equal, collinear, affine)


def random_polyline(rng: random.Random, m: int = 6, dim: int = 1, interp: str = "linear",
                    norm=None, span: int = 20) -> Polyline:
    knots = sorted(rng.sample(range(0, 10 * m), m + 1))
    knots = [Fraction(k, rng.randint(1, 3)) for k in knots]
    knots = sorted(set(knots))
    while len(knots) < 2:
        knots.append(knots[-1] + 1)

    def pt():
        if dim == 1:
            return Fraction(rng.randint(-span, span), rng.randint(1, 5))
        return tuple(Fraction(rng.randint(-span, span), rng.randint(1, 5)) for _ in range(dim))

    return Polyline(tuple(knots), tuple(pt() for _ in knots), interp, NormDescriptor.parse(norm))
