"""Scalars, finite sequences and l^p norms.

Two number modes coexist.  Exact values are :class:`fractions.Fraction`
(or :class:`ExactComplex` for complex values); they are used whenever an
operation is closed over the rationals.  Everything involving a root that
is not itself rational drops to binary64 floats, compared with the
module-wide tolerance (see :func:`get_tolerance`).

Vectors are plain tuples of scalars.  The exponent ``INF`` stands for the
supremum norm.
"""

from __future__ import annotations

import contextlib
import math
import re
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

INF = math.inf

_tolerance = 1e-9


def get_tolerance() -> float:
    """Absolute tolerance used for every float comparison."""
    return _tolerance


def set_tolerance(tol: float) -> None:
    global _tolerance
    if not tol >= 0:
        raise DomainError(f"tolerance must be nonnegative, got {tol}")
    _tolerance = float(tol)


@contextlib.contextmanager
def tolerance(tol: float):
    """Temporarily override the float tolerance."""
    old = _tolerance
    set_tolerance(tol)
    try:
        yield
    finally:
        set_tolerance(old)


# ---------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def lift(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactComplex(Fraction(x))
        raise TypeError(f"cannot lift {x!r} to an exact complex number")

    def __add__(self, other):
        try:
            o = ExactComplex.lift(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = ExactComplex.lift(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            o = ExactComplex.lift(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re * o.re - self.im * o.im,
                            self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = ExactComplex.lift(other)
        except TypeError:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("complex division by zero")
        n = self * o.conjugate()
        return ExactComplex(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        return ExactComplex.lift(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = ExactComplex(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ExactComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, always exact."""
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return modulus(self)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"


def is_exact(x) -> bool:
    """True for rationals, exact complex numbers and tuples of those."""
    if isinstance(x, (tuple, list)):
        return all(is_exact(c) for c in x)
    return isinstance(x, (int, Fraction, ExactComplex)) and not isinstance(x, bool)


_POWER_DENOMINATOR = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)\s*\^\s*(\d+)$")


def as_scalar(x):
    """Coerce user input to a scalar of the right mode.

    Integers and strings such as ``"3/4"`` or ``"0.25"`` become exact
    fractions; floats stay floats.
    """
    if isinstance(x, (Fraction, ExactComplex, float, complex)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "infinity", "oo"):
            return INF
        m = _POWER_DENOMINATOR.match(s)
        if m:  # dyadic literals such as "3/2^5"
            return Fraction(int(m[1]), int(m[2]) ** int(m[3]))
        return Fraction(s)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, np.floating):
        return float(x)
    raise TypeError(f"not a scalar: {x!r}")


def iroot(k: int, n: int) -> int:
    """Floor of the n-th root of a nonnegative integer."""
    if k < 0:
        raise DomainError("iroot of a negative integer")
    if n == 1 or k < 2:
        return k
    if n == 2:
        return math.isqrt(k)
    x = 1 << ((k.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + k // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x ** n > k:
        x -= 1
    while (x + 1) ** n <= k:
        x += 1
    return x


def exact_root(q, n: int):
    """The exact n-th root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = iroot(q.numerator, n), iroot(q.denominator, n)
    if a ** n == q.numerator and b ** n == q.denominator:
        return Fraction(a, b)
    return None


def root_bounds(q, n: int, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational bracket lo <= q**(1/n) <= hi of width at most 2**-bits."""
    q = Fraction(q)
    if q < 0:
        raise DomainError("root of a negative number")
    # q**(1/n) = (num * den**(n-1))**(1/n) / den
    k = q.numerator * q.denominator ** (n - 1) << (bits * n)
    lo = iroot(k, n)
    hi = lo if lo ** n == k else lo + 1
    scale = q.denominator << bits
    return Fraction(lo, scale), Fraction(hi, scale)


def modulus(x):
    """|x|: exact when the modulus is rational, float otherwise."""
    if isinstance(x, (int, Fraction)):
        return abs(Fraction(x))
    if isinstance(x, ExactComplex):
        if x.im == 0:
            return abs(x.re)
        a2 = x.abs2()
        r = exact_root(a2, 2)
        return r if r is not None else math.sqrt(a2)
    return abs(x)


def real_power(x, p):
    """x**p for x >= 0, exact whenever the result is rational."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(p, int):
        p = Fraction(p)
    if isinstance(x, Fraction) and isinstance(p, Fraction):
        if p.denominator == 1:
            if x == 0 and p < 0:
                raise ZeroDivisionError("0 to a negative power")
            return x ** int(p)
        r = exact_root(x ** p.numerator if p > 0 else 1 / x ** -p.numerator,
                       p.denominator)
        if r is not None:
            return r
    return float(x) ** float(p)


def exponent(p):
    """Normalize an exponent: INF, an exact Fraction, or a float."""
    if isinstance(p, str):
        p = as_scalar(p)
    if isinstance(p, bool):
        raise DomainError("boolean exponent")
    if isinstance(p, int):
        p = Fraction(p)
    if isinstance(p, float):
        if math.isinf(p) and p > 0:
            return INF
        if p.is_integer():
            p = Fraction(int(p))
    if not p > 0:
        raise DomainError(f"exponent must be positive, got {p}")
    return p


def reciprocal(p):
    """1/p with 1/INF = 0."""
    if p == INF:
        return Fraction(0)
    return 1 / p


def leq(a, b, tol: float | None = None) -> bool:
    """a <= b, exactly for rationals and within the tolerance otherwise."""
    if is_exact(a) and is_exact(b):
        return a <= b
    return float(a) <= float(b) + (_tolerance if tol is None else tol)


def lt(a, b, tol: float | None = None) -> bool:
    if is_exact(a) and is_exact(b):
        return a < b
    return float(a) < float(b) - (_tolerance if tol is None else tol)


def close(a, b, tol: float | None = None) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(complex(a) - complex(b)) <= (_tolerance if tol is None else tol)


# ---------------------------------------------------------------------------
# vectors


def add(x, y):
    if isinstance(x, tuple):
        return tuple(a + b for a, b in zip(x, y))
    return x + y


def sub(x, y):
    if isinstance(x, tuple):
        return tuple(a - b for a, b in zip(x, y))
    return x - y


def scale(c, x):
    if isinstance(x, tuple):
        return tuple(c * a for a in x)
    return c * x


def zero_like(x):
    if isinstance(x, tuple):
        return tuple(Fraction(0) for _ in x)
    if isinstance(x, ExactComplex):
        return ExactComplex(0)
    if isinstance(x, (float, complex)):
        return 0.0
    return Fraction(0)


def total(values: Iterable, start=None):
    """Sum that also works for tuple-valued terms."""
    it = iter(values)
    acc = start
    for v in it:
        acc = v if acc is None else add(acc, v)
    return Fraction(0) if acc is None else acc


def lp_norm(v: Sequence, p=2):
    """The l^p (quasi-)norm of a finite sequence under counting measure.

    Exact when the inputs are exact and the result is rational, which always
    happens for ``p = 1`` and ``p = INF``.

    >>> lp_norm((3, 4), 2)
    Fraction(5, 1)
    """
    p = exponent(p)
    mods = [modulus(as_scalar(x)) for x in v]
    if not mods:
        return Fraction(0)
    if p == INF:
        return max(mods)
    s = sum(real_power(m, p) for m in mods)
    return real_power(s, reciprocal(p))


@dataclass(frozen=True)
class HolderReport:
    lhs: object
    rhs: object
    holds: bool
    equality: bool


def conjugate_exponents(p, q) -> bool:
    if p == INF:
        return q == 1
    if q == INF:
        return p == 1
    if p < 1 or q < 1:
        return False
    s = reciprocal(p) + reciprocal(q)
    if isinstance(s, Fraction):
        return s == 1
    return abs(s - 1) <= _tolerance


def holder_verify(f: Sequence, g: Sequence, p, q) -> HolderReport:
    """Compare ||f g||_1 with ||f||_p ||g||_q."""
    if len(f) != len(g):
        raise DomainError(f"length mismatch: {len(f)} != {len(g)}")
    p, q = exponent(p), exponent(q)
    if not conjugate_exponents(p, q):
        raise DomainError(f"exponents {p} and {q} are not conjugate")
    prod = [as_scalar(a) * as_scalar(b) for a, b in zip(f, g)]
    lhs = lp_norm(prod, 1)
    if p == q == 2 and is_exact(f) and is_exact(g):
        # product of the two square sums keeps the Cauchy-Schwarz case exact
        sq = lambda v: sum(modulus(as_scalar(x)) ** 2 for x in v)
        rhs = real_power(sq(f) * sq(g), Fraction(1, 2))
    else:
        rhs = _mul(lp_norm(f, p), lp_norm(g, q))
    return HolderReport(lhs, rhs, leq(lhs, rhs), close(lhs, rhs))


def _mul(a, b):
    if is_exact(a) and is_exact(b):
        return a * b
    return float(a) * float(b)


@dataclass(frozen=True)
class InterpolationReport:
    t: object
    lhs: object
    rhs: object
    holds: bool


def lp_interpolate(f: Sequence, p, q, r) -> InterpolationReport:
    """Log-convexity of p -> ||f||_p in 1/p: ||f||_r <= ||f||_p^t ||f||_q^(1-t)."""
    p, q, r = exponent(p), exponent(q), exponent(r)
    if not (p < r < q):
        raise DomainError("need 0 < p < r < q <= inf")
    ip, iq, ir = reciprocal(p), reciprocal(q), reciprocal(r)
    t = (ir - iq) / (ip - iq)
    lhs = lp_norm(f, r)
    a, b = lp_norm(f, p), lp_norm(f, q)
    rhs = _mul(real_power(a, t), real_power(b, 1 - t))
    return InterpolationReport(t, lhs, rhs, leq(lhs, rhs))


def p_subadditivity_check(a, b, p) -> bool:
    """(a + b)^p <= a^p + b^p for nonnegative a, b and 0 < p <= 1."""
    p = exponent(p)
    if p > 1:
        raise DomainError(f"p must lie in (0, 1], got {p}")
    a, b = as_scalar(a), as_scalar(b)
    if a < 0 or b < 0:
        raise DomainError("a and b must be nonnegative")
    lhs = real_power(a + b, p)
    rhs = real_power(a, p) + real_power(b, p)
    return leq(lhs, rhs)


# ---------------------------------------------------------------------------
# norm descriptors


def _edge_normals(vertices):
    out = []
    n = len(vertices)
    for k in range(n):
        (x0, y0), (x1, y1) = vertices[k], vertices[(k + 1) % n]
        normal = (y1 - y0, x0 - x1)
        h = normal[0] * x0 + normal[1] * y0
        out.append((normal, h))
    return out


@dataclass(frozen=True)
class NormDescriptor:
    """A norm on a finite-dimensional real (or complex, for l^p) space.

    ``kind`` is ``"lp"``, ``"weighted"`` (weights times |v_i|^p) or
    ``"table"``: a centrally symmetric convex polygon in the plane, listed
    counterclockwise, whose gauge is the norm.
    """

    kind: str = "lp"
    p: object = Fraction(2)
    weights: tuple = ()
    vertices: tuple = ()
    _normals: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p", exponent(self.p))
        if self.kind == "lp":
            return
        if self.kind == "weighted":
            w = tuple(as_scalar(x) for x in self.weights)
            if not w or any(x <= 0 for x in w):
                raise DomainError("weights must be positive")
            object.__setattr__(self, "weights", w)
        elif self.kind == "table":
            vs = tuple(tuple(as_scalar(c) for c in v) for v in self.vertices)
            object.__setattr__(self, "vertices", vs)
            self._validate_table()
        else:
            raise DomainError(f"unknown norm kind {self.kind!r}")
        if self.p != INF and self.p < 1:
            raise DomainError("p must be at least 1 for a norm")
        self._random_triangle_trials()

    def _validate_table(self):
        vs = self.vertices
        m = len(vs)
        if m < 4 or m % 2 or any(len(v) != 2 for v in vs):
            raise DomainError("table norm needs an even number >= 4 of planar vertices")
        half = m // 2
        for k in range(half):
            if vs[k + half] != (-vs[k][0], -vs[k][1]):
                raise DomainError("table norm polygon is not centrally symmetric")
        normals = _edge_normals(vs)
        if any(h <= 0 for _, h in normals):
            raise DomainError("table polygon must be counterclockwise around 0")
        object.__setattr__(self, "_normals", tuple(normals))
        for v in vs:
            if self(v) != 1:
                raise DomainError(f"table polygon is not convex at vertex {v}")

    def _random_triangle_trials(self, trials: int = 200):
        rng = random.Random(0)
        d = self.dim or 3
        for _ in range(trials):
            u = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(d))
            w = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(d))
            if not leq(self(add(u, w)), _sum2(self(u), self(w))):
                raise DomainError(f"triangle inequality fails for {u}, {w}")

    @property
    def dim(self):
        if self.kind == "weighted":
            return len(self.weights)
        if self.kind == "table":
            return 2
        return None

    def __call__(self, v):
        if not isinstance(v, (tuple, list)):
            return modulus(as_scalar(v))
        v = tuple(as_scalar(x) for x in v)
        if self.dim is not None and len(v) != self.dim:
            raise DomainError(f"vector of length {len(v)} for a {self.dim}-dimensional norm")
        if self.kind == "lp":
            return lp_norm(v, self.p)
        if self.kind == "weighted":
            mods = [modulus(x) for x in v]
            if self.p == INF:
                return max(_mul(w, m) for w, m in zip(self.weights, mods))
            s = sum(_mul(w, real_power(m, self.p)) for w, m in zip(self.weights, mods))
            return real_power(s, reciprocal(self.p))
        x, y = v
        return max((n[0] * x + n[1] * y) / h for n, h in self._normals)

    def evaluate_array(self, arr) -> np.ndarray:
        """Vectorized float evaluation; coordinates on the last axis."""
        arr = np.asarray(arr, dtype=float)
        if self.kind == "lp":
            a = np.abs(arr)
            if self.p == INF:
                return a.max(axis=-1)
            p = float(self.p)
            if p == 2:
                return np.sqrt((a * a).sum(axis=-1))
            if p == 1:
                return a.sum(axis=-1)
            return (a ** p).sum(axis=-1) ** (1 / p)
        if self.kind == "weighted":
            w = np.array([float(x) for x in self.weights])
            a = np.abs(arr)
            if self.p == INF:
                return (w * a).max(axis=-1)
            p = float(self.p)
            return (w * a ** p).sum(axis=-1) ** (1 / p)
        nm = np.array([[float(n[0]) / float(h), float(n[1]) / float(h)]
                       for n, h in self._normals])
        return (arr @ nm.T).max(axis=-1)

    @property
    def strictly_convex_lp(self) -> bool:
        return self.kind in ("lp", "weighted") and self.p not in (1, INF)

    @classmethod
    def parse(cls, desc) -> "NormDescriptor":
        """Build from ``"l1"``, ``"l2"``, ``"linf"``, ``"l1.5"``, ``"lp:3/2"`` or a dict."""
        if isinstance(desc, NormDescriptor):
            return desc
        if desc is None:
            return cls()
        if isinstance(desc, dict):
            kind = desc.get("kind", "lp")
            return cls(kind=kind, p=desc.get("p", 2), weights=tuple(desc.get("weights", ())),
                       vertices=tuple(tuple(v) for v in desc.get("vertices", ())))
        s = str(desc).strip().lower()
        if s.startswith("lp:"):
            s = s[3:]
        elif s.startswith("l"):
            s = s[1:]
        return cls(p=as_scalar(s) if s not in ("inf", "infinity") else INF)

    def to_json(self):
        p = "inf" if self.p == INF else str(self.p)
        if self.kind == "lp":
            return {"kind": "lp", "p": p}
        if self.kind == "weighted":
            return {"kind": "weighted", "p": p, "weights": [str(w) for w in self.weights]}
        return {"kind": "table", "vertices": [[str(c) for c in v] for v in self.vertices]}

    def label(self) -> str:
        if self.kind == "lp":
            return "linf" if self.p == INF else f"l{self.p}"
        return self.kind


def _sum2(a, b):
    if is_exact(a) and is_exact(b):
        return a + b
    return float(a) + float(b)


L1 = NormDescriptor(p=1)
L2 = NormDescriptor(p=2)
LINF = NormDescriptor(p=INF)


def norm_of(x, norm: NormDescriptor | None = None):
    """Norm of a scalar (modulus) or of a tuple (default l2)."""
    if isinstance(x, (tuple, list)):
        return (norm or L2)(x)
    return modulus(as_scalar(x))
