"""Measures on finite atomic spaces.

Every sigma-algebra here is generated by a partition of the atoms, so sets
are just collections of atom indices and every decomposition is exact.
Weights may be real (Fraction), complex (ExactComplex) or d-vectors (tuples)
measured with a :class:`~summa.norms.NormDescriptor`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AbsoluteContinuityError, DomainError, MeasurabilityError
from .norms import (L2, ExactComplex, NormDescriptor, as_scalar, is_exact,
                    norm_of, scale, sub, total, zero_like)


@dataclass(frozen=True)
class AtomSpace:
    """Finitely many labelled atoms, optionally with probability weights."""

    labels: tuple
    base_weights: tuple | None = None

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise DomainError("an atom space needs at least one atom")
        if len(set(labels)) != len(labels):
            raise DomainError("atom labels must be distinct")
        object.__setattr__(self, "labels", labels)
        if self.base_weights is not None:
            w = tuple(as_scalar(x) for x in self.base_weights)
            if len(w) != len(labels):
                raise DomainError("one base weight per atom")
            if any(x < 0 for x in w) or sum(w) != 1:
                raise DomainError("base weights must be nonnegative and sum to exactly 1")
            object.__setattr__(self, "base_weights", w)

    @classmethod
    def uniform(cls, n: int) -> "AtomSpace":
        return cls(tuple(range(n)), tuple(Fraction(1, n) for _ in range(n)))

    def __len__(self):
        return len(self.labels)

    def prob(self, A: Iterable[int]) -> Fraction:
        if self.base_weights is None:
            raise DomainError("this atom space has no base weights")
        return sum((self.base_weights[i] for i in A), Fraction(0))


@dataclass(frozen=True)
class PartitionAlgebra:
    """The sigma-algebra of unions of cells of a partition of range(n)."""

    cells: tuple
    n: int

    def __post_init__(self):
        cells = [tuple(sorted(set(c))) for c in self.cells]
        if any(not c for c in cells):
            raise DomainError("partition cells must be nonempty")
        flat = sorted(i for c in cells for i in c)
        if flat != list(range(self.n)):
            raise DomainError(f"cells do not form an exact cover of range({self.n})")
        cells.sort(key=lambda c: c[0])
        object.__setattr__(self, "cells", tuple(cells))
        object.__setattr__(self, "_cell_of", {i: k for k, c in enumerate(cells) for i in c})

    @classmethod
    def discrete(cls, n: int) -> "PartitionAlgebra":
        return cls(tuple((i,) for i in range(n)), n)

    @classmethod
    def trivial(cls, n: int) -> "PartitionAlgebra":
        return cls((tuple(range(n)),), n)

    def cell_index(self, atom: int) -> int:
        return self._cell_of[atom]

    def is_measurable(self, A: Iterable[int]) -> bool:
        A = set(A)
        return all(set(c) <= A or not (set(c) & A) for c in self.cells)

    def cells_in(self, A: Iterable[int]) -> list[tuple]:
        """The cells making up A; raises if A is not a union of cells."""
        A = set(A)
        if not A <= set(range(self.n)):
            raise DomainError("set contains atoms outside the space")
        out = []
        for c in self.cells:
            inter = A.intersection(c)
            if inter and len(inter) != len(c):
                raise MeasurabilityError(f"set cuts cell {c}")
            if inter:
                out.append(c)
        return out

    def refines(self, coarser: "PartitionAlgebra") -> bool:
        """True when every cell of self lies inside one cell of ``coarser``."""
        return self.n == coarser.n and all(
            len({coarser.cell_index(i) for i in c}) == 1 for c in self.cells)

    def cell_of_atom(self, atom: int) -> int:
        return self._cell_of[atom]

    def is_function_measurable(self, values: Sequence) -> bool:
        return all(len({values[i] for i in c}) == 1 for c in self.cells)


@dataclass(frozen=True)
class SignedMeasure:
    """Real, complex or vector weights on the atoms of a space."""

    space: AtomSpace
    weights: tuple
    norm: NormDescriptor = L2

    def __post_init__(self):
        w = tuple(tuple(as_scalar(c) for c in x) if isinstance(x, (tuple, list)) else as_scalar(x)
                  for x in self.weights)
        if len(w) != len(self.space):
            raise DomainError("one weight per atom")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_weights(cls, weights: Sequence, norm=None, labels=None) -> "SignedMeasure":
        labels = tuple(range(len(weights))) if labels is None else tuple(labels)
        return cls(AtomSpace(labels), tuple(weights), NormDescriptor.parse(norm))

    @property
    def kind(self) -> str:
        if any(isinstance(x, tuple) for x in self.weights):
            return "vector"
        if any(isinstance(x, (ExactComplex, complex)) for x in self.weights):
            return "complex"
        return "real"

    def __len__(self):
        return len(self.weights)

    def __call__(self, A: Iterable[int]):
        return self.measure(A)

    def measure(self, A: Iterable[int]):
        A = list(A)
        if not A:
            return zero_like(self.weights[0])
        return total(self.weights[i] for i in A)

    def atom_norm(self, i: int):
        return norm_of(self.weights[i], self.norm)

    def is_nonnegative(self) -> bool:
        return self.kind == "real" and all(x >= 0 for x in self.weights)

    def with_weights(self, weights: Sequence) -> "SignedMeasure":
        return SignedMeasure(self.space, tuple(weights), self.norm)

    def __neg__(self):
        return self.with_weights(scale(-1, x) for x in self.weights)

    def all_atoms(self) -> range:
        return range(len(self.weights))


def _require_real(mu: SignedMeasure):
    if mu.kind != "real":
        raise DomainError("this operation needs a real signed measure")


def _require_nonnegative(nu: SignedMeasure):
    if not nu.is_nonnegative():
        raise DomainError("reference measure must be real and nonnegative")


def total_variation(mu: SignedMeasure, P: PartitionAlgebra | None = None, A=None):
    """|mu|(A) relative to the algebra generated by P (discrete by default).

    On a partition algebra the finest measurable split of A is into the cells
    it contains, so |mu|(A) is the sum of ||mu(C)|| over those cells.
    """
    P = PartitionAlgebra.discrete(len(mu)) if P is None else P
    A = mu.all_atoms() if A is None else A
    vals = [norm_of(mu.measure(c), mu.norm) for c in P.cells_in(A)]
    if all(is_exact(v) for v in vals):
        return sum(vals, Fraction(0))
    return float(sum(float(v) for v in vals))


def variation_measure(mu: SignedMeasure) -> SignedMeasure:
    """|mu| as a nonnegative measure on the discrete algebra."""
    return SignedMeasure(mu.space, tuple(mu.atom_norm(i) for i in mu.all_atoms()))


def jordan_decompose(mu: SignedMeasure) -> tuple[SignedMeasure, SignedMeasure]:
    """(mu+, mu-) with mu = mu+ - mu- and |mu| = mu+ + mu-, atomwise."""
    _require_real(mu)
    plus = tuple(max(x, Fraction(0)) for x in mu.weights)
    minus = tuple(max(-x, Fraction(0)) for x in mu.weights)
    return mu.with_weights(plus), mu.with_weights(minus)


def hahn_decompose(mu: SignedMeasure) -> tuple[frozenset, frozenset]:
    """Split the atoms into P (weight >= 0, zero atoms included) and Q."""
    _require_real(mu)
    P = frozenset(i for i, x in enumerate(mu.weights) if x >= 0)
    return P, frozenset(mu.all_atoms()) - P


def radon_nikodym(mu: SignedMeasure, nu: SignedMeasure) -> tuple:
    """Density h with mu(A) = sum_A h nu; zero on nu-null atoms."""
    _require_nonnegative(nu)
    if len(nu) != len(mu):
        raise DomainError("measures live on different spaces")
    h = []
    for i, (m, n) in enumerate(zip(mu.weights, nu.weights)):
        if n == 0:
            if _nonzero(m):
                raise AbsoluteContinuityError(i)
            h.append(zero_like(m))
        else:
            h.append(scale(1 / n, m) if is_exact(m) and is_exact(n) else scale(1 / float(n), m))
    return tuple(h)


def _nonzero(x) -> bool:
    if isinstance(x, tuple):
        return any(c != 0 for c in x)
    return x != 0


def reconstruct(h: Sequence, nu: SignedMeasure, A: Iterable[int]):
    """sum over A of h * nu, the inverse of :func:`radon_nikodym`."""
    A = list(A)
    if not A:
        return zero_like(h[0])
    return total(scale(nu.weights[i], h[i]) for i in A)


def lebesgue_decompose(mu: SignedMeasure, nu: SignedMeasure):
    """(mu_ac, mu_sing, h): mu_sing lives on the nu-null atoms, mu_ac << nu."""
    _require_nonnegative(nu)
    null = [n == 0 for n in nu.weights]
    sing = tuple(m if z else zero_like(m) for m, z in zip(mu.weights, null))
    ac = tuple(zero_like(m) if z else m for m, z in zip(mu.weights, null))
    mu_ac, mu_sing = mu.with_weights(ac), mu.with_weights(sing)
    return mu_ac, mu_sing, radon_nikodym(mu_ac, nu)


def symdiff_distance(mu: SignedMeasure, A: Iterable[int], B: Iterable[int]):
    """mu(A symmetric-difference B) for a nonnegative mu."""
    _require_nonnegative(mu)
    return mu.measure(sorted(set(A) ^ set(B)))


def two_set_variation(mu: SignedMeasure, A: Iterable[int]):
    """max over splits A = B + C of ||mu(B)|| + ||mu(C)||, exhaustively."""
    A = sorted(A)
    best = Fraction(0)
    for mask in range(1 << len(A)):
        B = [a for k, a in enumerate(A) if mask >> k & 1]
        C = [a for k, a in enumerate(A) if not mask >> k & 1]
        v = norm_of(mu.measure(B), mu.norm) + norm_of(mu.measure(C), mu.norm)
        if v > best:
            best = v
    return best


def all_subsets(n: int):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def difference(mu: SignedMeasure, nu: SignedMeasure) -> SignedMeasure:
    return mu.with_weights(sub(a, b) for a, b in zip(mu.weights, nu.weights))
