"""Shared hypothesis strategies for exact inputs."""

from fractions import Fraction

from hypothesis import strategies as st

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=7)
nonneg = st.fractions(min_value=0, max_value=8, max_denominator=7)
positive = st.fractions(min_value=Fraction(1, 7), max_value=8, max_denominator=7)


def vectors(min_size=1, max_size=6, elements=rationals):
    return st.lists(elements, min_size=min_size, max_size=max_size)


def vec2(elements=rationals):
    return st.tuples(elements, elements)
