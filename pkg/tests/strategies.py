"""Hypothesis strategies shared across the suite."""
from hypothesis import strategies as st

from carnot.builtins import builtin, builtin_names

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)

builtin_algebras = st.sampled_from(builtin_names()).map(builtin)


def elements(alg, rationals=small_rationals):
    return st.lists(rationals, min_size=alg.dim, max_size=alg.dim).map(alg.element)


def planes(alg, n):
    return st.lists(elements(alg), min_size=n, max_size=n)
