"""Hypothesis strategies for small polynomials."""

from fractions import Fraction

from hypothesis import strategies as st

from dkernel.ring import Poly


def exponents(nvars, max_deg):
    return st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars).filter(
        lambda e: sum(e) <= max_deg
    ).map(tuple)


def polys(nvars, max_deg=2, max_terms=4):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=3)
    return st.dictionaries(exponents(nvars, max_deg), coeff, max_size=max_terms).map(
        lambda d: Poly(nvars, {e: Fraction(c) for e, c in d.items() if c})
    )
