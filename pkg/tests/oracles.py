"""Reference computations that do not go through the package's Groebner code."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy as sp


def monomials_upto(nvars, degree):
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            yield tuple(e)


def _mul_mono(terms, m):
    return {tuple(a + b for a, b in zip(e, m)): c for e, c in terms.items()}


def in_span(target, vectors):
    """Exact Gaussian elimination: is ``target`` a rational combination of ``vectors``?

    Vectors are sparse dicts keyed by monomial.
    """
    pivots = {}  # pivot monomial -> reduced row
    order = []

    def reduce(v):
        v = dict(v)
        for piv in order:
            c = v.get(piv)
            if c:
                row = pivots[piv]
                for k, val in row.items():
                    nv = v.get(k, 0) - c * val
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    for vec in vectors:
        r = reduce(vec)
        if not r:
            continue
        piv = max(r)
        inv = 1 / r[piv]
        r = {k: val * inv for k, val in r.items()}
        # keep earlier rows reduced with respect to the new pivot
        for p in order:
            row = pivots[p]
            c = row.get(piv)
            if c:
                for k, val in r.items():
                    nv = row.get(k, 0) - c * val
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        pivots[piv] = r
        order.append(piv)
    return not reduce(target)


def dense_member(p_terms, gens_terms, nvars, bound):
    """Is ``p = Σ hᵢ gᵢ`` with ``deg(hᵢ gᵢ) ≤ bound``?  Degree-truncated linear algebra."""
    vectors = []
    for g in gens_terms:
        dg = max((sum(e) for e in g), default=0)
        for m in monomials_upto(nvars, max(bound - dg, -1)):
            vectors.append(_mul_mono(g, m))
    return in_span(dict(p_terms), vectors)


def random_terms(rng: random.Random, nvars, degree, nterms, coeff=3):
    out = {}
    mons = list(monomials_upto(nvars, degree))
    for _ in range(nterms):
        e = rng.choice(mons)
        c = Fraction(rng.randint(-coeff, coeff))
        if c:
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def mul_terms(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def add_terms(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def degree(terms):
    return max((sum(e) for e in terms), default=0)


def to_sympy(terms, symbols):
    return sum((sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s**k for s, k in zip(symbols, e)]) for e, c in terms.items()), sp.Integer(0))


def sympy_monic_basis(exprs, symbols):
    G = sp.groebner(exprs, *symbols, order="grevlex")
    out = set()
    for g in G.exprs:
        P = sp.Poly(g, *symbols)
        lc = P.LC(order="grevlex")
        out.add(sp.expand(g / lc))
    return out


def sympy_expand(text, names):
    syms = {n: sp.Symbol(n) for n in names}
    return sp.expand(sp.sympify(text.replace("^", "**"), locals=syms))
