"""Buchberger's algorithm and the ideal operations built on it."""

from __future__ import annotations

import contextlib
import contextvars
import threading
from fractions import Fraction
from typing import Iterable, Sequence

from .ring import (
    GREVLEX,
    AlgebraElement,
    MonomialOrder,
    Poly,
    PresentedAlgebra,
    _mono_divides,
    _mono_lcm,
    elimination_order,
)

DEFAULT_MAX_DEGREE = 40
DEFAULT_MAX_BASIS = 2000

_max_degree = contextvars.ContextVar("max_degree", default=DEFAULT_MAX_DEGREE)
_max_basis = contextvars.ContextVar("max_basis", default=DEFAULT_MAX_BASIS)


class ResourceExhausted(RuntimeError):
    """A Groebner computation hit a configured cap."""


@contextlib.contextmanager
def resource_limits(max_degree: int | None = None, max_basis: int | None = None):
    """Temporarily change the degree cap and basis-size cap."""
    tokens = []
    if max_degree is not None:
        tokens.append((_max_degree, _max_degree.set(max_degree)))
    if max_basis is not None:
        tokens.append((_max_basis, _max_basis.set(max_basis)))
    try:
        yield
    finally:
        for var, tok in reversed(tokens):
            var.reset(tok)


def normal_form(p: Poly, basis: Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    """Fully reduce ``p`` by a list of monic polynomials."""
    if not p.terms or not basis:
        return p
    key = order.key
    lead = []
    for g in basis:
        lm = max(g.terms, key=key)
        tail = [(e, c) for e, c in g.terms.items() if e != lm]
        lead.append((lm, g.terms[lm], tail))
    todo = dict(p.terms)
    rem = {}
    while todo:
        m = max(todo, key=key)
        c = todo.pop(m)
        for lm, lc, tail in lead:
            if all(x <= y for x, y in zip(lm, m)):
                q = tuple(x - y for x, y in zip(m, lm))
                f = c / lc
                for e, d in tail:
                    t = tuple(x + y for x, y in zip(e, q))
                    s = todo.get(t, 0) - f * d
                    if s:
                        todo[t] = s
                    else:
                        todo.pop(t, None)
                break
        else:
            rem[m] = c
    return Poly._raw(p.nvars, rem)


def _spoly(f: Poly, g: Poly, lf, lg, order) -> Poly:
    lcm = _mono_lcm(lf, lg)
    a = tuple(x - y for x, y in zip(lcm, lf))
    b = tuple(x - y for x, y in zip(lcm, lg))
    return f.mul_term(a, Fraction(1)) - g.mul_term(b, Fraction(1))


def buchberger(gens: Iterable[Poly], order: MonomialOrder = GREVLEX, nvars: int | None = None) -> list[Poly]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Output is monic, inter-reduced and sorted by decreasing leading monomial,
    so it is determined by the ideal and the order.  ``[1]`` signals the unit
    ideal and ``[]`` the zero ideal.
    """
    key = order.key
    G: list[Poly] = []
    LM: list = []
    polys = [g for g in gens if g.terms]
    if not polys:
        return []
    if nvars is None:
        nvars = polys[0].nvars
    cap = _max_degree.get()
    size_cap = _max_basis.get()

    def add(h: Poly):
        h = h.monic(order)
        lm = max(h.terms, key=key)
        G.append(h)
        LM.append(lm)
        if h.total_degree() > cap:
            raise ResourceExhausted(f"basis element of degree {h.total_degree()} exceeds cap {cap}")
        if len(G) > size_cap:
            raise ResourceExhausted(f"basis size exceeds cap {size_cap}")
        return len(G) - 1

    pairs: set = set()
    for p in sorted(polys, key=lambda q: key(max(q.terms, key=key))):
        r = normal_form(p, G, order)
        if r.terms:
            if r.is_constant():
                return [Poly.constant(nvars, 1)]
            j = add(r)
            pairs.update((i, j) for i in range(j))

    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_mono_lcm(LM[ij[0]], LM[ij[1]])), ij))
        pairs.discard((i, j))
        lcm = _mono_lcm(LM[i], LM[j])
        # first criterion: coprime leading monomials
        if all(a == 0 or b == 0 for a, b in zip(LM[i], LM[j])):
            continue
        # second (chain) criterion
        if any(
            k != i
            and k != j
            and _mono_divides(LM[k], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue
        s = normal_form(_spoly(G[i], G[j], LM[i], LM[j], order), G, order)
        if s.terms:
            if s.is_constant():
                return [Poly.constant(nvars, 1)]
            k = add(s)
            pairs.update((a, k) for a in range(k))

    # minimalize
    keep = []
    for idx in sorted(range(len(G)), key=lambda t: key(LM[t])):
        if not any(_mono_divides(LM[k], LM[idx]) for k in keep):
            keep.append(idx)
    minimal = [G[k] for k in keep]
    reduced = []
    for n, g in enumerate(minimal):
        others = minimal[:n] + minimal[n + 1 :]
        lm = max(g.terms, key=key)
        tail = Poly._raw(g.nvars, {e: c for e, c in g.terms.items() if e != lm})
        r = normal_form(tail, others, order)
        r.terms[lm] = g.terms[lm]
        reduced.append(r.monic(order))
    reduced.sort(key=lambda g: key(max(g.terms, key=key)), reverse=True)
    return reduced


class Ideal:
    """An ideal of a presented algebra, given by generators.

    Internally the ideal lives in the free polynomial ring and is generated
    by the given generators together with the algebra's relations.
    """

    def __init__(self, algebra: PresentedAlgebra, generators: Iterable = (), order: MonomialOrder = GREVLEX, name=None):
        self.algebra = algebra
        gens = []
        for g in generators:
            el = algebra(g)
            if not el.is_zero():
                gens.append(el)
        self.generators = tuple(gens)
        self.order = order
        self.name = name
        self._basis = None
        self._lock = threading.Lock()

    @property
    def basis(self) -> list[Poly]:
        if self._basis is None:
            with self._lock:
                if self._basis is None:
                    polys = [g.poly for g in self.generators] + list(self.algebra.relations)
                    self._basis = buchberger(polys, self.order, self.algebra.nvars)
        return self._basis

    def is_unit(self) -> bool:
        b = self.basis
        return len(b) == 1 and b[0].is_constant()

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def contains(self, p) -> bool:
        return ideal_member(p, self)

    __contains__ = contains

    def reduce(self, p) -> AlgebraElement:
        el = self.algebra(p)
        return self.algebra(normal_form(el.poly, self.basis, self.order))

    def issubset(self, other: Ideal) -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    def __hash__(self):
        return id(self)

    def __str__(self):
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"Ideal{self}"

    def reduced_presentation(self) -> Ideal:
        """Same ideal, generated by its reduced Groebner basis (relations dropped)."""
        rels = [self.algebra(r) for r in self.algebra.relations]
        gens = [g for g in (self.algebra(b) for b in self.basis) if not g.is_zero()]
        return Ideal(self.algebra, [g for g in gens if g not in rels], self.order, self.name)


def ideal_member(p, I: Ideal) -> bool:
    el = I.algebra(p)
    return not normal_form(el.poly, I.basis, I.order).terms


def elimination_ideal(I: Ideal, keep: Iterable[str]) -> Ideal:
    """``I ∩ k[keep]``, parameters always kept."""
    A = I.algebra
    keep = set(keep) | set(A.parameters)
    for n in keep:
        if n not in A.index:
            raise KeyError(f"unknown variable {n!r}")
    drop = [i for i, n in enumerate(A.names) if n not in keep]
    if not drop:
        return Ideal(A, [A(b) for b in I.basis])
    order = elimination_order(drop)
    gens = [g.poly for g in I.generators] + list(A.relations)
    gb = buchberger(gens, order, A.nvars)
    dropped = set(drop)
    kept = [g for g in gb if not g.support() & dropped]
    return Ideal(A, [A(g) for g in kept], GREVLEX)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating t from ``t·I + (1−t)·J``."""
    if I.algebra != J.algebra:
        raise ValueError("ideals live in different algebras")
    A = I.algebra
    if I.is_unit():
        return Ideal(A, J.generators)
    if J.is_unit():
        return Ideal(A, I.generators)
    n = A.nvars
    t = Poly.variable(n + 1, n)
    one_minus_t = Poly.constant(n + 1, 1) - t
    rels = [r.extend(1) for r in A.relations]
    gens = [t * g.poly.extend(1) for g in I.generators]
    gens += [one_minus_t * g.poly.extend(1) for g in J.generators]
    gens += [t * r for r in rels] + [one_minus_t * r for r in rels]
    order = elimination_order([n])
    gb = buchberger(gens, order, n + 1)
    out = []
    for g in gb:
        if any(e[n] for e in g.terms):
            continue
        el = A(Poly(n, {e[:n]: c for e, c in g.terms.items()}))
        if not el.is_zero():
            out.append(el)
    return Ideal(A, out)


def radical_member(p, I: Ideal) -> bool:
    """Rabinowitsch: ``p ∈ √I`` iff ``1 ∈ I + (1 − t·p)``."""
    A = I.algebra
    el = A(p)
    n = A.nvars
    t = Poly.variable(n + 1, n)
    gens = [g.poly.extend(1) for g in I.generators] + [r.extend(1) for r in A.relations]
    gens.append(Poly.constant(n + 1, 1) - t * el.poly.extend(1))
    gb = buchberger(gens, GREVLEX, n + 1)
    return len(gb) == 1 and gb[0].is_constant()
