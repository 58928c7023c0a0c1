"""Prolongations, affine D-varieties and their D-subvarieties.

Coefficients are constants, so the prolongation of ``V`` is cut out by
``P`` and ``Σ ∂P/∂Xᵢ · Xᵢ'`` for ``P`` in ``I(V)``.  Primed variables are
named ``x'``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .derivation import Derivation
from .groebner import Ideal
from .ring import AlgebraElement, AlgebraMap, Poly, PresentedAlgebra
from .verdict import Verdict


def primed(name: str) -> str:
    return f"{name}'"


def _total_derivative(p: Poly, coords: Sequence[int], primes: Sequence[int]) -> Poly:
    out = Poly(p.nvars)
    for i, ip in zip(coords, primes):
        d = p.diff(i)
        if d.terms:
            out = out + d * Poly.variable(p.nvars, ip)
    return out


def _doubled_table(A: PresentedAlgebra):
    variables = list(A.variables) + [primed(v) for v in A.variables]
    clash = set(variables) & set(A.parameters)
    if clash:
        raise ValueError(f"primed names clash with parameters: {sorted(clash)}")
    free = PresentedAlgebra(variables, A.parameters)
    index_map = [free.index[n] for n in A.names]
    coords = [free.index[v] for v in A.variables]
    primes = [free.index[primed(v)] for v in A.variables]
    return variables, free, index_map, coords, primes


def prolongation_algebra(A: PresentedAlgebra) -> PresentedAlgebra:
    """Coordinate ring of τV (= TV over the constants), units kept."""
    variables, free, index_map, coords, primes = _doubled_table(A)
    pidx = set(A.parameter_indices())
    rels = []
    for r in A.relations:
        rr = r.rename(index_map, free.nvars)
        rels.append(rr)
        if not r.support() <= pidx:
            rels.append(_total_derivative(rr, coords, primes))
    units = [(f.rename(index_map, free.nvars), inv) for f, inv in A.units]
    return PresentedAlgebra(variables, A.parameters, rels, units)


def prolongation_ideal(I: Ideal) -> Ideal:
    """The ideal of τ(V(I)) in the free ring on ``X, X'`` (plus parameters).

    The algebra's own relations count as generators of ``I``.
    """
    A = I.algebra
    variables, free, index_map, coords, primes = _doubled_table(A)
    S = A.scalars()
    smap = [free.index[n] for n in S.names]
    ambient = PresentedAlgebra(
        variables,
        A.parameters,
        [r.rename(smap, free.nvars) for r in S.relations],
        [(f.rename(smap, free.nvars), inv) for f, inv in S.units],
    )
    pidx = set(A.parameter_indices())
    gens = []
    for p in [g.poly for g in I.generators] + list(A.relations):
        pp = p.rename(index_map, free.nvars)
        gens.append(pp)
        if not p.support() <= pidx:
            gens.append(_total_derivative(pp, coords, primes))
    return Ideal(ambient, gens, name="prolongation")


class AffineDVariety:
    """An affine variety with a section ``s = (s₁, …, sₙ)`` of its prolongation.

    ``section`` maps coordinate variables to their images; the induced
    derivation ``Xⱼ ↦ sⱼ`` must be well defined on the coordinate ring.
    """

    def __init__(self, algebra: PresentedAlgebra, section: Mapping):
        self.algebra = algebra
        self.derivation = Derivation(algebra, section)
        v = self.derivation.check_well_defined()
        if not v:
            raise ValueError(f"section does not land in the prolongation: {v.certificate}")

    @property
    def section(self) -> dict[str, AlgebraElement]:
        return {v: self.derivation.images[v] for v in self.algebra.variables}

    @classmethod
    def from_derivation(cls, delta: Derivation) -> AffineDVariety:
        if delta.is_twisted:
            raise ValueError("D-varieties correspond to untwisted derivations")
        return cls(delta.algebra, delta.restricted_images())

    def to_derivation(self) -> Derivation:
        return Derivation(self.algebra, self.section)

    def __repr__(self):
        body = ", ".join(f"{v} -> {s}" for v, s in self.section.items())
        return f"AffineDVariety({self.algebra!r}; {body})"


def _as_subvariety_ideal(V: AffineDVariety, J: Ideal) -> Ideal:
    A = V.algebra
    if J.algebra is not A and J.algebra != A:
        if J.algebra.names != A.names:
            raise ValueError("ideal lives over different variables")
        for r in A.relations:
            if not J.contains(J.algebra(r)):
                raise ValueError(f"ideal does not contain I(V): missing {r.to_str(A.names)}")
        J = Ideal(A, [A(g.poly) for g in J.generators], name=J.name)
    if J.is_unit():
        raise ValueError("the unit ideal defines the empty subvariety")
    return J


def is_d_subvariety(V: AffineDVariety, J: Ideal) -> Verdict:
    """True iff the induced derivation maps each generator of ``J`` into ``J``."""
    J = _as_subvariety_ideal(V, J)
    for g in J.generators:
        if not J.contains(V.derivation(g)):
            return Verdict(False, str(g), {"delta": str(V.derivation(g))})
    return Verdict(True)


def is_d_subvariety_oracle(V: AffineDVariety, J: Ideal) -> bool:
    """Literal check ``s(W) ⊆ τW``: push the prolongation of ``J`` along ``X' ↦ s(X)``."""
    J = _as_subvariety_ideal(V, J)
    A = V.algebra
    tau = prolongation_ideal(J)
    section = V.section
    images = {v: A.gen(v) for v in A.variables}
    images.update({primed(v): section[v] for v in A.variables})
    back = AlgebraMap(tau.algebra, A, images)
    return all(J.contains(back(q)) for q in tau.generators)


def point_map(algebra: PresentedAlgebra, point) -> AlgebraMap:
    """Evaluation at a point with rational or parameter coordinates."""
    S = algebra.scalars()
    if not isinstance(point, Mapping):
        coords = algebra.coordinate_names()
        point = list(point)
        if len(point) != len(coords):
            raise ValueError(f"expected {len(coords)} coordinates")
        point = dict(zip(coords, point))
    try:
        ev = AlgebraMap(algebra, S, {k: S(v) for k, v in point.items()})
    except ValueError as exc:
        raise ValueError(f"point is not on the variety: {exc}") from None
    v = ev.check_well_defined()
    if not v:
        raise ValueError(f"point is not on the variety: {v.certificate}")
    return ev


def is_constant_d_point(V: AffineDVariety, point) -> bool:
    """A point with constant coordinates is a D-point iff ``s(p) = 0``."""
    ev = point_map(V.algebra, point)
    return all(ev(s).is_zero() for s in V.section.values())
