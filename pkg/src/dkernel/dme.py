"""Witness checks for the three δ-DME conditions.

Every verdict is relative to the candidate ideals supplied by the caller.
Primality of candidates and maximality of 𝔪 are trusted, never tested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .derivation import Derivation, solve_scalar_multiple
from .groebner import Ideal, intersect
from .ring import AlgebraElement, AlgebraMap
from .verdict import Verdict


def is_delta_ideal(I: Ideal, delta: Derivation) -> Verdict:
    """δ(g) ∈ I for every generator (relations are δ-stable already)."""
    if delta.is_twisted:
        v = is_sigma_stable(I, delta.twist)
        if not v:
            raise ValueError(f"sigma does not preserve the ideal: {v.certificate}")
    for g in I.generators:
        d = delta(g)
        if not I.contains(d):
            return Verdict(False, str(g), {"delta": str(d)})
    return Verdict(True)


def is_sigma_stable(I: Ideal, sigma: AlgebraMap) -> Verdict:
    for g in I.generators:
        s = sigma(g)
        if not I.contains(s):
            return Verdict(False, str(g), {"sigma": str(s)})
    return Verdict(True)


def is_sigma_delta_ideal(I: Ideal, sigma: AlgebraMap, delta: Derivation) -> Verdict:
    v = is_sigma_stable(I, sigma)
    if not v:
        return v
    for g in I.generators:
        d = delta(g)
        if not I.contains(d):
            return Verdict(False, str(g), {"delta": str(d)})
    return Verdict(True)


@dataclass
class DeltaIdealCandidate:
    """A δ-ideal supplied as (trusted) prime."""

    ideal: Ideal
    claimed_prime: bool = True
    name: str | None = None

    def __post_init__(self):
        if self.ideal.is_unit():
            raise ValueError("candidate ideals must be proper")

    def check(self, delta: Derivation) -> None:
        v = is_delta_ideal(self.ideal, delta)
        if not v:
            raise ValueError(f"candidate {self.label} is not a δ-ideal: {v.certificate} ↦ {v.details['delta']}")

    @property
    def label(self) -> str:
        return self.name or str(self.ideal)


@dataclass
class LocalClosedness:
    ok: bool
    intersection: Ideal | None
    above: list[str] = field(default_factory=list)
    convention: bool = False

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "intersection": "(1)" if self.intersection is None else str(self.intersection),
            "strictly_above": self.above,
            "empty_family_convention": self.convention,
            "relative_to_candidates": True,
        }


def _strictly_contains(Q: Ideal, P: Ideal) -> bool:
    return P.issubset(Q) and not Q.issubset(P)


def check_locally_closed_among(P: DeltaIdealCandidate, candidates: Sequence[DeltaIdealCandidate], delta: Derivation) -> LocalClosedness:
    """Is ∩{Q ⊋ P} a proper extension of P?  The empty family counts as (1)."""
    P.check(delta)
    above = []
    for Q in candidates:
        Q.check(delta)
        if _strictly_contains(Q.ideal, P.ideal):
            above.append(Q)
    if not above:
        return LocalClosedness(True, None, [], True)
    inter = above[0].ideal
    for Q in above[1:]:
        inter = intersect(inter, Q.ideal)
    ok = _strictly_contains(inter, P.ideal)
    return LocalClosedness(ok, inter, [Q.label for Q in above])


@dataclass
class RationalityReport:
    constant: bool
    scalar: AlgebraElement | None
    refutes: bool

    def as_dict(self) -> dict:
        return {
            "constant": self.constant,
            "scalar": None if self.scalar is None else str(self.scalar),
            "refutes_rationality": self.refutes,
        }


def check_rationality_witness(P: DeltaIdealCandidate, p, q, delta: Derivation) -> RationalityReport:
    """``p/q`` is a δ-constant of Frac(R/P) iff ``q·δp − p·δq ∈ P``.

    A constant that is not a scalar modulo P refutes δ-rationality.  The
    scalar is looked for as λ with ``p ≡ λq (mod P)``, λ in the parameters.
    """
    I = P.ideal
    A = I.algebra
    p, q = A(p), A(q)
    if I.contains(q):
        raise ValueError("denominator lies in the ideal")
    w = q * delta(p) - p * delta(q)
    constant = I.contains(w)
    if not constant:
        return RationalityReport(False, None, False)
    lam = solve_scalar_multiple(I.reduce(p), I.reduce(q))
    if lam is not None and not I.contains(p - lam * q):
        lam = None
    return RationalityReport(True, lam, lam is None)


def check_primitivity_witness(P: DeltaIdealCandidate, m: Ideal, candidates: Sequence[DeltaIdealCandidate], delta: Derivation) -> Verdict:
    """No candidate sits strictly between P and the (trusted maximal) ideal 𝔪."""
    if m.is_unit():
        raise ValueError("the maximal ideal must be proper")
    if not P.ideal.issubset(m):
        raise ValueError("P is not contained in m")
    P.check(delta)
    for Q in candidates:
        Q.check(delta)
        if _strictly_contains(Q.ideal, P.ideal) and Q.ideal.issubset(m):
            return Verdict(False, Q.label)
    return Verdict(True)
