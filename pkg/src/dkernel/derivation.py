"""Twisted derivations on presented algebras, the u-sequence, and the
constant fit for ``a·δ²a = (3/2)(δa)² + c(a² − a⁴)``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .ring import AlgebraElement, AlgebraMap, Poly, PresentedAlgebra
from .verdict import Verdict

__all__ = [
    "AlgebraMap",
    "Derivation",
    "MagicFit",
    "fit_magic_constant",
    "solve_scalar_multiple",
    "u_sequence",
]


class Derivation:
    """A k-linear σ-derivation: ``δ(rs) = σ(r)δ(s) + δ(r)s``.

    ``images`` gives δ on coordinate variables; parameters are constants and
    images of inverse variables of declared units are derived from
    ``δ(f·f_inv) = 0`` unless given explicitly.
    """

    def __init__(self, algebra: PresentedAlgebra, images: Mapping, twist: AlgebraMap | None = None):
        A = algebra
        self.algebra = A
        if twist is not None and (twist.source != A or twist.target != A):
            raise ValueError("twist must be an endomorphism of the algebra")
        self.twist = twist
        img: dict[str, AlgebraElement] = {}
        for name, v in images.items():
            if name not in A.index:
                raise KeyError(f"unknown variable {name!r}")
            if name in A.parameters:
                if not A(v).is_zero():
                    raise ValueError(f"parameter {name!r} must be a constant")
                continue
            img[name] = A(v)
        self.explicit = set(img)
        for p in A.parameters:
            img[p] = A.zero
        invs = {inv for _, inv in A.units}
        for v in A.variables:
            if v not in img and v not in invs:
                img[v] = A.zero
        self._sigma_polys = (
            [twist.images[n].poly for n in A.names] if twist is not None else None
        )
        self.images = img
        # derive inverse-variable images in dependency order
        pending = [(f, inv) for f, inv in A.units if inv not in img]
        while pending:
            done = []
            for f, inv in pending:
                if any(A.names[i] not in img for i in f.support()):
                    continue
                df = self._apply_poly(f)
                finv = A.gen(inv)
                sig_inv = twist(finv) if twist is not None else finv
                img[inv] = -(sig_inv * df * finv)
                done.append(inv)
            if not done:
                raise ValueError("circular unit declarations")
            pending = [(f, inv) for f, inv in pending if inv not in img]
        self._polys = [img[n].poly for n in A.names]

    @property
    def is_twisted(self) -> bool:
        if self.twist is None:
            return False
        return any(self.twist.images[v] != self.algebra.gen(v) for v in self.algebra.variables)

    def _apply_poly(self, p: Poly) -> AlgebraElement:
        A = self.algebra
        n = A.nvars
        polys = [self.images[name].poly if name in self.images else None for name in A.names]
        if self._sigma_polys is None:
            out = Poly(n)
            for i in p.support():
                d = polys[i]
                if d is None:
                    raise KeyError(f"no image for {A.names[i]!r}")
                if d.terms:
                    out = out + p.diff(i) * d
            return A(out)
        return A(self._twisted_poly(p, polys))

    def _twisted_poly(self, p: Poly, polys) -> Poly:
        # δ(x1^e1 ... xn^en) expanded left to right with the twisted Leibniz rule
        n = p.nvars
        sig = self._sigma_polys
        out = Poly(n)
        var = [Poly.variable(n, i) for i in range(n)]
        sig_pow: dict = {}
        var_pow: dict = {}

        def spow(i, k):
            if (i, k) not in sig_pow:
                sig_pow[(i, k)] = sig[i] ** k
            return sig_pow[(i, k)]

        def vpow(i, k):
            if (i, k) not in var_pow:
                var_pow[(i, k)] = var[i] ** k
            return var_pow[(i, k)]

        for e, c in p.terms.items():
            idx = [i for i, k in enumerate(e) if k]
            for pos, i in enumerate(idx):
                d = polys[i]
                if d is None:
                    raise KeyError(f"no image for {self.algebra.names[i]!r}")
                if not d.terms:
                    continue
                prefix = Poly.constant(n, c)
                for j in idx[:pos]:
                    prefix = prefix * spow(j, e[j])
                suffix = Poly.constant(n, 1)
                for j in idx[pos + 1 :]:
                    suffix = suffix * vpow(j, e[j])
                k = e[i]
                # δ(x^k) = Σ σ(x)^t δ(x) x^(k−1−t)
                inner = Poly(n)
                for t in range(k):
                    inner = inner + spow(i, t) * d * vpow(i, k - 1 - t)
                out = out + prefix * inner * suffix
        return out

    def apply(self, p) -> AlgebraElement:
        return self._apply_poly(self.algebra(p).poly)

    __call__ = apply

    def sigma(self, p) -> AlgebraElement:
        p = self.algebra(p)
        return self.twist(p) if self.twist is not None else p

    def check_well_defined(self) -> Verdict:
        """Descent to the quotient: σ-stability, twisted commutation, relations."""
        A = self.algebra
        if self.twist is not None:
            v = self.twist.check_well_defined()
            if not v:
                return Verdict(False, f"twist: {v.certificate}")
            # on a commutative ring δ(xy) = δ(yx) forces (σx − x)δy = (σy − y)δx
            coords = list(A.variables)
            for a in range(len(coords)):
                for b in range(a + 1, len(coords)):
                    x, y = A.gen(coords[a]), A.gen(coords[b])
                    lhs = (self.sigma(x) - x) * self.images[coords[b]]
                    rhs = (self.sigma(y) - y) * self.images[coords[a]]
                    if lhs != rhs:
                        return Verdict(False, f"commutation {coords[a]}*{coords[b]} = {coords[b]}*{coords[a]}")
        for r in A.relations:
            if not self._apply_poly(r).is_zero():
                return Verdict(False, f"relation {r.to_str(A.names)}")
        return Verdict(True)

    def __repr__(self):
        body = ", ".join(f"{v} -> {self.images[v]}" for v in self.algebra.variables)
        tw = f"; sigma: {self.twist!r}" if self.is_twisted else ""
        return f"Derivation({body}{tw})"

    @classmethod
    def zero(cls, algebra: PresentedAlgebra, twist: AlgebraMap | None = None) -> Derivation:
        return cls(algebra, {}, twist)

    def restricted_images(self):
        """Images of the coordinate (non-inverse) variables."""
        return {v: self.images[v] for v in self.algebra.coordinate_names()}


def u_sequence(delta: Derivation, a, m: int) -> list[AlgebraElement]:
    """``[u0, ..., um]`` with u0 = a, u1 = δa/a, u2 = δu1 − u1²/2, u_k = δu_(k−1)."""
    if delta.is_twisted:
        raise ValueError("the u-sequence is defined for untwisted derivations")
    A = delta.algebra
    a = A(a)
    inv = a.inverse()
    if inv is None:
        raise ValueError(f"{a} is not a unit")
    seq = [a]
    if m >= 1:
        seq.append(delta(a) * inv)
    if m >= 2:
        u1 = seq[1]
        seq.append(delta(u1) - u1 * u1 * Fraction(1, 2))
    for _ in range(3, m + 1):
        seq.append(delta(seq[-1]))
    return seq[: m + 1]


def _split_by_coordinates(el: AlgebraElement):
    """Group terms by their coordinate monomial; coefficients are parameter polys."""
    A = el.algebra
    pidx = set(A.parameter_indices())
    groups: dict = {}
    for e, c in el.poly.terms.items():
        coord = tuple(0 if i in pidx else k for i, k in enumerate(e))
        param = tuple(k if i in pidx else 0 for i, k in enumerate(e))
        groups.setdefault(coord, {})[param] = c
    return {k: Poly(A.nvars, v) for k, v in groups.items()}


def _exact_divide(num: Poly, den: Poly) -> Poly | None:
    """``num / den`` when the division is exact (multivariate long division)."""
    from .ring import GREVLEX

    if not den.terms:
        return None
    lm, lc = den.leading_term(GREVLEX)
    q = Poly(num.nvars)
    r = num
    steps = 0
    while r.terms:
        m, c = r.leading_term(GREVLEX)
        if not all(x <= y for x, y in zip(lm, m)):
            return None
        t = tuple(y - x for x, y in zip(lm, m))
        term = Poly.monomial(t, c / lc)
        q = q + term
        r = r - den * term
        steps += 1
        if steps > 10_000:
            return None
    return q


def solve_scalar_multiple(target, g) -> AlgebraElement | None:
    """A parameter-only ``c`` with ``target = c·g`` in the algebra, if one exists.

    Returns None when no such ``c`` is found; callers treat ``g = 0`` separately.
    """
    A = target.algebra
    target = A(target)
    g = A(g)
    if target.is_zero():
        return A.zero
    if g.is_zero():
        return None
    tg = _split_by_coordinates(target)
    gg = _split_by_coordinates(g)
    # prefer a coordinate monomial whose coefficient is a plain rational
    mons = sorted(gg, key=lambda m: (not gg[m].is_constant(), m))
    for mono in mons:
        num = tg.get(mono, Poly(A.nvars))
        c = _exact_divide(num, gg[mono])
        if c is None:
            continue
        cand = A(c)
        if target - cand * g == 0:
            return cand
    return None


@dataclass
class MagicFit:
    c: AlgebraElement
    underdetermined: bool
    residual_zero: bool

    def __str__(self):
        return str(self.c)


def fit_magic_constant(delta: Derivation, a) -> MagicFit | None:
    """Find c with ``a·δ²a − (3/2)(δa)² = c(a² − a⁴)``; None if no constant works."""
    if delta.is_twisted:
        raise ValueError("the magic identity is stated for untwisted derivations")
    A = delta.algebra
    a = A(a)
    if a.inverse() is None:
        raise ValueError(f"{a} is not a unit")
    da = delta(a)
    residual = a * delta(da) - da * da * Fraction(3, 2)
    g = a * a - a**4
    if g.is_zero():
        if residual.is_zero():
            return MagicFit(A.zero, True, True)
        return None
    c = solve_scalar_multiple(residual, g)
    if c is None:
        return None
    check = residual - c * g
    return MagicFit(c, False, check.is_zero())
