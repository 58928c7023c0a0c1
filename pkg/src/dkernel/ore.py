"""Ore extensions ``R[x; σ, δ]`` over presented algebras.

Elements are kept in left normal form ``Σ rᵢ xⁱ`` and multiplied with
``x·r = σ(r)·x + δ(r)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .derivation import Derivation
from .hopf import HopfData, is_group_like, tensor_linear
from .parsing import parse_element
from .ring import AlgebraElement, AlgebraMap, Poly, PresentedAlgebra, embed, tensor_power
from .verdict import Verdict


class OreRing:
    """``R[x; σ, δ]``; σ must come with its inverse and δ must be twisted by σ."""

    def __init__(self, base: PresentedAlgebra, sigma: AlgebraMap | None = None,
                 sigma_inverse: AlgebraMap | None = None, delta: Derivation | None = None, name: str = "x"):
        self.base = base
        if name in base.index:
            raise ValueError(f"Ore variable {name!r} clashes with a base variable")
        self.name = name
        ident = AlgebraMap.identity(base)
        self.sigma = sigma if sigma is not None else ident
        if sigma_inverse is None:
            if sigma is not None and sigma != ident:
                raise ValueError("a nontrivial sigma needs an explicit inverse")
            sigma_inverse = ident
        self.sigma_inverse = sigma_inverse
        for m in (self.sigma, self.sigma_inverse):
            v = m.check_well_defined()
            if not v:
                raise ValueError(f"sigma is not well defined: {v.certificate}")
        for v in base.variables:
            g = base.gen(v)
            if self.sigma(self.sigma_inverse(g)) != g or self.sigma_inverse(self.sigma(g)) != g:
                raise ValueError(f"sigma_inverse does not invert sigma on {v}")
        if delta is None:
            delta = Derivation.zero(base, self.sigma)
        elif delta.twist is None:
            if self.sigma != ident:
                delta = Derivation(base, delta.restricted_images(), self.sigma)
        elif delta.twist != self.sigma:
            raise ValueError("delta must be twisted by sigma")
        v = delta.check_well_defined()
        if not v:
            raise ValueError(f"delta is not well defined: {v.certificate}")
        self.delta = delta

    def __call__(self, x) -> OrePoly:
        if isinstance(x, OrePoly):
            if x.ring is not self:
                raise ValueError("element of a different Ore ring")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (list, tuple)):
            return OrePoly(self, [self.base(c) for c in x])
        return OrePoly(self, [self.base(x)])

    @property
    def x(self) -> OrePoly:
        return OrePoly(self, [self.base.zero, self.base.one])

    def parse(self, text: str) -> OrePoly:
        """Read ``Σ rᵢ xⁱ``; coefficients are taken on the left wherever written."""
        ext = self.base.with_variables([self.name])
        el = parse_element(text, ext)
        k = ext.index[self.name]
        index_map = [self.base.index.get(n, 0) for n in ext.names]
        coeffs: dict[int, dict] = {}
        for e, c in el.poly.terms.items():
            rest = tuple(0 if i == k else d for i, d in enumerate(e))
            coeffs.setdefault(e[k], {})[rest] = c
        deg = max(coeffs, default=-1)
        out = []
        for i in range(deg + 1):
            p = Poly(ext.nvars, coeffs.get(i, {}))
            out.append(self.base(p.rename(index_map, self.base.nvars)))
        return OrePoly(self, out)

    def times_x(self, p: OrePoly) -> OrePoly:
        """``x·p`` via ``x·r = σ(r)x + δ(r)``."""
        out = [self.base.zero] * (len(p.coeffs) + 1)
        for i, r in enumerate(p.coeffs):
            if r.is_zero():
                continue
            out[i + 1] = out[i + 1] + self.sigma(r)
            out[i] = out[i] + self.delta(r)
        return OrePoly(self, out)

    def __repr__(self):
        return f"OreRing({self.base!r}[{self.name}; {self.sigma!r}, {self.delta!r}])"


class OrePoly:
    """``Σ coeffs[i]·xⁱ`` with coefficients on the left."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: OreRing, coeffs: Sequence[AlgebraElement]):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.ring = ring
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _other(self, other) -> OrePoly:
        if isinstance(other, OrePoly):
            if other.ring is not self.ring:
                raise ValueError("elements of different Ore rings")
            return other
        return self.ring(other)

    def __add__(self, other):
        other = self._other(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.ring.base.zero
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return OrePoly(self.ring, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return OrePoly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        return ore_mul(self, self._other(other))

    def __rmul__(self, other):
        return ore_mul(self._other(other), self)

    def __pow__(self, n: int):
        out = self.ring(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = self._other(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        x = self.ring.name
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else (x if i == 1 else f"{x}^{i}")
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            elif " " in cs:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"OrePoly({self})"


def ore_mul(p: OrePoly, q: OrePoly) -> OrePoly:
    if p.ring is not q.ring:
        raise ValueError("elements of different Ore rings")
    R = p.ring
    out = OrePoly(R, [])
    power = q  # xⁱ·q
    for i, r in enumerate(p.coeffs):
        if i:
            power = R.times_x(power)
        if r.is_zero():
            continue
        out = out + OrePoly(R, [r * c for c in power.coeffs])
    return out


# ---------- inner σ-derivations ----------


@dataclass
class InnerWitness:
    a: AlgebraElement
    verified: bool


def _inner_verdict(A: OreRing, a: AlgebraElement) -> Verdict:
    for v in A.base.variables:
        r = A.base.gen(v)
        lhs = A.delta(r)
        rhs = a * (r - A.sigma(r))
        if lhs != rhs:
            return Verdict(False, v, {"delta": str(lhs), "a(r - sigma(r))": str(rhs)})
    return Verdict(True)


def detect_inner(A: OreRing, f) -> InnerWitness | None:
    """``a = δ(f)/(f − σ(f))`` when ``f − σ(f)`` is invertible."""
    f = A.base(f)
    d = f - A.sigma(f)
    if d.is_zero():
        return None
    inv = d.inverse()
    if inv is None:
        return None
    a = A.delta(f) * inv
    return InnerWitness(a, bool(_inner_verdict(A, a)))


@dataclass
class InnerChange:
    ring: OreRing
    a: AlgebraElement
    verdict: Verdict
    source: OreRing

    def to_new(self, p: OrePoly) -> OrePoly:
        """Rewrite in ``t = x − a``, i.e. substitute ``x ↦ t + a``."""
        t_plus_a = OrePoly(self.ring, [self.a, self.ring.base.one])
        return _substitute(p, self.ring, t_plus_a)

    def to_old(self, p: OrePoly) -> OrePoly:
        x_minus_a = OrePoly(self.source, [-self.a, self.source.base.one])
        return _substitute(p, self.source, x_minus_a)


def _substitute(p: OrePoly, target: OreRing, image: OrePoly) -> OrePoly:
    out = OrePoly(target, [])
    power = target(1)
    for i, r in enumerate(p.coeffs):
        if i:
            power = power * image
        out = out + OrePoly(target, [r]) * power
    return out


def change_of_variable_inner(A: OreRing, a) -> InnerChange:
    """``R[x; σ, δ] ≅ R[t; σ, 0]`` with ``t = x − a`` for an inner witness ``a``."""
    a = A.base(a)
    v = _inner_verdict(A, a)
    if not v:
        raise ValueError(f"{a} does not witness an inner derivation: {v.certificate}")
    new_name = "t" if "t" not in A.base.index else f"{A.name}_t"
    B = OreRing(A.base, A.sigma, A.sigma_inverse, Derivation.zero(A.base, A.sigma), name=new_name)
    t = OrePoly(A, [-a, A.base.one])
    check = Verdict(True)
    for name in A.base.variables:
        r = A.base.gen(name)
        lhs = t * A(r)
        rhs = A(A.sigma(r)) * t
        if lhs != rhs:
            check = Verdict(False, name, {"t*r": str(lhs), "sigma(r)*t": str(rhs)})
            break
    return InnerChange(B, a, check, A)


# ---------- coproducts of the extension variable ----------


@dataclass
class ShapeReport:
    s: AlgebraElement
    t: AlgebraElement
    v: AlgebraElement
    w: AlgebraElement
    a: AlgebraElement | None
    b: AlgebraElement | None
    a_ok: bool
    b_ok: bool

    @property
    def v_zero(self) -> bool:
        return self.v.is_zero()

    @property
    def conforming(self) -> bool:
        return self.v_zero and self.a_ok and self.b_ok

    def as_dict(self) -> dict:
        return {
            "s": str(self.s),
            "t": str(self.t),
            "v": str(self.v),
            "w": str(self.w),
            "a": None if self.a is None else str(self.a),
            "b": None if self.b is None else str(self.b),
            "a_group_like_or_zero": self.a_ok,
            "b_group_like_or_zero": self.b_ok,
            "v_zero": self.v_zero,
            "conforming": self.conforming,
        }


def doubled_algebra(A: OreRing) -> PresentedAlgebra:
    """``R⊗R`` with the commuting symbols ``x@1 = x⊗1`` and ``x@2 = 1⊗x``."""
    T, _ = tensor_power(A.base, 2)
    return T.with_variables([f"{A.name}@1", f"{A.name}@2"])


def _single_factor(el: AlgebraElement, j: int) -> AlgebraElement | None:
    """``r`` with ``el = ι_j(r)``, or None if ``el`` involves the other factor."""
    T = el.algebra
    A, _ = T.tensor_base
    suffix = f"@{j}"
    index_map = []
    for n in T.names:
        if n in A.parameters:
            index_map.append(A.index[n])
        elif n.endswith(suffix):
            index_map.append(A.index[n[: -len(suffix)]])
        else:
            index_map.append(None)
    for e in el.poly.terms:
        if any(k and index_map[i] is None for i, k in enumerate(e)):
            return None
    return A(el.poly.rename([i if i is not None else 0 for i in index_map], A.nvars))


def check_coproduct_shape(A: OreRing, H: HopfData, dx) -> ShapeReport:
    """Split ``Δx = s(1⊗x) + t(x⊗1) + v(x⊗x) + w`` and test the normal form.

    ``dx`` is either text in the symbols ``x@1``, ``x@2`` over ``R⊗R`` or a
    mapping ``{(i, j): coefficient}`` for ``x^i ⊗ x^j``.
    """
    if H.algebra != A.base:
        raise ValueError("Hopf data is for a different algebra")
    T, _ = tensor_power(A.base, 2)
    parts: dict[tuple[int, int], AlgebraElement] = {}
    if isinstance(dx, Mapping):
        for (i, j), c in dx.items():
            parts[(i, j)] = parts.get((i, j), T.zero) + T(c)
    else:
        D = doubled_algebra(A)
        el = dx if isinstance(dx, AlgebraElement) else D(dx)
        k1, k2 = D.index[f"{A.name}@1"], D.index[f"{A.name}@2"]
        index_map = [T.index.get(n, 0) for n in D.names]
        groups: dict = {}
        for e, c in el.poly.terms.items():
            rest = tuple(0 if i in (k1, k2) else d for i, d in enumerate(e))
            groups.setdefault((e[k1], e[k2]), {})[rest] = c
        for key, terms in groups.items():
            parts[key] = T(Poly(D.nvars, terms).rename(index_map, T.nvars))
    for (i, j), c in parts.items():
        if (i > 1 or j > 1) and not c.is_zero():
            raise ValueError(f"coproduct has degree {max(i, j)} in one tensor factor")
    s = parts.get((0, 1), T.zero)
    t = parts.get((1, 0), T.zero)
    v = parts.get((1, 1), T.zero)
    w = parts.get((0, 0), T.zero)

    def factor_ok(el, j):
        if el.is_zero():
            return el.algebra.tensor_base[0].zero, True
        r = _single_factor(el, j)
        if r is None:
            return None, False
        return r, is_group_like(H, r)

    a, a_ok = factor_ok(s, 1)
    b, b_ok = factor_ok(t, 2)
    return ShapeReport(s, t, v, w, a, b, a_ok, b_ok)


def check_coderivation_identity(A: OreRing, H: HopfData, a, w) -> Verdict:
    """``Δ(δr) = Σ(δr₁⊗r₂ + a·r₁⊗δr₂) + w(Δr − Δσ(r))`` on base generators."""
    R = A.base
    a = R(a)
    if not is_group_like(H, a):
        raise ValueError(f"{a} is not group-like")
    T, _ = tensor_power(R, 2)
    w = T(w)
    a1 = embed(a, 1, 2)
    delta, sigma = A.delta, A.sigma

    def ident(r):
        return r

    for v in R.variables:
        d = H.delta(v)
        lhs = H.delta(delta(v))
        rhs = tensor_linear(d, delta, ident) + a1 * tensor_linear(d, ident, delta) + w * (d - H.delta(sigma(v)))
        if lhs != rhs:
            return Verdict(False, v, {"lhs": str(lhs), "rhs": str(rhs)})
    return Verdict(True)
