"""Hopf structure on coordinate rings of matrix groups.

Elements of ``R⊗R`` live in the tensor power algebra (variables ``v@1``,
``v@2``).  Every map here is an algebra map or k[params]-linear, so the
axioms are checked on generators only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .ring import (
    AlgebraElement,
    AlgebraMap,
    Poly,
    PresentedAlgebra,
    embed,
    reindex,
    tensor,
    tensor_power,
)
from .verdict import Verdict


class NotAGroup(ValueError):
    """The data does not define a group (or a point is not on it)."""


# ---------- small matrix helpers ----------


def mat_mul(X, Y):
    n, m, p = len(X), len(Y), len(Y[0])
    return [[sum((X[i][k] * Y[k][j] for k in range(m)), 0) for j in range(p)] for i in range(n)]


def determinant(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(M):
    n = len(M)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(M) if k != i]
            c = determinant(minor)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


# ---------- data types ----------


class MatrixGroupSpec:
    """A closed subgroup of GL_n given by its coordinate ring and the matrix
    of coordinate functions ``M`` (entries may be constants)."""

    def __init__(self, algebra: PresentedAlgebra, matrix: Sequence[Sequence]):
        self.algebra = algebra
        self.matrix = [[algebra(e) for e in row] for row in matrix]
        self.n = len(self.matrix)
        if any(len(row) != self.n for row in self.matrix):
            raise ValueError("matrix must be square")
        det = determinant(self.matrix)
        self.det = algebra(det)
        self.det_inv = self.det.inverse()
        if self.det_inv is None:
            raise NotAGroup(f"determinant {self.det} is not a unit in the coordinate ring")
        self.positions: dict[str, tuple[int, int]] = {}
        for i, row in enumerate(self.matrix):
            for j, e in enumerate(row):
                for v in algebra.variables:
                    if v not in self.positions and e == algebra.gen(v):
                        self.positions[v] = (i, j)
        missing = [v for v in algebra.coordinate_names() if v not in self.positions]
        if missing:
            raise NotAGroup(f"variables {missing} are not matrix entries")

    def identity_matrix(self):
        return [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]


@dataclass
class HopfData:
    algebra: PresentedAlgebra
    coproduct: AlgebraMap
    counit: AlgebraMap
    antipode: AlgebraMap
    group: MatrixGroupSpec | None = field(default=None, repr=False)

    @property
    def tensor2(self):
        return tensor_power(self.algebra, 2)[0]

    def delta(self, r) -> AlgebraElement:
        return self.coproduct(self.algebra(r))

    def eps(self, r) -> AlgebraElement:
        return self.counit(self.algebra(r))

    def eps_in_algebra(self, r) -> AlgebraElement:
        return self.algebra.lift(self.eps(r), self.counit.target)

    @classmethod
    def from_images(cls, algebra: PresentedAlgebra, coproduct: Mapping, counit: Mapping, antipode: Mapping) -> HopfData:
        T, _ = tensor_power(algebra, 2)
        return cls(
            algebra,
            AlgebraMap(algebra, T, coproduct),
            AlgebraMap(algebra, algebra.scalars(), counit),
            AlgebraMap(algebra, algebra, antipode),
        )

    def replace(self, coproduct=None, counit=None, antipode=None) -> HopfData:
        """Copy with some generator images overridden (used to build corrupted variants)."""
        A = self.algebra

        def merged(m: AlgebraMap, new):
            if not new:
                return m
            imgs = {v: m.images[v] for v in A.variables}
            imgs.update({k: m.target(v) for k, v in new.items()})
            # inverse-variable images follow their unit unless overridden
            for f, inv in A.units:
                if inv not in new and any(A.names[i] in new for i in f.support()):
                    imgs.pop(inv, None)
            return AlgebraMap(A, m.target, imgs)

        return HopfData(
            A,
            merged(self.coproduct, coproduct),
            merged(self.counit, counit),
            merged(self.antipode, antipode),
            self.group,
        )


def hopf_from_matrix_group(spec: MatrixGroupSpec) -> HopfData:
    """Δ(M) = M⊗M (matrix product), ε = evaluation at 1, S(M) = adj(M)·det⁻¹."""
    A = spec.algebra
    M = spec.matrix
    n = spec.n
    T, (i1, i2) = tensor_power(A, 2)
    M1 = [[i1(e) for e in row] for row in M]
    M2 = [[i2(e) for e in row] for row in M]
    prod = mat_mul(M1, M2)
    co = {v: prod[i][j] for v, (i, j) in spec.positions.items()}
    # group-like units (e.g. det) get Δ(f⁻¹) = f⁻¹⊗f⁻¹ without an inverse search
    partial = AlgebraMap(A, T, {**co, **{inv: T.one for _, inv in A.units if inv not in co}})
    for f, inv in A.units:
        if inv in co or inv in A.parameters:
            continue
        if not all(A.names[i] in co or A.names[i] in A.parameters for i in f.support()):
            continue
        fe = A(f)
        if partial(fe) == i1(fe) * i2(fe):
            co[inv] = i1(A.gen(inv)) * i2(A.gen(inv))
    coproduct = AlgebraMap(A, T, co)

    S = A.scalars()
    ident = spec.identity_matrix()
    counit = AlgebraMap(A, S, {v: ident[i][j] for v, (i, j) in spec.positions.items()})

    adj = adjugate(M)
    inv_matrix = [[A(adj[i][j]) * spec.det_inv for j in range(n)] for i in range(n)]
    antipode = AlgebraMap(A, A, {v: inv_matrix[i][j] for v, (i, j) in spec.positions.items()})

    v = coproduct.check_well_defined()
    if not v:
        raise NotAGroup(f"relation ideal is not stable under the coproduct: {v.certificate}")
    for i in range(n):
        for j in range(n):
            if coproduct(M[i][j]) != prod[i][j]:
                raise NotAGroup(f"entry ({i + 1},{j + 1}) is not closed under multiplication")
    v = counit.check_well_defined()
    if not v:
        raise NotAGroup(f"identity matrix is not on the group: {v.certificate}")
    for i in range(n):
        for j in range(n):
            if counit(M[i][j]) != ident[i][j]:
                raise NotAGroup(f"identity matrix is not on the group at entry ({i + 1},{j + 1})")
    return HopfData(A, coproduct, counit, antipode, spec)


# ---------- linear maps on tensor squares ----------


def tensor_linear(x: AlgebraElement, f: Callable, g: Callable) -> AlgebraElement:
    """``Σ f(u)⊗g(v)`` for ``x = Σ u⊗v``; f, g must be k[params]-linear maps A → A."""
    T = x.algebra
    A, m = T.tensor_base
    if m != 2:
        raise ValueError("expected an element of the tensor square")
    _, (i1, i2) = tensor_power(A, 2)
    slot = []
    for name in T.names:
        if name in A.parameters:
            slot.append((0, A.index[name]))
        else:
            v, j = name.rsplit("@", 1)
            slot.append((int(j), A.index[v]))
    fcache: dict = {}
    gcache: dict = {}
    out = T.zero
    for e, c in x.poly.terms.items():
        u = [0] * A.nvars
        w = [0] * A.nvars
        p = [0] * T.nvars
        for k, exp in enumerate(e):
            if not exp:
                continue
            j, idx = slot[k]
            if j == 1:
                u[idx] += exp
            elif j == 2:
                w[idx] += exp
            else:
                p[k] += exp
        u, w = tuple(u), tuple(w)
        if u not in fcache:
            fcache[u] = i1(A(f(A(Poly.monomial(u)))))
        if w not in gcache:
            gcache[w] = i2(A(g(A(Poly.monomial(w)))))
        out = out + fcache[u] * gcache[w] * T(Poly.monomial(tuple(p), c))
    return out


def _ident(r):
    return r


# ---------- axiom checks ----------


def check_coassociativity(H: HopfData) -> Verdict:
    A = H.algebra
    T2, _ = tensor_power(A, 2)
    T3, _ = tensor_power(A, 3)
    left = AlgebraMap(
        T2,
        T3,
        {**{f"{v}@1": reindex(H.delta(v), [1, 2], 3) for v in A.variables},
         **{f"{v}@2": T3.gen(f"{v}@3") for v in A.variables}},
    )
    right = AlgebraMap(
        T2,
        T3,
        {**{f"{v}@1": T3.gen(f"{v}@1") for v in A.variables},
         **{f"{v}@2": reindex(H.delta(v), [2, 3], 3) for v in A.variables}},
    )
    for v in A.variables:
        d = H.delta(v)
        if left(d) != right(d):
            return Verdict(False, v, {"left": str(left(d)), "right": str(right(d))})
    return Verdict(True)


def _counit_side(H: HopfData, side: int) -> AlgebraMap:
    A = H.algebra
    T2, _ = tensor_power(A, 2)
    other = 2 if side == 1 else 1
    images = {f"{v}@{side}": H.eps_in_algebra(v) for v in A.variables}
    images.update({f"{v}@{other}": A.gen(v) for v in A.variables})
    return AlgebraMap(T2, A, images)


def check_counit(H: HopfData) -> Verdict:
    A = H.algebra
    left = _counit_side(H, 1)
    right = _counit_side(H, 2)
    for v in A.variables:
        g = A.gen(v)
        d = H.delta(v)
        if left(d) != g:
            return Verdict(False, v, {"side": "(eps⊗id)Δ", "value": str(left(d))})
        if right(d) != g:
            return Verdict(False, v, {"side": "(id⊗eps)Δ", "value": str(right(d))})
    return Verdict(True)


def check_antipode(H: HopfData) -> Verdict:
    A = H.algebra
    T2, _ = tensor_power(A, 2)
    left = AlgebraMap(
        T2, A, {**{f"{v}@1": H.antipode(v) for v in A.variables}, **{f"{v}@2": A.gen(v) for v in A.variables}}
    )
    right = AlgebraMap(
        T2, A, {**{f"{v}@1": A.gen(v) for v in A.variables}, **{f"{v}@2": H.antipode(v) for v in A.variables}}
    )
    for v in A.variables:
        d = H.delta(v)
        e = H.eps_in_algebra(v)
        if left(d) != e:
            return Verdict(False, v, {"side": "m(S⊗id)Δ", "value": str(left(d)), "expected": str(e)})
        if right(d) != e:
            return Verdict(False, v, {"side": "m(id⊗S)Δ", "value": str(right(d)), "expected": str(e)})
    return Verdict(True)


def check_hopf_axioms(H: HopfData) -> dict[str, Verdict]:
    return {
        "coassociativity": check_coassociativity(H),
        "counit": check_counit(H),
        "antipode": check_antipode(H),
    }


def is_group_like(H: HopfData, a) -> bool:
    a = H.algebra(a)
    return H.delta(a) == tensor(a, a) and H.eps(a) == 1


def check_a_coderivation(H: HopfData, delta, a) -> Verdict:
    """``Δ(δr) = Σ δr₁⊗r₂ + a·r₁⊗δr₂`` on every generator r."""
    A = H.algebra
    a = A(a)
    if not is_group_like(H, a):
        raise ValueError(f"{a} is not group-like")
    if delta.is_twisted:
        raise ValueError("coderivation check expects an untwisted derivation")
    a1 = embed(a, 1, 2)
    for v in A.variables:
        d = H.delta(v)
        lhs = H.delta(delta(v))
        rhs = tensor_linear(d, delta, _ident) + a1 * tensor_linear(d, _ident, delta)
        if lhs != rhs:
            return Verdict(False, v, {"lhs": str(lhs), "rhs": str(rhs)})
    return Verdict(True)


def check_differential_hopf(H: HopfData, delta) -> Verdict:
    """δ commutes with the coproduct (the case a = 1)."""
    return check_a_coderivation(H, delta, 1)


# ---------- characters and translations ----------


def evaluation_map(H: HopfData, point: Mapping) -> AlgebraMap:
    """The character χ_c of a point c (values in the parameter algebra)."""
    A = H.algebra
    S = A.scalars()
    images = {}
    for k, val in point.items():
        if k not in A.index or k in A.parameters:
            raise KeyError(f"unknown coordinate {k!r}")
        images[k] = S(val)
    try:
        chi = AlgebraMap(A, S, images)
    except (KeyError, ValueError) as exc:
        raise NotAGroup(f"point is not on the group: {exc}") from None
    v = chi.check_well_defined()
    if not v:
        raise NotAGroup(f"point is not on the group: {v.certificate}")
    return chi


def _chi_tensor_id(H: HopfData, chi: AlgebraMap, side: int) -> AlgebraMap:
    A = H.algebra
    T2, _ = tensor_power(A, 2)
    other = 2 if side == 1 else 1
    images = {f"{v}@{side}": A.lift(chi(v), chi.target) for v in A.variables}
    images.update({f"{v}@{other}": A.gen(v) for v in A.variables})
    return AlgebraMap(T2, A, images)


def translation_automorphism(H: HopfData, point: Mapping) -> AlgebraMap:
    """σ = (χ_c⊗id)∘Δ, i.e. ``r ↦ (g ↦ r(c·g))``."""
    A = H.algebra
    chi = evaluation_map(H, point)
    phi = _chi_tensor_id(H, chi, 1)
    return AlgebraMap(A, A, {v: phi(H.delta(v)) for v in A.variables})


@dataclass
class CharacterRecovery:
    chi: AlgebraMap
    left: bool
    right: bool

    @property
    def verified(self) -> bool:
        """σ is the translation (χ⊗id)∘Δ."""
        return self.left

    @property
    def two_sided(self) -> bool:
        """Both (χ⊗id)∘Δ and (id⊗χ)∘Δ agree with σ (χ is central)."""
        return self.left and self.right

    def values(self) -> dict[str, str]:
        return {v: str(self.chi.images[v]) for v in self.chi.source.variables}


def recover_character(H: HopfData, sigma: AlgebraMap) -> CharacterRecovery:
    A = H.algebra
    chi = H.counit.compose(sigma)
    lmap = _chi_tensor_id(H, chi, 1)
    rmap = _chi_tensor_id(H, chi, 2)
    left = all(lmap(H.delta(v)) == sigma(v) for v in A.variables)
    right = all(rmap(H.delta(v)) == sigma(v) for v in A.variables)
    return CharacterRecovery(chi, left, right)


def multiply_points(H: HopfData, p: Mapping, q: Mapping) -> dict[str, AlgebraElement]:
    """Coordinates of the product ``p·q`` via (χ_p⊗χ_q)∘Δ."""
    A = H.algebra
    S = A.scalars()
    cp, cq = evaluation_map(H, p), evaluation_map(H, q)
    T2, _ = tensor_power(A, 2)
    images = {f"{v}@1": cp(v) for v in A.variables}
    images.update({f"{v}@2": cq(v) for v in A.variables})
    both = AlgebraMap(T2, S, images)
    return {v: both(H.delta(v)) for v in A.coordinate_names()}
