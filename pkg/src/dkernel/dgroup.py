"""D-groups and a-twisted D-groups of matrices, the E example, the map π
to E, and the logarithmic derivative."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .derivation import Derivation, MagicFit, fit_magic_constant
from .groebner import Ideal
from .hopf import (
    HopfData,
    MatrixGroupSpec,
    hopf_from_matrix_group,
    is_group_like,
    mat_mul,
)
from .prolongation import primed, prolongation_algebra
from .ring import AlgebraElement, AlgebraMap, Poly, PresentedAlgebra, tensor_power
from .verdict import Verdict


class MatrixDVariety:
    """A matrix group with a section ``s̄: G → Mat_n``.

    Give either ``sbar`` (a matrix of coordinate-ring elements) or a
    ``derivation``; the other is derived through ``δ(M) = s̄``.
    """

    def __init__(self, group: MatrixGroupSpec, sbar: Sequence[Sequence] | None = None, derivation: Derivation | None = None):
        A = group.algebra
        self.group = group
        if (sbar is None) == (derivation is None):
            raise ValueError("give exactly one of sbar and derivation")
        if derivation is None:
            sbar = [[A(e) for e in row] for row in sbar]
            if len(sbar) != group.n or any(len(row) != group.n for row in sbar):
                raise ValueError("sbar must have the shape of the group matrix")
            images = {v: sbar[i][j] for v, (i, j) in group.positions.items()}
            derivation = Derivation(A, images)
            for i in range(group.n):
                for j in range(group.n):
                    if derivation(group.matrix[i][j]) != sbar[i][j]:
                        raise ValueError(f"sbar entry ({i + 1},{j + 1}) is not the derivative of M")
        elif derivation.is_twisted:
            raise ValueError("D-groups use untwisted derivations")
        v = derivation.check_well_defined()
        if not v:
            raise ValueError(f"section is not well defined: {v.certificate}")
        self.derivation = derivation
        self.sbar = [[derivation(e) for e in row] for row in group.matrix]
        self._hopf = None

    @property
    def algebra(self) -> PresentedAlgebra:
        return self.group.algebra

    @property
    def hopf(self) -> HopfData:
        if self._hopf is None:
            self._hopf = hopf_from_matrix_group(self.group)
        return self._hopf

    def with_delta(self, overrides) -> MatrixDVariety:
        """Same group, δ changed on some coordinates (for corrupted variants)."""
        images = dict(self.derivation.restricted_images())
        images.update(overrides)
        return MatrixDVariety(self.group, derivation=Derivation(self.algebra, images))


def _twisted_identity(D: MatrixDVariety, a) -> Verdict:
    A = D.algebra
    n = D.group.n
    _, (i1, i2) = tensor_power(A, 2)
    M, S = D.group.matrix, D.sbar
    M1 = [[i1(e) for e in row] for row in M]
    M2 = [[i2(e) for e in row] for row in M]
    S1 = [[i1(e) for e in row] for row in S]
    S2 = [[i2(e) for e in row] for row in S]
    a1 = i1(A(a))
    left_term = mat_mul(S1, M2)
    right_term = mat_mul(M1, S2)
    H = D.hopf
    for i in range(n):
        for j in range(n):
            lhs = H.delta(S[i][j])
            rhs = left_term[i][j] + a1 * right_term[i][j]
            if lhs != rhs:
                return Verdict(False, f"entry ({i + 1},{j + 1})", {"lhs": str(lhs), "rhs": str(rhs)})
    return Verdict(True)


def check_d_group(D: MatrixDVariety) -> Verdict:
    """``s̄(gh) = s̄(g)h + g·s̄(h)`` over the doubled coordinate ring."""
    return _twisted_identity(D, 1)


def check_twisted_d_group(D: MatrixDVariety, a) -> Verdict:
    """``s̄(gh) = s̄(g)h + a(g)·g·s̄(h)`` over the doubled coordinate ring."""
    a = D.algebra(a)
    if not is_group_like(D.hopf, a):
        raise ValueError(f"{a} is not group-like")
    return _twisted_identity(D, a)


def _e_algebra(scalars: PresentedAlgebra) -> PresentedAlgebra:
    for name in ("x", "y", "x_inv"):
        if name in scalars.index:
            raise ValueError(f"parameter name {name!r} clashes with the coordinates of E")
    return scalars.with_variables(["x", "y"]).localize("x")


def example_E(c=0, scalars: PresentedAlgebra | None = None) -> MatrixDVariety:
    """E = {[[x, y], [0, 1]]} with ``δx = xy``, ``δy = y²/2 + c(1 − x²)``.

    ``c`` is a parameter name, a rational, or an element of ``scalars``.
    """
    if isinstance(c, AlgebraElement):
        scalars = c.algebra.scalars() if scalars is None else scalars
        if not c.involves_only_parameters():
            raise ValueError("c must be a constant")
    elif isinstance(c, str) and scalars is None:
        scalars = PresentedAlgebra([], [c])
    elif scalars is None:
        scalars = PresentedAlgebra([], [])
    A = _e_algebra(scalars)
    if isinstance(c, AlgebraElement):
        src = c.algebra
        # c involves parameters only, so the other slots carry zero exponents
        cc = A(c.poly.rename([A.index.get(n, 0) for n in src.names], A.nvars))
    else:
        cc = A(c)
    x, y = A.gen("x"), A.gen("y")
    group = MatrixGroupSpec(A, [[x, y], [0, 1]])
    sbar = [[x * y, y * y * Fraction(1, 2) + cc * (1 - x * x)], [0, 0]]
    return MatrixDVariety(group, sbar)


@dataclass
class PiResult:
    pullback: AlgebraMap
    fit: MagicFit
    target: MatrixDVariety
    homomorphism: Verdict
    eq_coproduct: Verdict
    magic: Verdict
    d_morphism: Verdict

    @property
    def ok(self) -> bool:
        return bool(self.homomorphism and self.eq_coproduct and self.magic and self.d_morphism)

    def images(self) -> dict[str, str]:
        return {v: str(self.pullback.images[v]) for v in ("x", "y")}


def build_pi(D: MatrixDVariety, a) -> PiResult:
    """π(g) = [[a(g), δa(g)/a(g)], [0, 1]] into (E, t_c) with the fitted c."""
    A = D.algebra
    a = A(a)
    v = check_twisted_d_group(D, a)
    if not v:
        raise ValueError(f"not an {a}-twisted D-group: {v.certificate}")
    ainv = a.inverse()
    if ainv is None:
        raise ValueError(f"{a} is not a unit")
    delta = D.derivation
    fit = fit_magic_constant(delta, a)
    if fit is None:
        raise ValueError("no constant satisfies the magic identity")
    magic = Verdict(fit.residual_zero, None if fit.residual_zero else "residual", {"underdetermined": fit.underdetermined})

    E = example_E(fit.c, scalars=A.scalars())
    EA = E.algebra
    da = delta(a)
    pull = AlgebraMap(EA, A, {"x": a, "y": da * ainv, "x_inv": ainv})

    HG, HE = D.hopf, E.hopf
    TG, _ = tensor_power(A, 2)
    TE, _ = tensor_power(EA, 2)
    _, (g1, g2) = tensor_power(A, 2)
    doubled = AlgebraMap(TE, TG, {f"{w}@{j}": (g1 if j == 1 else g2)(pull.images[w]) for w in EA.variables for j in (1, 2)})
    homomorphism = Verdict(True)
    for r in ("x", "y", "x_inv"):
        lhs = HG.delta(pull(r))
        rhs = doubled(HE.delta(r))
        if lhs != rhs:
            homomorphism = Verdict(False, r, {"lhs": str(lhs), "rhs": str(rhs)})
            break

    # Δ(δa) = δa⊗a + a²⊗δa
    lhs = HG.delta(da)
    rhs = g1(da) * g2(a) + g1(a * a) * g2(da)
    eq = Verdict(lhs == rhs, None if lhs == rhs else "delta(a)", {} if lhs == rhs else {"lhs": str(lhs), "rhs": str(rhs)})

    d_morphism = Verdict(True)
    for r in ("x", "y"):
        lhs = delta(pull(r))
        rhs = pull(E.derivation(r))
        if lhs != rhs:
            d_morphism = Verdict(False, r, {"lhs": str(lhs), "rhs": str(rhs)})
            break
    return PiResult(pull, fit, E, homomorphism, eq, magic, d_morphism)


def check_restriction_trivial(D: MatrixDVariety, a, subgroup) -> Verdict:
    """``a`` restricts to 1 on the closed subgroup cut out by ``subgroup``.

    The generators are supplied by the caller (e.g. for ker π).  The ideal
    is checked to be a proper Hopf ideal: ``Δ(J) ⊆ J⊗A + A⊗J`` on generators
    and ``ε(J) = 0``; then ``a − 1 ∈ J`` decides the verdict.
    """
    A = D.algebra
    H = D.hopf
    J = subgroup if isinstance(subgroup, Ideal) else Ideal(A, list(subgroup))
    if J.is_unit():
        raise ValueError("the subgroup ideal is the unit ideal")
    T2, (i1, i2) = tensor_power(A, 2)
    both = Ideal(T2, [i1(g) for g in J.generators] + [i2(g) for g in J.generators])
    for g in J.generators:
        if not H.eps(g).is_zero():
            raise ValueError(f"not a subgroup ideal: counit of {g} is not 0")
        if not both.contains(H.delta(g)):
            raise ValueError(f"not a subgroup ideal: coproduct of {g} leaves J⊗A + A⊗J")
    a = A(a)
    if not J.contains(a - 1):
        return Verdict(False, str(a), {"reduced": str(J.reduce(a - 1))})
    return Verdict(True)


# ---------- logarithmic derivative ----------


def is_commutative(group: MatrixGroupSpec) -> bool:
    """``gh = hg`` for generic g, h."""
    A = group.algebra
    _, (i1, i2) = tensor_power(A, 2)
    M1 = [[i1(e) for e in row] for row in group.matrix]
    M2 = [[i2(e) for e in row] for row in group.matrix]
    return mat_mul(M1, M2) == mat_mul(M2, M1)


def _tangent_derivative(p: Poly, algebra: PresentedAlgebra, base_vars) -> AlgebraElement:
    """Formal derivative ``Σ ∂p/∂v · v'`` in an algebra holding the primed names."""
    out = algebra.zero
    for v in base_vars:
        d = p.diff(algebra.index[v])
        if d.terms:
            out = out + algebra(d) * algebra.gen(primed(v))
    return out


class LogDerivative:
    """``ℓd(M) = (M' − s̄(M))·M⁻¹`` on the tangent algebra of a commutative D-group."""

    def __init__(self, D: MatrixDVariety):
        group = D.group
        if not is_commutative(group):
            raise ValueError("the logarithmic derivative needs a commutative group")
        self.variety = D
        A = group.algebra
        T = prolongation_algebra(A)
        self.tangent = T
        n = group.n
        M = [[T.lift(e, A) for e in row] for row in group.matrix]
        Mp = [[_tangent_derivative(e.poly, T, A.variables) for e in row] for row in M]
        S = [[T.lift(e, A) for e in row] for row in D.sbar]
        Minv = [[T.lift(D.hopf.antipode(e), A) for e in row] for row in group.matrix]
        diff = [[Mp[i][j] - S[i][j] for j in range(n)] for i in range(n)]
        self.matrix = mat_mul(diff, Minv)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.matrix) + "]"

    def entries(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.matrix]

    def on_d_points(self) -> list[list[AlgebraElement]]:
        """Substitute ``X' = δX``: the result vanishes identically."""
        A = self.variety.algebra
        T = self.tangent
        delta = self.variety.derivation
        images = {v: A.gen(v) for v in A.variables}
        images.update({primed(v): delta(v) for v in A.variables})
        sub = AlgebraMap(T, A, images)
        return [[sub(e) for e in row] for row in self.matrix]

    def kernel_check(self) -> Verdict:
        for i, row in enumerate(self.on_d_points()):
            for j, e in enumerate(row):
                if not e.is_zero():
                    return Verdict(False, f"entry ({i + 1},{j + 1})", {"value": str(e)})
        return Verdict(True)

    def product_rule_map(self) -> AlgebraMap:
        """``(g, g') ↦`` the product in the tangent group: ``M ↦ MN``, ``M' ↦ M'N + MN'``."""
        A = self.variety.algebra
        H = self.variety.hopf
        T = self.tangent
        T2, _ = tensor_power(T, 2)
        images = {}
        for v in A.variables:
            d = T2.lift(H.delta(v), H.tensor2)
            images[v] = d
            tv = [f"{w}@{j}" for w in A.variables for j in (1, 2)]
            out = T2.zero
            for name in tv:
                part = d.poly.diff(T2.index[name])
                if part.terms:
                    w, j = name.rsplit("@", 1)
                    out = out + T2(part) * T2.gen(f"{primed(w)}@{j}")
            images[primed(v)] = out
        return AlgebraMap(T, T2, images)

    def additivity_check(self) -> Verdict:
        """``ℓd(MN) = ℓd(M) + ℓd(N)`` under ``(MN)' = M'N + MN'``."""
        T = self.tangent
        T2, (j1, j2) = tensor_power(T, 2)
        mu = self.product_rule_map()
        for i, row in enumerate(self.matrix):
            for j, e in enumerate(row):
                lhs = mu(e)
                rhs = j1(e) + j2(e)
                if lhs != rhs:
                    return Verdict(False, f"entry ({i + 1},{j + 1})", {"lhs": str(lhs), "rhs": str(rhs)})
        return Verdict(True)


def logarithmic_derivative(D: MatrixDVariety) -> LogDerivative:
    return LogDerivative(D)
