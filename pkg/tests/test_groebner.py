import random

import pytest
import sympy as sp
from hypothesis import given, settings

import oracles
from dkernel.groebner import (
    Ideal,
    ResourceExhausted,
    buchberger,
    elimination_ideal,
    ideal_member,
    intersect,
    normal_form,
    radical_member,
    resource_limits,
)
from dkernel.ring import Poly, PresentedAlgebra
from strategies import polys


def test_membership_matches_dense_oracle():
    rng = random.Random(1)
    for _ in range(60):
        n = 2
        gens = [oracles.random_terms(rng, n, 2, 3) for _ in range(2)]
        gens = [g for g in gens if g]
        if not gens:
            continue
        A = PresentedAlgebra(["x", "y"])
        I = Ideal(A, [A(Poly(n, g)) for g in gens])
        h = oracles.random_terms(rng, n, 1, 2)
        p = oracles.mul_terms(gens[0], h) if h else oracles.random_terms(rng, n, 2, 2)
        bound = max(oracles.degree(p), max(oracles.degree(g) for g in gens)) + 3
        assert ideal_member(A(Poly(n, p)), I) == oracles.dense_member(p, gens, n, bound)


def test_basis_matches_sympy():
    rng = random.Random(2)
    X = sp.symbols("x y z")
    A = PresentedAlgebra(["x", "y", "z"])
    for _ in range(15):
        gens = [oracles.random_terms(rng, 3, 2, 3) for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if g]
        if not gens:
            continue
        ours = buchberger([Poly(3, g) for g in gens], nvars=3)
        ours_set = {oracles.sympy_expand(p.to_str(A.names), A.names) for p in ours}
        expected = oracles.sympy_monic_basis([oracles.to_sympy(g, X) for g in gens], X)
        assert ours_set == expected


@given(polys(2), polys(2), polys(2))
@settings(max_examples=40, deadline=None)
def test_combinations_are_members(g, h, r):
    A = PresentedAlgebra(["x", "y"])
    I = Ideal(A, [g])
    assert ideal_member(A(g * h), I)
    nf = normal_form(r, I.basis)
    assert ideal_member(A(r - nf), I)
    assert normal_form(nf, I.basis) == nf


def test_basis_is_deterministic():
    A = PresentedAlgebra(["x", "y", "z"])
    gens = [A(s).poly for s in ("x*y - z", "y^2 - x", "z^2 - y")]
    first = buchberger(gens, nvars=3)
    assert all(buchberger(gens, nvars=3) == first for _ in range(3))
    assert buchberger(gens[::-1], nvars=3) == first


def test_reduced_basis_is_monic_and_interreduced():
    A = PresentedAlgebra(["x", "y"])
    gb = buchberger([A("2*x^2 - y").poly, A("3*x*y - 1").poly], nvars=2)
    for i, g in enumerate(gb):
        assert g.leading_term()[1] == 1
        others = gb[:i] + gb[i + 1 :]
        assert normal_form(g, others) == g


def test_unit_and_zero_ideals():
    A = PresentedAlgebra(["x"])
    assert Ideal(A, ["x", "x + 1"]).is_unit()
    assert Ideal(A, []).is_zero()
    assert not Ideal(A, ["x^2"]).is_unit()


def test_intersection():
    A = PresentedAlgebra(["x", "y"])
    I, J = Ideal(A, ["x"]), Ideal(A, ["y"])
    K = intersect(I, J)
    assert K == Ideal(A, ["x*y"])
    assert intersect(J, I) == K
    assert K.issubset(I) and K.issubset(J)
    L = intersect(Ideal(A, ["x^2"]), Ideal(A, ["x*y"]))
    assert L == Ideal(A, ["x^2*y"])
    assert L.issubset(Ideal(A, ["x^2"])) and L.issubset(Ideal(A, ["x*y"]))


def test_elimination():
    A = PresentedAlgebra(["t", "x", "y"])
    I = Ideal(A, ["x - t^2", "y - t^3"])
    E = elimination_ideal(I, ["x", "y"])
    assert E == Ideal(A, ["x^3 - y^2"])


def test_radical_membership():
    A = PresentedAlgebra(["x", "y"])
    I = Ideal(A, ["x^3", "y^2"])
    assert radical_member("x", I) and radical_member("x + y", I)
    assert not ideal_member("x", I)
    assert not radical_member("x + 1", I)


@given(polys(2, 2, 3))
@settings(max_examples=30, deadline=None)
def test_membership_implies_radical_membership(p):
    A = PresentedAlgebra(["x", "y"])
    I = Ideal(A, ["x^2 - y", "x*y"])
    if ideal_member(A(p), I):
        assert radical_member(A(p), I)


def test_ideal_in_quotient_algebra():
    A = PresentedAlgebra(["x"]).localize("x")
    assert Ideal(A, ["x"]).is_unit()
    assert ideal_member("x_inv - 1", Ideal(A, ["x - 1"]))


def test_resource_limits_raise():
    A = PresentedAlgebra(["x", "y", "z"])
    gens = [A(s).poly for s in ("x^5*y - z^4 + x", "y^5*z - x^3 + 1", "z^5*x - y^2")]
    with resource_limits(max_basis=3):
        with pytest.raises(ResourceExhausted):
            buchberger(gens, nvars=3)
