from fractions import Fraction

import pytest
from hypothesis import given, settings

from dkernel.parsing import ParseError
from dkernel.ring import (
    GREVLEX,
    LEX,
    AlgebraMap,
    Poly,
    PresentedAlgebra,
    elimination_order,
    embed,
    reindex,
    tensor,
    tensor_power,
)
from strategies import polys


@given(polys(3), polys(3), polys(3))
@settings(max_examples=60, deadline=None)
def test_poly_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly(3)


@given(polys(2), polys(2))
@settings(max_examples=60, deadline=None)
def test_derivative_product_rule(a, b):
    for i in range(2):
        assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_monomial_orders():
    # x > y > z; grevlex breaks degree ties against the last variable
    assert GREVLEX.key((0, 2, 0)) > GREVLEX.key((1, 0, 1))
    assert GREVLEX.key((0, 0, 3)) > GREVLEX.key((2, 0, 0))
    assert LEX.key((1, 0, 0)) > LEX.key((0, 5, 5))
    elim = elimination_order([2])
    assert elim.key((0, 0, 1)) > elim.key((5, 5, 0))


def test_parse_and_print():
    A = PresentedAlgebra(["x", "y"], ["c"])
    p = A("(x + y)^2 - c*x/2")
    assert p == A("x^2 + 2*x*y + y^2 - 1/2*c*x")
    assert A(str(p)) == p
    with pytest.raises(ParseError):
        A("x + z")
    with pytest.raises(ParseError):
        A("x +")


def test_duplicate_and_bad_names_rejected():
    with pytest.raises(ValueError):
        PresentedAlgebra(["x", "x"])
    with pytest.raises(ValueError):
        PresentedAlgebra(["1x"])


def test_localize_gives_inverse():
    A = PresentedAlgebra(["x"]).localize("x")
    x, xi = A.gen("x"), A.gen("x_inv")
    assert x * xi == 1
    assert A("x^3") * A("x_inv^2") == x
    assert x.inverse() == xi
    assert A("x + 1").inverse() is None
    assert x ** -2 == xi * xi
    with pytest.raises(ValueError):
        A.localize("x + 1", "x_inv")
    assert A.localize("x") is A


def test_inverse_found_beyond_declared_units():
    A = PresentedAlgebra(["x", "y"], relations=["x*y - 1"])
    assert A.gen("x").inverse() == A.gen("y")
    B = PresentedAlgebra(["x"], ["q"]).localize("q")
    assert B("2*q").inverse() == B("q_inv/2")


def test_normal_forms_are_canonical():
    A = PresentedAlgebra(["x", "y"], relations=["x^2 + y^2 - 1"])
    assert A("x^2") == A("1 - y^2")
    assert hash(A("x^2")) == hash(A("1 - y^2"))


def test_algebra_map_and_composition():
    A = PresentedAlgebra(["x"]).localize("x")
    sq = AlgebraMap(A, A, {"x": "x^2"})
    assert sq("x_inv") == A("x_inv^2")
    cube = AlgebraMap(A, A, {"x": "x^3"})
    assert sq.compose(cube)("x") == A("x^6")
    assert sq.check_well_defined().ok
    B = PresentedAlgebra(["x", "y"], relations=["x*y"])
    bad = AlgebraMap(B, B, {"x": "x + 1", "y": "y"})
    v = bad.check_well_defined()
    assert not v.ok and "x*y" in v.certificate
    with pytest.raises(ValueError):
        AlgebraMap(A, A, {"x": "x + 1"})


def test_tensor_power_shares_parameters():
    A = PresentedAlgebra(["x"], ["c"]).localize("x")
    T, emb = tensor_power(A, 2)
    assert T.variables == ("x@1", "x_inv@1", "x@2", "x_inv@2")
    assert T.parameters == ("c",)
    assert tensor(A("c*x"), A("x")) == T("c*x@1*x@2")
    assert embed(A("x_inv"), 2, 2) * T.gen("x@2") == 1
    swapped = reindex(T("x@1 + 2*x@2"), [2, 1], 2)
    assert swapped == T("x@2 + 2*x@1")
    T3, _ = tensor_power(A, 3)
    assert reindex(T("x@1*x@2"), [1, 3], 3) == T3("x@1*x@3")


def test_scalar_arithmetic_exact():
    A = PresentedAlgebra(["x"])
    assert A("x/3") * 3 == A.gen("x")
    assert A(Fraction(1, 3)) + A(Fraction(2, 3)) == 1
