import pytest

from dkernel.dgroup import (
    MatrixDVariety,
    build_pi,
    check_d_group,
    check_twisted_d_group,
    example_E,
    is_commutative,
    logarithmic_derivative,
)
from dkernel.hopf import MatrixGroupSpec
from dkernel.ring import PresentedAlgebra


def ga(sbar):
    A = PresentedAlgebra(["y"], ["lam"])
    return MatrixDVariety(MatrixGroupSpec(A, [[1, "y"], [0, 1]]), sbar)


def gm(sbar):
    A = PresentedAlgebra(["x"], ["lam"]).localize("x")
    return MatrixDVariety(MatrixGroupSpec(A, [["x"]]), sbar)


def test_d_groups():
    assert check_d_group(ga([[0, "lam*y"], [0, 0]])).ok
    assert check_d_group(gm([[0]])).ok
    # on G_m only the zero section is additive
    assert not check_d_group(gm([["lam*x"]])).ok
    assert not check_d_group(ga([[0, "y^2"], [0, 0]])).ok
    assert not check_d_group(example_E("c")).ok


def test_twisted_d_groups():
    assert check_twisted_d_group(example_E("c"), "x").ok
    assert check_twisted_d_group(gm([["lam*(x^2 - x)"]]), "x").ok
    assert not check_twisted_d_group(gm([["lam*x^2"]]), "x").ok
    with pytest.raises(ValueError):
        check_twisted_d_group(example_E(), "y")


def test_example_e_constants():
    E = example_E(3)
    assert E.algebra.parameters == ()
    assert E.derivation("y") == E.algebra("y^2/2 + 3*(1 - x^2)")
    S = PresentedAlgebra([], ["lam"])
    E = example_E(S("lam^2"), scalars=S)
    assert E.derivation("y") == E.algebra("y^2/2 + lam^2*(1 - x^2)")


def test_sbar_shape_checked():
    with pytest.raises(ValueError):
        ga([[0, "y"]])


def test_pi_on_differential_hopf_case():
    r = build_pi(gm([[0]]), 1)
    assert r.ok and r.fit.underdetermined
    assert r.images() == {"x": "1", "y": "0"}
    with pytest.raises(ValueError):
        build_pi(example_E("c"), 1)


def test_commutativity():
    assert is_commutative(ga([[0, 0], [0, 0]]).group)
    assert is_commutative(gm([[0]]).group)
    assert not is_commutative(example_E().group)
    with pytest.raises(ValueError):
        logarithmic_derivative(example_E())


def test_log_derivative_on_gm_with_section():
    L = logarithmic_derivative(gm([["lam*x"]]))
    T = L.tangent
    assert L.matrix[0][0] == T("x'*x_inv - lam")
    assert L.kernel_check().ok
    assert L.on_d_points() == [[L.variety.algebra.zero]]
    # the constant term lam is not additive
    assert not L.additivity_check().ok


def test_log_derivative_detects_non_additive_section():
    L = logarithmic_derivative(gm([["lam*(x^2 - x)"]]))
    assert L.kernel_check().ok
    assert not L.additivity_check().ok


def test_restriction_to_subgroups():
    from dkernel.dgroup import check_restriction_trivial

    G = gm([["lam*(x^2 - x)"]])
    r = build_pi(G, "x")
    # the kernel of pi is cut out by pullbacks of the entries of M - I
    kernel = [r.pullback.images["x"] - 1, r.pullback.images["y"]]
    assert check_restriction_trivial(G, "x", kernel).ok
    E = example_E("c")
    assert check_restriction_trivial(E, "x", ["x - 1", "y"]).ok
    v = check_restriction_trivial(E, "x", ["y"])
    assert not v.ok and v.certificate == "x"
    with pytest.raises(ValueError):
        check_restriction_trivial(G, "x", ["x - 2"])
    with pytest.raises(ValueError):
        check_restriction_trivial(E, "x", ["y - 1"])
