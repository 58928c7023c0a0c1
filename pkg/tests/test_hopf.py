import pytest

from dkernel.derivation import Derivation
from dkernel.hopf import (
    MatrixGroupSpec,
    NotAGroup,
    check_a_coderivation,
    check_differential_hopf,
    check_hopf_axioms,
    evaluation_map,
    hopf_from_matrix_group,
    is_group_like,
    multiply_points,
    recover_character,
    translation_automorphism,
)
from dkernel.ring import AlgebraMap, PresentedAlgebra


def E(params=()):
    A = PresentedAlgebra(["x", "y"], list(params)).localize("x")
    return hopf_from_matrix_group(MatrixGroupSpec(A, [["x", "y"], [0, 1]]))


def GL2():
    A = PresentedAlgebra(["a", "b", "c", "d"]).localize("a*d - b*c", "det_inv")
    return hopf_from_matrix_group(MatrixGroupSpec(A, [["a", "b"], ["c", "d"]]))


def test_structure_maps_of_e():
    H = E()
    T = H.tensor2
    assert H.delta("y") == T("x@1*y@2 + y@1")
    assert H.delta("x_inv") == T("x_inv@1*x_inv@2")
    assert H.eps("x") == 1 and H.eps("y") == 0
    assert H.antipode("y") == H.algebra("-y*x_inv")


@pytest.mark.parametrize("make", [E, GL2])
def test_axioms_hold(make):
    res = check_hopf_axioms(make())
    assert all(v.ok for v in res.values()), res


def test_corrupted_variants_fail_one_check_each():
    H = E()
    res = check_hopf_axioms(H.replace(coproduct={"y": "x@1*y@2 + y@1*y@2"}))
    assert not res["coassociativity"].ok
    res = check_hopf_axioms(H.replace(counit={"x": 2}))
    assert not res["counit"].ok
    res = check_hopf_axioms(H.replace(antipode={"y": "y"}))
    assert not res["antipode"].ok and res["coassociativity"].ok and res["counit"].ok


def test_non_group_matrix_rejected():
    A = PresentedAlgebra(["x"])
    with pytest.raises(ValueError):
        MatrixGroupSpec(A, [["x"]])


def test_group_likes():
    H = E()
    assert is_group_like(H, "x") and is_group_like(H, "x_inv") and is_group_like(H, 1)
    assert not is_group_like(H, "y") and not is_group_like(H, "x + 1")
    assert is_group_like(H, "x^3")


def test_coderivation_twist_matters():
    H = E(["c"])
    d = Derivation(H.algebra, {"x": "x*y", "y": "y^2/2 + c*(1 - x^2)"})
    assert check_a_coderivation(H, d, "x").ok
    v = check_differential_hopf(H, d)
    assert not v.ok and v.certificate == "x"
    with pytest.raises(ValueError):
        check_a_coderivation(H, d, "y")


def test_evaluation_and_products():
    H = E()
    with pytest.raises(NotAGroup):
        evaluation_map(H, {"x": 0, "y": 1})
    prod = multiply_points(H, {"x": 2, "y": 3}, {"x": 5, "y": 7})
    # [[2,3],[0,1]] @ [[5,7],[0,1]] = [[10,17],[0,1]]
    assert prod["x"] == 10 and prod["y"] == 17


@pytest.mark.parametrize(
    "make, c, d",
    [
        (E, {"x": 2, "y": 3}, {"x": -1, "y": 4}),
        (lambda: hopf_from_matrix_group(MatrixGroupSpec(PresentedAlgebra(["x"]).localize("x"), [["x"]])), {"x": 3}, {"x": -2}),
        (lambda: hopf_from_matrix_group(MatrixGroupSpec(PresentedAlgebra(["y"]), [[1, "y"], [0, 1]])), {"y": 5}, {"y": -7}),
    ],
)
def test_translations_compose_like_the_group_law(make, c, d):
    H = make()
    sc, sd = translation_automorphism(H, c), translation_automorphism(H, d)
    dc = {k: v.scalar_value() for k, v in multiply_points(H, d, c).items()}
    assert sc.compose(sd) == translation_automorphism(H, dc)


def test_group_likes_closed_under_products_and_inverses():
    H = GL2()
    det, inv = H.algebra("a*d - b*c"), H.algebra.gen("det_inv")
    assert is_group_like(H, det) and is_group_like(H, inv)
    assert is_group_like(H, det * det * inv * inv * inv)


def test_character_recovery():
    H = E()
    sigma = translation_automorphism(H, {"x": 2, "y": 3})
    rec = recover_character(H, sigma)
    assert rec.verified and not rec.two_sided
    assert rec.values() == {"x": "2", "y": "3", "x_inv": "1/2"}
    A = H.algebra
    rec = recover_character(H, AlgebraMap(A, A, {"x": "x", "y": "2*y"}))
    assert not rec.verified
