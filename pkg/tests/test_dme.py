import pytest

from dkernel.derivation import Derivation
from dkernel.dme import (
    DeltaIdealCandidate,
    check_locally_closed_among,
    check_primitivity_witness,
    check_rationality_witness,
    is_delta_ideal,
    is_sigma_delta_ideal,
    is_sigma_stable,
)
from dkernel.groebner import Ideal
from dkernel.ring import AlgebraMap, PresentedAlgebra


@pytest.fixture
def ky():
    R = PresentedAlgebra(["y"])
    return R, Derivation(R, {"y": "y"})


def test_delta_ideals(ky):
    R, d = ky
    assert is_delta_ideal(Ideal(R, ["y"]), d).ok
    assert is_delta_ideal(Ideal(R, ["y^3"]), d).ok
    assert is_delta_ideal(Ideal(R, []), d).ok
    v = is_delta_ideal(Ideal(R, ["y - 1"]), d)
    assert not v.ok and v.certificate == "y - 1"


def test_sigma_delta_ideals():
    R = PresentedAlgebra(["y"])
    s = AlgebraMap(R, R, {"y": "2*y"})
    d = Derivation(R, {"y": "y"}, s)
    assert is_sigma_stable(Ideal(R, ["y"]), s).ok
    assert not is_sigma_stable(Ideal(R, ["y - 1"]), s).ok
    assert is_sigma_delta_ideal(Ideal(R, ["y"]), s, d).ok
    assert not is_sigma_delta_ideal(Ideal(R, ["y - 1"]), s, d).ok


def test_candidates_must_be_proper_delta_ideals(ky):
    R, d = ky
    with pytest.raises(ValueError):
        DeltaIdealCandidate(Ideal(R, [1]))
    with pytest.raises(ValueError):
        DeltaIdealCandidate(Ideal(R, ["y - 1"])).check(d)


def test_locally_closed(ky):
    R, d = ky
    zero, Y = DeltaIdealCandidate(Ideal(R, [])), DeltaIdealCandidate(Ideal(R, ["y"]), name="Y")
    res = check_locally_closed_among(zero, [Y], d)
    assert res.ok and res.intersection == Ideal(R, ["y"]) and res.above == ["Y"]
    assert res.as_dict()["ok"] is True
    res = check_locally_closed_among(Y, [Y], d)
    assert res.ok and res.convention


def test_locally_closed_fails_with_a_chain_of_points():
    U = PresentedAlgebra(["u"])
    z = Derivation.zero(U)
    pts = [DeltaIdealCandidate(Ideal(U, [f"u - {i}"])) for i in range(3)]
    res = check_locally_closed_among(DeltaIdealCandidate(Ideal(U, [])), pts, z)
    assert res.intersection == Ideal(U, ["u*(u - 1)*(u - 2)"])
    assert res.ok


def test_rationality(ky):
    R, d = ky
    zero = DeltaIdealCandidate(Ideal(R, []))
    rep = check_rationality_witness(zero, "y", "1", d)
    assert not rep.constant and not rep.refutes
    rep = check_rationality_witness(zero, "2*y", "y", d)
    assert rep.constant and rep.scalar == R(2) and not rep.refutes
    U = PresentedAlgebra(["u", "v"])
    z = Derivation.zero(U)
    rep = check_rationality_witness(DeltaIdealCandidate(Ideal(U, [])), "u", "1", z)
    assert rep.constant and rep.scalar is None and rep.refutes
    with pytest.raises(ValueError):
        check_rationality_witness(DeltaIdealCandidate(Ideal(R, ["y"])), "1", "y", d)


def test_primitivity(ky):
    R, d = ky
    zero, Y = DeltaIdealCandidate(Ideal(R, [])), DeltaIdealCandidate(Ideal(R, ["y"]))
    assert check_primitivity_witness(Y, Ideal(R, ["y"]), [Y], d).ok
    v = check_primitivity_witness(zero, Ideal(R, ["y"]), [Y], d)
    assert not v.ok and v.certificate == "(y)"
    assert check_primitivity_witness(zero, Ideal(R, ["y - 1"]), [Y], d).ok
    with pytest.raises(ValueError):
        check_primitivity_witness(Y, Ideal(R, ["y - 1"]), [], d)
