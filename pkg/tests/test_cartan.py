import pytest

from ddbar.core.exceptions import ContractionError, PreconditionError
from ddbar.models.algebra import DEL, DELBAR
from ddbar.models.bicomplex import Flavor
from ddbar.models.cartan import PART_01, PART_10, TCbba
from ddbar.services.cartan_service import CartanService
from tests.conftest import FIXTURES


@pytest.fixture
def cartan_service():
    return CartanService()


@pytest.fixture
def orbit(parser):
    return parser.load(FIXTURES / "tcbba" / "orbit.json")


@pytest.fixture
def square(parser):
    return parser.load(FIXTURES / "tcbba" / "square.json")


def test_shipped_contractions_are_valid(cartan_service, orbit, square):
    assert cartan_service.validate(orbit).valid
    assert cartan_service.validate(square).valid


def test_contraction_of_the_wrong_bidegree(cartan_service, orbit):
    algebra = orbit.algebra
    broken = TCbba(algebra, 1, {("v", 0, PART_10): algebra.generator("vb")})
    verdict = cartan_service.validate(broken)
    assert not verdict.valid
    assert verdict.witness == "v"


def test_contractions_must_commute_with_sigma(cartan_service, orbit):
    algebra = orbit.algebra
    lopsided = TCbba(algebra, 1, {("v", 0, PART_10): algebra.one()})
    with pytest.raises(ContractionError) as info:
        cartan_service.require_valid(lopsided)
    assert info.value.witness == "vb"


def test_cartan_differential(cartan_service, orbit):
    model = cartan_service.cartan_model(orbit)
    assert model.xi == ["xi1"]
    cartan = model.algebra
    xi = cartan.generator("xi1")
    assert cartan.image(DELBAR, cartan.index["v"]) == -xi
    assert cartan.image(DEL, cartan.index["vb"]) == -xi
    assert not cartan.image(DEL, cartan.index["v"])
    assert model.restriction.apply(model.lift(orbit.algebra.generator("v"))) == orbit.algebra.generator("v")


def test_split_groups_by_xi_monomial(cartan_service, orbit):
    model = cartan_service.cartan_model(orbit)
    element = model.algebra.parse("xi1*v + vb")
    parts = model.split(element)
    assert parts[(1,)] == orbit.algebra.generator("v")
    assert parts[(0,)] == orbit.algebra.generator("vb")


def test_closed_class_extends_after_one_correction(cartan_service, square):
    model = cartan_service.cartan_model(square)
    theta = square.algebra.parse("v*R")
    result = cartan_service.extend_to_equivariant(model, theta)
    assert result.success
    assert len(result.stages) == 1
    assert result.stages[0].corrections[0][0] == "xi1"
    cartan = model.algebra
    assert not cartan.differential(result.extended, DEL)
    assert not cartan.differential(result.extended, DELBAR)


def test_orbit_generator_does_not_extend(cartan_service, orbit):
    model = cartan_service.cartan_model(orbit)
    result = cartan_service.extend_to_equivariant(model, orbit.algebra.generator("v"))
    assert not result.success
    assert result.certificate["stage"] == 1


def test_extension_needs_a_closed_class(cartan_service, square):
    model = cartan_service.cartan_model(square)
    with pytest.raises(PreconditionError):
        cartan_service.extend_to_equivariant(model, square.algebra.generator("A"))


def test_zero_extends_trivially(cartan_service, orbit):
    model = cartan_service.cartan_model(orbit)
    result = cartan_service.extend_to_equivariant(model, orbit.algebra.zero())
    assert result.success
    assert not result.extended


def test_contraction_parts(orbit):
    v = orbit.algebra.generator("v")
    assert orbit.contract(0, PART_10, v) == orbit.algebra.one()
    assert not orbit.contract(0, PART_01, v)
    assert not orbit.is_trivial


def test_cartan_model_of_the_square_is_consistent(cartan_service, square):
    verdict = cartan_service.cartan_ddbar_check(cartan_service.cartan_model(square), 4)
    assert verdict.window == 4
    assert verdict.consistent


@pytest.mark.parametrize("name", ["orbit", "square"])
@pytest.mark.parametrize("trivial", [False, True])
def test_surjective_restriction_lets_closed_classes_extend(
    request, rng, cartan_service, algebra_service, cohomology_service, name, trivial
):
    tcbba = request.getfixturevalue(name)
    if trivial:
        tcbba = TCbba(tcbba.algebra, tcbba.rank, {})
    model = cartan_service.cartan_model(tcbba)
    verdict = cartan_service.cartan_ddbar_check(model, 4)
    assert verdict.consistent
    assert verdict.surjective == trivial
    if not verdict.surjective:
        return

    window = algebra_service.underlying_bicomplex(tcbba.algebra, 4)
    bc = cohomology_service.cohomology(window.bicomplex, Flavor.BC)
    for _ in range(10):
        bd = rng.choice(sorted(bc.representatives))
        theta = tcbba.algebra.zero()
        for chain in bc.representatives[bd]:
            theta = theta + window.to_element(chain) * rng.choice([-3, -2, -1, 1, 2, 3])
        result = cartan_service.extend_to_equivariant(model, theta)
        assert result.success, (bd, theta.to_text())
