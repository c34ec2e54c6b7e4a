import pytest

from ddbar.core.exceptions import FanValidationError, PreconditionError
from ddbar.models.algebra import Generator, GradedAlgebra
from ddbar.models.bicomplex import Flavor
from ddbar.models.fan import Fan
from tests.conftest import FIXTURES


def fan(rays, cones, complete=True, name=""):
    return Fan(len(rays[0]), [tuple(r) for r in rays], [frozenset(c) for c in cones], complete, name)


@pytest.fixture
def cp1():
    return fan([[1], [-1]], [[0], [1]], name="CP1")


@pytest.fixture
def cp2():
    return fan([[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [0, 2]], name="CP2")


@pytest.fixture
def cp1xcp1():
    return fan([[1, 0], [0, 1], [-1, 0], [0, -1]], [[0, 1], [1, 2], [2, 3], [0, 3]], name="CP1xCP1")


def test_minimal_nonfaces(toric_service, cp1, cp2, cp1xcp1):
    assert toric_service.minimal_nonfaces(cp1).labels() == [[1, 2]]
    assert toric_service.minimal_nonfaces(cp2).labels() == [[1, 2, 3]]
    assert toric_service.minimal_nonfaces(cp1xcp1).labels() == [[1, 3], [2, 4]]


def test_betti_numbers(toric_service, cp1, cp2, cp1xcp1):
    assert toric_service.ordinary_betti(cp1) == [1, 0, 1]
    assert toric_service.ordinary_betti(cp2) == [1, 0, 1, 0, 1]
    assert toric_service.ordinary_betti(cp1xcp1) == [1, 0, 2, 0, 1]


def test_betti_numbers_agree_with_the_h_vector(toric_service, parser):
    for name in ("cp1", "cp2", "cp1xcp1", "f1"):
        loaded = parser.load(FIXTURES / "fans" / f"{name}.json")
        assert toric_service.ordinary_betti(loaded) == toric_service.h_vector_betti(loaded), name


def test_betti_numbers_do_not_depend_on_ray_order(toric_service, cp1xcp1):
    assert toric_service.ordinary_betti(cp1xcp1.permuted([2, 0, 3, 1])) == [1, 0, 2, 0, 1]


def test_equivariant_dims(toric_service, cp2):
    assert toric_service.equivariant_dims(cp2, 4) == [1, 0, 3, 0, 6]


def test_equivariant_cohomology_generators(toric_service, cp2):
    algebra = toric_service.equivariant_cohomology(cp2)
    assert [g.name for g in algebra.generators] == ["tau1", "tau2", "tau3"]
    assert all(g.bidegree == (1, 1) for g in algebra.generators)
    assert algebra.truncation == 6
    assert len(algebra.relations) == 1

def test_freeness(toric_service, cp2, cp1xcp1):
    for complete in (cp2, cp1xcp1):
        report = toric_service.freeness_check(complete, 8)
        assert report.verdict
        assert report.equivariant_series == report.predicted_series


def test_splitting_of_the_projective_line(toric_service, cp1):
    report = toric_service.splitting_check(cp1, 2)
    assert report.qiso.verdict
    assert [g.name for g in report.extended.generators] == ["tau1", "tau2", "s1", "ds1", "dbs1"]


def test_adjoin_contractible_names(toric_service, cp2):
    equivariant = toric_service.equivariant_cohomology(cp2, 4)
    extended = toric_service.adjoin_contractible(equivariant, toric_service.linear_forms(cp2, equivariant))
    assert extended.name == "H_T(CP2)(x)S"
    assert [g.name for g in extended.generators][3:] == ["s1", "ds1", "dbs1", "s2", "ds2", "dbs2"]


def test_adjoin_contractible_needs_weights(toric_service):
    unweighted = GradedAlgebra([Generator("x", (1, 1), "x")], bigraded=True, truncation=4, real_structure=True)
    with pytest.raises(PreconditionError):
        toric_service.adjoin_contractible(unweighted, [unweighted.generator("x")])


@pytest.fixture
def line():
    return GradedAlgebra([Generator("t", (1, 1), "t", 1)], bigraded=True, truncation=8, real_structure=True)


def test_killing_the_generator_leaves_only_constants(toric_service, algebra_service, cohomology_service, line):
    extended = toric_service.adjoin_contractible(line, [line.generator("t")])
    window = algebra_service.underlying_bicomplex(extended, 4, 3)
    assert cohomology_service.cohomology(window.bicomplex, Flavor.DR).dims == {0: 1}
    assert cohomology_service.cohomology(window.bicomplex, Flavor.BC).dims.get((0, 0)) == 1


def test_a_zero_image_leaves_the_contractible_factor_visible(
    toric_service, algebra_service, cohomology_service, line
):
    extended = toric_service.adjoin_contractible(line, [line.zero()])
    window = algebra_service.underlying_bicomplex(extended, 4, 3)
    assert 1 in cohomology_service.cohomology(window.bicomplex, Flavor.DR).dims
    assert (1, 0) in cohomology_service.cohomology(window.bicomplex, Flavor.BC).dims


@pytest.mark.slow
def test_splitting_of_the_projective_plane(toric_service, cp2):
    report = toric_service.splitting_check(cp2, 5)
    assert report.qiso.verdict
    assert report.qiso.max_weight == 3


def test_rays_must_be_primitive(toric_service):
    with pytest.raises(FanValidationError) as info:
        toric_service.validate_fan(fan([[2], [-1]], [[0], [1]]))
    assert info.value.detail == {"ray": 1}


def test_cones_must_be_unimodular(toric_service):
    singular = fan([[1, 0], [1, 2], [-1, -1]], [[0, 1], [1, 2], [0, 2]])
    with pytest.raises(FanValidationError):
        toric_service.validate_fan(singular)


def test_complete_fans_close_up(toric_service):
    open_fan = fan([[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2]])
    with pytest.raises(FanValidationError) as info:
        toric_service.validate_fan(open_fan)
    assert "wall" in info.value.message


def test_ordinary_cohomology_needs_a_complete_fan(toric_service):
    with pytest.raises(PreconditionError):
        toric_service.ordinary_cohomology(fan([[1, 0], [0, 1]], [[0, 1]], complete=False))
