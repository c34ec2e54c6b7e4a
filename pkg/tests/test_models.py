import pytest

from ddbar.core.exceptions import PreconditionError
from ddbar.models.algebra import DEL, Generator, free_algebra
from ddbar.models.bicomplex import Flavor
from tests.conftest import FIXTURES


@pytest.fixture
def sphere(parser):
    return parser.load(FIXTURES / "algebras" / "s2.json")


@pytest.fixture
def flag(parser):
    return parser.load(FIXTURES / "algebras" / "flag.json")


@pytest.fixture
def heisenberg():
    """Λ(x, y, z) with dz = xy"""
    return free_algebra(
        [Generator(n, (1, 0)) for n in ("x", "y", "z")],
        {"z": ("x*y", None)},
        bigraded=False,
        truncation=6,
    )


def polynomial(relations, truncation=10):
    return free_algebra(
        [Generator(n, (2, 0)) for n in ("x1", "x2", "x3")],
        {},
        bigraded=False,
        truncation=truncation,
        relations=relations,
    )


def test_minimal_model_of_the_sphere(model_service, sphere):
    model = model_service.minimal_model(sphere, 5)
    assert model.dimension_table() == {2: 1, 3: 1}
    algebra = model.algebra
    assert [g.name for g in algebra.generators] == ["x2_1", "y3_1"]
    assert algebra.image(DEL, algebra.index["y3_1"]) == algebra.parse("x2_1^2")
    assert model.stages[1].killing == [("y3_1", "x2_1^2")]


def test_minimal_model_needs_simple_connectivity(model_service, heisenberg):
    with pytest.raises(PreconditionError):
        model_service.minimal_model(heisenberg, 2)


def test_minimal_model_needs_room_above_the_degree(model_service, sphere):
    with pytest.raises(PreconditionError):
        model_service.minimal_model(sphere, 7)


def test_homotopy_of_the_sphere_model(model_service, sphere):
    data = model_service.homotopy(model_service.minimal_model(sphere, 4))
    assert data.dims == {2: 1, 3: 1}
    assert data.generators == {2: ["x2_1"], 3: ["y3_1"]}


def test_koszul_model_of_truncated_polynomials(model_service, algebra_service, cohomology_service, sphere):
    koszul = model_service.koszul_model(sphere, 6)
    assert koszul.qiso.verdict
    assert [g.name for g in koszul.algebra.generators] == ["x", "p1"]
    assert koszul.algebra.generators[1].degree == 3
    window = algebra_service.underlying_bicomplex(koszul.algebra, 6)
    dims = cohomology_service.cohomology(window.bicomplex, Flavor.DR).dims
    assert [dims.get(k, 0) for k in range(7)] == [1, 0, 1, 0, 0, 0, 0]


def truncated_polynomial(k, bigraded=False):
    """ℚ[x]/(x^{k+1}) with x in degree 2"""
    return free_algebra(
        [Generator("x", (1, 1), "x") if bigraded else Generator("x", (2, 0))],
        {},
        bigraded=bigraded,
        truncation=10,
        relations=[f"x^{k + 1}"],
        real_structure=bigraded,
    )


@pytest.mark.parametrize("k", [1, 2, 3])
def test_koszul_models_of_truncated_polynomial_rings(model_service, k):
    koszul = model_service.koszul_model(truncated_polynomial(k), 8)
    assert koszul.certified_degree == 8
    assert koszul.qiso.verdict, koszul.qiso.failures
    assert koszul.algebra.generators[1].degree == 2 * k + 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_bigraded_koszul_models_of_truncated_polynomial_rings(model_service, k):
    koszul = model_service.bigraded_koszul_model(truncated_polynomial(k, bigraded=True), 8)
    assert koszul.certified_degree == 8
    assert koszul.qiso.verdict, koszul.qiso.failures
    assert koszul.qiso.max_weight is None
    assert koszul.algebra.generators[1].bidegree == (k, k)


def test_bigraded_koszul_model_satisfies_ddbar_on_every_window(
    model_service, algebra_service, cohomology_service
):
    koszul = model_service.bigraded_koszul_model(truncated_polynomial(1, bigraded=True), 8)
    for window in range(koszul.algebra.truncation - 1):
        bicomplex = algebra_service.underlying_bicomplex(koszul.algebra, window).bicomplex
        assert cohomology_service.ddbar_property(bicomplex).verdict, window


def test_flag_relations_are_regular(model_service, flag):
    report = model_service.is_regular_sequence(flag, 8)
    assert report.verdict
    assert report.degrees == [2, 4, 6]
    assert report.quotient_series[:7] == [1, 0, 2, 0, 2, 0, 1]
    assert report.quotient_series == report.product_series


def test_koszul_model_of_the_flag(model_service, flag):
    koszul = model_service.koszul_model(flag, 6)
    assert koszul.qiso.verdict
    assert [g.degree for g in koszul.algebra.generators[3:]] == [1, 3, 5]


def test_shared_factor_is_not_regular(model_service):
    report = model_service.is_regular_sequence(polynomial(["x1*x2", "x1*x3"]), 8)
    assert not report.verdict
    assert report.mismatch_degree == 6
    with pytest.raises(PreconditionError):
        model_service.koszul_model(polynomial(["x1*x2", "x1*x3"]), 8)


def test_empty_sequence_is_regular(model_service):
    assert model_service.is_regular_sequence(polynomial([]), 8).verdict


def test_bigraded_koszul_model_needs_diagonal_generators(model_service, sphere):
    with pytest.raises(PreconditionError):
        model_service.bigraded_koszul_model(sphere, 4)
    off_diagonal = free_algebra([Generator("u", (1, 0))], {}, bigraded=True, truncation=6)
    with pytest.raises(PreconditionError):
        model_service.weighted_copy(off_diagonal)


def test_homotopy_bicomplex_of_a_real_algebra(model_service):
    algebra = free_algebra(
        [
            Generator("x", (1, 1), "x"),
            Generator("u", (1, 0), "ub"),
            Generator("ub", (0, 1), "u"),
        ],
        {"u": (None, "x"), "ub": ("x", None)},
        bigraded=True,
        truncation=6,
        real_structure=True,
    )
    data = model_service.homotopy_bicomplex(algebra)
    assert data.dims == {(0, 1): 1, (1, 0): 1, (1, 1): 1}
    assert data.linear["u"] == {"del": "0", "delbar": "x"}
    assert data.flavored[Flavor.DR].dims == {1: 1}


def test_massey_product_in_the_heisenberg_algebra(model_service, heisenberg):
    x, y = heisenberg.generator("x"), heisenberg.generator("y")
    product = model_service.triple_massey(heisenberg, x, x, y)
    assert product.degree == 2
    assert not product.vanishes
    assert product.representative == heisenberg.parse("x*z")


def test_massey_product_needs_closed_inputs(model_service, heisenberg):
    x, y, z = (heisenberg.generator(n) for n in ("x", "y", "z"))
    with pytest.raises(PreconditionError):
        model_service.triple_massey(heisenberg, z, x, y)


def test_redundant_relation_leaves_the_quotient_unchanged(model_service):
    single = model_service.is_regular_sequence(polynomial(["x1*x2"]), 8)
    redundant = model_service.is_regular_sequence(polynomial(["x1*x2", "x1^2*x2"]), 8)
    assert redundant.quotient_series == single.quotient_series
    assert redundant.degrees == [4, 6]
    assert not redundant.verdict
