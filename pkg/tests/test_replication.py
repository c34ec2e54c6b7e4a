import pytest

from ddbar.models.scalars import Scalar, parse_scalar
from tests.conftest import FIXTURES


def test_cohomology_ring_betti_numbers(replication_service):
    h = replication_service.build_H()
    assert replication_service.betti_numbers(h) == [1, 0, 3, 0, 3, 0, 1]


def test_betti_numbers_do_not_depend_on_generator_order(replication_service):
    h = replication_service.build_H(order=[3, 2, 1, 0])
    assert replication_service.betti_numbers(h) == [1, 0, 3, 0, 3, 0, 1]


def test_bigraded_ring_sits_on_the_diagonal(replication_service):
    h = replication_service.build_H(bigraded=True)
    assert h.real_structure
    assert replication_service.betti_numbers(h) == [1, 0, 3, 0, 3, 0, 1]


@pytest.mark.parametrize("lam", [Scalar.lam(), Scalar(0), Scalar(7)])
def test_psi_is_a_dga_map(replication_service, lam):
    report = replication_service.build_psi(lam)
    assert report.valid, report.message


def test_extension_class_entries(replication_service):
    report = replication_service.mhs_extension(Scalar.lam())
    assert report.cokernel_dim == 1
    assert report.entries["p3"] == Scalar.lam()
    assert not report.trivial


@pytest.mark.parametrize("lam", [Scalar(0), Scalar.rational(-3, 2)])
def test_rational_parameters_give_a_trivial_extension(replication_service, lam):
    assert replication_service.mhs_extension(lam).trivial


def test_massey_products_vanish_on_the_minimal_model(replication_service):
    products = replication_service.massey_products()
    assert sorted(products) == ["<x,alpha,alpha>", "<x,alpha,y>", "<y,alpha,alpha>"]
    assert all(product.vanishes for product in products.values())
    product = products["<x,alpha,alpha>"]
    assert product.degree == 5
    assert product.representative == product.representative.algebra.parse("alpha*b - x*a")


def test_massey_products_survive_below_degree_four(replication_service):
    products = replication_service.massey_products(top_degree=3)
    assert not any(product.vanishes for product in products.values())


@pytest.mark.slow
def test_minimal_model_of_H(replication_service):
    report = replication_service.build_V()
    assert report.verdict
    assert report.dimension_table == {2: 3, 3: 4, 4: 5, 5: 11}
    assert all(check.closed for check in report.kernel_checks)


@pytest.mark.slow
def test_lambda_w_matches_the_shipped_table(replication_service, lambda_w, parser):
    shipped = parser.load(FIXTURES / "algebras" / "lambda_w.json")
    assert [g.name for g in shipped.generators] == [g.name for g in lambda_w.generators]
    report = replication_service.check_W(lambda_w)
    assert report.valid
    assert report.qiso.verdict
    assert report.window == 4


@pytest.mark.slow
def test_psi_tilde_is_a_dga_map(replication_service, lambda_w):
    assert replication_service.build_psi_tilde(Scalar.lam(), lambda_w).valid


@pytest.mark.slow
def test_irrational_parameter_is_obstructed(replication_service, lambda_w):
    report = replication_service.obstruction(Scalar.lam(), lambda_w)
    assert report.coefficients["p3"] == Scalar.lam()
    assert report.kernel_is_r
    assert report.same_cohomology_map
    assert report.obstructed


@pytest.mark.slow
@pytest.mark.parametrize("lam", [Scalar(0), Scalar(7)])
def test_rational_parameters_are_unobstructed(replication_service, lambda_w, lam):
    report = replication_service.obstruction(lam, lambda_w)
    assert report.coefficients["p3"] == lam
    assert not report.obstructed


@pytest.mark.slow
def test_flag_certificate(replication_service):
    certificate = replication_service.flag_certificate()
    assert certificate.betti == [1, 0, 2, 0, 2, 0, 1]
    assert certificate.verdict, certificate.failures
    assert certificate.bigraded_qiso.max_weight is not None


@pytest.mark.slow
@pytest.mark.parametrize("text", ["0", "1", "7", "-3/2", "lambda", "2*lambda + 1"])
def test_extension_class_agrees_with_the_obstruction(replication_service, lambda_w, text):
    lam = parse_scalar(text)
    obstructed = replication_service.obstruction(lam, lambda_w).obstructed
    assert obstructed == (not replication_service.mhs_extension(lam).trivial)
    assert obstructed == ("lambda" in text)
