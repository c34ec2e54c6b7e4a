import pytest

from ddbar.core.exceptions import AlgebraValidationError, TruncationOverflowError, WindowError
from ddbar.models.algebra import AlgebraMorphism, Generator, GradedAlgebra, free_algebra
from ddbar.models.bicomplex import Flavor
from ddbar.models.scalars import Scalar


def single(*generators, differentials=None, relations=(), truncation=8):
    return free_algebra(
        [Generator(name, (degree, 0)) for name, degree in generators],
        {name: (d, None) for name, d in (differentials or {}).items()},
        bigraded=False,
        truncation=truncation,
        relations=relations,
    )


@pytest.fixture
def real_algebra():
    """x fixed at (1,1); u and ub conjugate with ∂̄u = x = ∂ub"""
    return free_algebra(
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


def test_odd_generators_anticommute():
    algebra = free_algebra([Generator("u", (1, 0)), Generator("v", (0, 1))], {}, bigraded=True, truncation=4)
    u, v = algebra.generator("u"), algebra.generator("v")
    assert u * v == -(v * u)
    assert not u * u


def test_leibniz_rule_carries_the_koszul_sign():
    algebra = single(("a", 2), ("u", 1), ("w", 1), differentials={"w": "a"})
    a, u, w = (algebra.generator(n) for n in ("a", "u", "w"))
    assert algebra.differential(u * w) == -(u * a)
    assert algebra.differential(w * u) == a * u


def test_products_past_the_truncation_raise():
    algebra = single(("x", 2), truncation=4)
    x = algebra.generator("x")
    assert algebra.multiply(x, x) == algebra.parse("x^2")
    with pytest.raises(TruncationOverflowError):
        algebra.multiply(x * x, x)
    dropped = algebra.multiply(x * x, x, strict=False)
    assert dropped.overflow
    assert not dropped


def test_relations_reduce_to_normal_form():
    algebra = single(("x", 2), relations=["x^2"])
    assert not algebra.parse("x^2")
    assert not algebra.parse("x^3")
    assert algebra.basis((2, 0)) == [(1,)]


def test_valid_algebra_passes(algebra_service, real_algebra):
    verdict = algebra_service.validate(real_algebra)
    assert verdict.valid
    assert verdict.checked > 0


def test_d_squared_failure_names_the_generator(algebra_service):
    algebra = single(("a", 2), ("b", 3), ("c", 4), differentials={"b": "a^2", "c": "a*b"})
    verdict = algebra_service.validate(algebra)
    assert not verdict.valid
    assert verdict.witness == "c"
    with pytest.raises(AlgebraValidationError) as info:
        verdict.raise_for_failure()
    assert info.value.witness == "c"


def test_inhomogeneous_differential_is_rejected(algebra_service):
    algebra = single(("a", 2), ("b", 3), differentials={"b": "a"})
    verdict = algebra_service.validate(algebra)
    assert not verdict.valid
    assert verdict.witness == "b"


def test_unstable_ideal_is_rejected(algebra_service):
    algebra = single(("a", 2), ("b", 3), differentials={"b": "a^2"}, relations=["b"])
    verdict = algebra_service.validate(algebra)
    assert not verdict.valid
    assert verdict.witness == "relation 1"


def test_real_structure_must_intertwine_del_and_delbar(algebra_service):
    algebra = free_algebra(
        [
            Generator("x", (1, 1), "x"),
            Generator("u", (1, 0), "ub"),
            Generator("ub", (0, 1), "u"),
        ],
        {"u": (None, "x")},
        bigraded=True,
        truncation=6,
        real_structure=True,
    )
    verdict = algebra_service.validate(algebra)
    assert not verdict.valid
    assert verdict.witness == "u"


def test_reserved_and_duplicate_names_are_rejected():
    with pytest.raises(AlgebraValidationError):
        GradedAlgebra([Generator("lambda", (2, 0))], bigraded=False, truncation=4)
    with pytest.raises(AlgebraValidationError):
        GradedAlgebra([Generator("x", (2, 0)), Generator("x", (2, 0))], bigraded=False, truncation=4)


def test_partner_must_mirror_the_bidegree():
    with pytest.raises(AlgebraValidationError):
        GradedAlgebra(
            [Generator("u", (1, 0), "ub"), Generator("ub", (1, 0), "u")],
            bigraded=True,
            truncation=4,
            real_structure=True,
        )


def test_conjugation_is_antilinear(real_algebra):
    u, ub = real_algebra.generator("u"), real_algebra.generator("ub")
    assert real_algebra.conjugate(u * Scalar.i()) == ub * (-Scalar.i())
    assert real_algebra.conjugate(real_algebra.conjugate(u * ub)) == u * ub


def test_window_of_a_single_class(algebra_service, cohomology_service):
    algebra = free_algebra([Generator("x", (1, 1))], {}, bigraded=True, truncation=6)
    window = algebra_service.underlying_bicomplex(algebra, 4)
    assert window.bicomplex.dims == {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1}
    assert window.bicomplex.certified_degree == 4
    bc = cohomology_service.cohomology(window.bicomplex, Flavor.BC)
    assert bc.dims == {(0, 0): 1, (1, 1): 1, (2, 2): 1}


def test_window_beyond_the_truncation_is_refused(algebra_service):
    algebra = free_algebra([Generator("x", (1, 1))], {}, bigraded=True, truncation=6)
    with pytest.raises(WindowError):
        algebra_service.underlying_bicomplex(algebra, 5)


def test_window_round_trips_elements(algebra_service, real_algebra):
    window = algebra_service.underlying_bicomplex(real_algebra, 3)
    element = real_algebra.parse("u*ub + 2*x")
    assert window.to_element(window.to_chain(element)) == element


def test_window_of_a_presented_algebra(algebra_service, cohomology_service):
    algebra = single(("x", 2), relations=["x^2"])
    window = algebra_service.underlying_bicomplex(algebra, 6)
    assert window.bicomplex.dims == {(0, 0): 1, (2, 0): 1}
    assert cohomology_service.cohomology(window.bicomplex, Flavor.DR).dims == {0: 1, 2: 1}


def test_totalize_uses_the_total_differential(algebra_service, real_algebra):
    total = algebra_service.totalize(real_algebra)
    assert not total.bigraded
    assert [g.bidegree for g in total.generators] == [(2, 0), (1, 0), (1, 0)]
    assert total.differential(total.generator("u")) == total.generator("x")


def test_real_points(algebra_service, real_algebra):
    real = algebra_service.real_points(real_algebra)
    assert [g.name for g in real.generators] == ["x", "u_re", "u_im"]
    assert real.differential(real.generator("u_re")) == real.generator("x") * 2
    assert not real.differential(real.generator("u_im"))


def test_morphism_checks(algebra_service, real_algebra):
    identity = AlgebraMorphism.identity(real_algebra)
    assert algebra_service.check_morphism(identity).valid
    assert algebra_service.check_morphism(identity.compose(identity)).valid

    collapse = AlgebraMorphism(
        real_algebra,
        real_algebra,
        {"x": real_algebra.generator("x"), "ub": real_algebra.generator("ub")},
    )
    verdict = algebra_service.check_morphism(collapse)
    assert not verdict.valid
    assert verdict.witness == "u"
