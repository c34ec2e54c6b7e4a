import pytest

from ddbar.core.config import settings
from ddbar.core.exceptions import InvalidBicomplexError, PreconditionError
from ddbar.models.bicomplex import Bicomplex, BicomplexMap, Flavor
from ddbar.models.linalg import SparseMatrix
from ddbar.models.scalars import Scalar
from tests.conftest import one_by_one


def test_dot_has_one_class_in_every_flavor(cohomology_service, dot):
    spaces = cohomology_service.all_flavors(dot)
    for flavor in Flavor:
        key = 2 if flavor is Flavor.DR else (1, 1)
        assert spaces[flavor].dims == {key: 1}


def test_square_is_acyclic(cohomology_service, square):
    for flavor, space in cohomology_service.all_flavors(square).items():
        assert space.dims == {}, flavor


def test_zigzag_cohomology(cohomology_service, zigzag):
    spaces = cohomology_service.all_flavors(zigzag)
    assert spaces[Flavor.BC].dims == {(1, 0): 1}
    assert spaces[Flavor.A].dims == {(0, 0): 1}
    assert spaces[Flavor.DR].dims == {}
    assert spaces[Flavor.DEL].dims == {}
    assert spaces[Flavor.DELBAR].dims == {(0, 0): 1, (1, 0): 1}


def test_dot_ddbar_table(cohomology_service, dot):
    verdict = cohomology_service.ddbar_property(dot)
    assert verdict.verdict
    assert verdict.counts_hold
    assert verdict.table == [(2, 1, 1, 1)]


def test_zigzag_fails_ddbar_with_witness(cohomology_service, zigzag):
    verdict = cohomology_service.ddbar_property(zigzag)
    assert not verdict.verdict
    assert not verdict.counts_hold
    assert verdict.witness_degree == 1
    assert set(verdict.witness) == {(1, 0)}
    assert zigzag.apply_d(verdict.witness) == {}


def test_comparison_map_bc_to_de_rham(cohomology_service, dot):
    bc = cohomology_service.cohomology(dot, Flavor.BC)
    dr = cohomology_service.cohomology(dot, Flavor.DR)
    matrix = cohomology_service.comparison_map(dot, bc, dr)[(1, 1)]
    assert matrix.shape == (1, 1)
    assert matrix.entry(0, 0) == Scalar(1)


def test_identity_induces_the_identity(cohomology_service, zigzag):
    induced = cohomology_service.induced_map(BicomplexMap.identity(zigzag), Flavor.BC)
    assert induced[(1, 0)].shape == (1, 1)
    assert induced[(1, 0)].entry(0, 0) == Scalar(1)


def test_zero_map_induces_zero(cohomology_service, zigzag):
    induced = cohomology_service.induced_map(BicomplexMap.zero(zigzag, zigzag), Flavor.A)
    assert induced[(0, 0)].entry(0, 0) == Scalar(0)

def test_anticommutation_is_validated(cohomology_service):
    broken = Bicomplex(
        {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
        {(0, 0): one_by_one(), (0, 1): one_by_one()},
        {(0, 0): one_by_one(), (1, 0): one_by_one()},
    )
    with pytest.raises(InvalidBicomplexError) as info:
        cohomology_service.cohomology(broken, Flavor.BC)
    assert info.value.detail["identity"] == "del delbar + delbar del"


def test_block_shape_is_validated():
    broken = Bicomplex({(0, 0): 1, (1, 0): 1}, {(0, 0): SparseMatrix(2, 1, {0: {1: Scalar(1)}})})
    with pytest.raises(InvalidBicomplexError):
        broken.validate()


def test_real_structure_must_be_an_involution():
    Bicomplex({(1, 1): 1}, sigma={(1, 1): one_by_one()}).validate()
    with pytest.raises(InvalidBicomplexError):
        Bicomplex({(1, 1): 1}, sigma={(1, 1): one_by_one(2)}).validate()


def test_identity_is_a_pluripotential_quasi_isomorphism(cohomology_service, zigzag):
    verdict = cohomology_service.is_pluripotential_qiso(BicomplexMap.identity(zigzag))
    assert verdict.verdict
    assert verdict.method == "full"


def test_zero_map_on_zigzag_is_not_a_pluripotential_quasi_isomorphism(cohomology_service, zigzag):
    verdict = cohomology_service.is_pluripotential_qiso(BicomplexMap.zero(zigzag, zigzag))
    assert not verdict.verdict
    assert {f["flavor"] for f in verdict.failures} == {"BC", "A"}
    # de Rham cannot see the difference
    assert cohomology_service.is_quasi_isomorphism(BicomplexMap.zero(zigzag, zigzag)).verdict


def test_collapsing_a_square_is_a_pluripotential_quasi_isomorphism(cohomology_service, square):
    f = BicomplexMap.zero(square, Bicomplex({}))
    assert cohomology_service.is_pluripotential_qiso(f).verdict


def test_dolbeault_fast_path(cohomology_service, dot):
    verdict = cohomology_service.is_pluripotential_qiso(BicomplexMap.identity(dot), method="auto")
    assert verdict.verdict
    assert verdict.method == "dolbeault"


def test_map_must_commute_with_del(cohomology_service, zigzag):
    f = BicomplexMap(zigzag, zigzag, {(0, 0): one_by_one()})
    with pytest.raises(InvalidBicomplexError):
        cohomology_service.is_pluripotential_qiso(f)


def test_solve_ddbar_on_square(cohomology_service, square):
    result = cohomology_service.solve_ddbar(square, (1, 1), {0: Scalar(1)})
    assert result.solved
    assert result.solution == {0: Scalar(1)}


def test_solve_ddbar_returns_separating_functional(cohomology_service, dot):
    result = cohomology_service.solve_ddbar(dot, (1, 1), {0: Scalar(3)})
    assert not result.solved
    assert result.certificate == {0: Scalar(1)}


def test_solve_ddbar_rejects_vectors_outside_the_bidegree(cohomology_service, dot):
    with pytest.raises(PreconditionError):
        cohomology_service.solve_ddbar(dot, (1, 1), {4: Scalar(1)})


def test_solve_d_bidegree_on_square(cohomology_service, square):
    a = square.apply_d({(0, 0): {0: Scalar(1)}})
    result = cohomology_service.solve_d_bidegree(square, (0, 0), a)
    assert result.route == "lemma"
    assert result.beta == {0: Scalar(1)}


def test_solve_d_bidegree_needs_ddbar_when_strict(cohomology_service, zigzag):
    a = {(1, 0): {0: Scalar(1)}}
    with pytest.raises(PreconditionError):
        cohomology_service.solve_d_bidegree(zigzag, (0, 0), a)
    result = cohomology_service.solve_d_bidegree(zigzag, (0, 0), a, strict=False)
    assert result.route == "direct"
    assert result.beta == {0: Scalar(1)}


def test_solve_d_bidegree_rejects_stray_components(cohomology_service, square):
    with pytest.raises(PreconditionError):
        cohomology_service.solve_d_bidegree(square, (0, 0), {(1, 1): {0: Scalar(1)}})


def _euler(dims):
    return sum((-1) ** (key if isinstance(key, int) else sum(key)) * n for key, n in dims.items())


def _check_sample(cohomology_service, sampled):
    b = sampled.bicomplex
    spaces = cohomology_service.all_flavors(b)
    for flavor in Flavor:
        observed = spaces[flavor].dims
        assert observed == sampled.expected[flavor], (flavor, sampled.pieces)
    assert cohomology_service.ddbar_property(b).verdict == sampled.expected_ddbar

    chi = _euler(b.dims)
    for flavor in (Flavor.DR, Flavor.DEL, Flavor.DELBAR):
        assert _euler(spaces[flavor].dims) == chi, (flavor, sampled.pieces)

    def natural(source, target):
        return cohomology_service.comparison_map(b, spaces[source], spaces[target])

    direct = natural(Flavor.BC, Flavor.A)
    for middle in (Flavor.DEL, Flavor.DELBAR):
        first, second = natural(Flavor.BC, middle), natural(middle, Flavor.A)
        for bd, matrix in direct.items():
            assert second[bd].compose(first[bd]) == matrix, (middle, bd)

    bc_to_dr, dr_to_a = natural(Flavor.BC, Flavor.DR), natural(Flavor.DR, Flavor.A)
    for bd, matrix in direct.items():
        k = sum(bd)
        path = dr_to_a[k].compose(bc_to_dr[bd])
        offset = sum(spaces[Flavor.A].dim(s) for s in sorted(spaces[Flavor.A].quotients) if sum(s) == k and s < bd)
        columns = {}
        for i, j, c in matrix.entries():
            columns.setdefault(j, {})[offset + i] = c
        assert path == SparseMatrix(path.nrows, matrix.ncols, columns), bd


def test_random_sums_match_their_decomposition(cohomology_service, sampler):
    for _ in range(20):
        _check_sample(cohomology_service, sampler.random_bicomplex())


@pytest.mark.slow
def test_random_sums_match_their_decomposition_full(cohomology_service, sampler):
    for _ in range(settings.RANDOM_TRIALS):
        _check_sample(cohomology_service, sampler.random_bicomplex())


def test_random_exact_instances_are_solved(cohomology_service, sampler):
    for _ in range(20):
        sampled = sampler.random_bicomplex(shapes=("dot", "square"))
        b = sampled.bicomplex
        instance = sampler.exact_ddbar_instance(b)
        if instance is not None:
            bd, x = instance
            result = cohomology_service.solve_ddbar(b, bd, x)
            assert result.solved
            assert b.ddbar_at((bd[0] - 1, bd[1] - 1)).apply(result.solution) == x
        d_instance = sampler.exact_d_instance(b)
        if d_instance is not None:
            bd, a = d_instance
            result = cohomology_service.solve_d_bidegree(b, bd, a)
            assert b.apply_d({bd: result.beta}) == a
