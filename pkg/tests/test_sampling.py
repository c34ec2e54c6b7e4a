import pytest

from ddbar.models.bicomplex import Flavor
from ddbar.services.sampling_service import DOT, SQUARE, ZIGZAG_DEL, ZIGZAG_DELBAR, Piece, SamplingService


def test_pieces_are_valid_bicomplexes(sampler):
    for shape in (DOT, SQUARE, ZIGZAG_DEL, ZIGZAG_DELBAR):
        sampler.piece(shape, (1, 2)).validate()


def test_square_piece_layout(sampler):
    square = sampler.piece(SQUARE, (1, 2))
    assert square.dims == {(1, 2): 1, (2, 2): 1, (1, 3): 1, (2, 3): 1}
    assert not square.ddbar_at((1, 2)).is_zero()


def test_unknown_shape(sampler):
    with pytest.raises(ValueError):
        sampler.piece("triangle", (0, 0))


def test_direct_sum_adds_dimensions(sampler):
    summed = sampler.direct_sum([sampler.piece(DOT, (0, 0)), sampler.piece(SQUARE, (0, 0))])
    assert summed.dims == {(0, 0): 2, (1, 0): 1, (0, 1): 1, (1, 1): 1}
    summed.validate()


def test_change_of_basis_keeps_cohomology(cohomology_service, sampler):
    summed = sampler.direct_sum(
        [sampler.piece(ZIGZAG_DEL, (0, 0)), sampler.piece(SQUARE, (0, 0)), sampler.piece(DOT, (1, 0))]
    )
    changed, g = sampler.change_basis(summed)
    assert set(g) == set(summed.dims)
    before = cohomology_service.all_flavors(summed)
    after = cohomology_service.all_flavors(changed)
    for flavor in Flavor:
        assert before[flavor].dims == after[flavor].dims, flavor


def test_expected_dims_of_a_zigzag(sampler):
    expected = sampler.expected_dims([Piece(ZIGZAG_DEL, (0, 0))], top=1)
    assert expected[Flavor.BC] == {(1, 0): 1}
    assert expected[Flavor.A] == {(0, 0): 1}
    assert expected[Flavor.DELBAR] == {(0, 0): 1, (1, 0): 1}
    assert expected[Flavor.DR] == {}


def test_expected_dims_respect_the_certified_degree(sampler):
    expected = sampler.expected_dims([Piece(DOT, (2, 2)), Piece(DOT, (0, 1))], top=3)
    assert expected[Flavor.DR] == {1: 1}


def test_sampled_decomposition_flags_the_ddbar_property(sampler):
    assert sampler.sample([Piece(DOT, (0, 0)), Piece(SQUARE, (1, 1))]).expected_ddbar
    assert not sampler.sample([Piece(ZIGZAG_DELBAR, (0, 0))]).expected_ddbar


def test_seed_reproduces_the_sample():
    first = SamplingService(seed=7).random_pieces(5)
    second = SamplingService(seed=7).random_pieces(5)
    assert first == second


def test_exact_instances_need_nonzero_maps(sampler):
    dot = sampler.piece(DOT, (0, 0))
    assert sampler.exact_ddbar_instance(dot) is None
    assert sampler.exact_d_instance(dot) is None
