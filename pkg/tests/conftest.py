"""
Shared pytest fixtures
"""

import random
from pathlib import Path

import pytest

from ddbar.core.config import settings
from ddbar.models.bicomplex import Bicomplex
from ddbar.models.linalg import SparseMatrix
from ddbar.models.scalars import Scalar
from ddbar.services.algebra_service import AlgebraService
from ddbar.services.cohomology_service import CohomologyService
from ddbar.services.model_service import ModelService
from ddbar.services.parser_service import ParserService
from ddbar.services.replication_service import ReplicationService
from ddbar.services.sampling_service import SamplingService
from ddbar.services.toric_service import ToricService

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def one_by_one(value: int = 1) -> SparseMatrix:
    return SparseMatrix(1, 1, {0: {0: Scalar(value)}})


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def rng() -> random.Random:
    return random.Random(settings.RANDOM_SEED)


@pytest.fixture
def sampler() -> SamplingService:
    return SamplingService(seed=settings.RANDOM_SEED)


@pytest.fixture
def cohomology_service() -> CohomologyService:
    return CohomologyService()


@pytest.fixture
def algebra_service() -> AlgebraService:
    return AlgebraService()


@pytest.fixture
def model_service() -> ModelService:
    return ModelService()


@pytest.fixture
def toric_service() -> ToricService:
    return ToricService()


@pytest.fixture
def parser() -> ParserService:
    return ParserService()


@pytest.fixture(scope="session")
def replication_service() -> ReplicationService:
    return ReplicationService()


@pytest.fixture(scope="session")
def lambda_w():
    return ReplicationService().build_W()


@pytest.fixture
def dot() -> Bicomplex:
    return Bicomplex({(1, 1): 1}, name="dot")


@pytest.fixture
def square() -> Bicomplex:
    """a, ∂a, ∂̄a, ∂∂̄a at (0,0), (1,0), (0,1), (1,1)"""
    return Bicomplex(
        {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
        {(0, 0): one_by_one(), (0, 1): one_by_one()},
        {(0, 0): one_by_one(), (1, 0): one_by_one(-1)},
        name="square",
    )


@pytest.fixture
def zigzag() -> Bicomplex:
    return Bicomplex({(0, 0): 1, (1, 0): 1}, {(0, 0): one_by_one()}, name="zigzag")
