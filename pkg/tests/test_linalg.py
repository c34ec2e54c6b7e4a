from ddbar.models.linalg import (
    QuotientSpace,
    SparseMatrix,
    independent_columns,
    kernel,
    left_kernel,
    rank,
    solve,
)
from ddbar.models.scalars import Scalar, parse_scalar


def matrix(rows):
    """Dense row lists of scalar texts to a SparseMatrix"""
    entries = [
        (i, j, parse_scalar(text)) for i, row in enumerate(rows) for j, text in enumerate(row) if text != "0"
    ]
    return SparseMatrix.from_entries(len(rows), len(rows[0]), entries)


def test_entries_are_sorted_by_column_then_row():
    m = SparseMatrix.from_entries(2, 2, [(1, 1, Scalar(4)), (0, 1, Scalar(3)), (1, 0, Scalar(2))])
    assert [(i, j) for i, j, _ in m.entries()] == [(1, 0), (0, 1), (1, 1)]


def test_compose_and_identity():
    m = matrix([["1", "i"], ["0", "lambda"]])
    assert m.compose(SparseMatrix.identity(2)) == m
    assert SparseMatrix.identity(2).compose(m) == m
    square = m.compose(m)
    assert square.entry(0, 1) == parse_scalar("i + i*lambda")


def test_rank_and_kernel():
    m = matrix([["1", "2", "3"], ["2", "4", "6"]])
    assert rank([m.column(j) for j in range(3)]) == 1
    basis = kernel(m)
    assert len(basis) == 2
    for v in basis:
        assert not m.apply(v)


def test_independent_columns_pick_the_first_basis():
    columns = [{0: Scalar(1)}, {0: Scalar(2)}, {1: Scalar(1)}]
    assert independent_columns(columns) == [0, 2]


def test_solve_and_certificate():
    m = matrix([["1", "0"], ["0", "0"]])
    found, missing = solve(m, [{0: Scalar(5)}, {1: Scalar(1)}])
    assert m.apply(found) == {0: Scalar(5)}
    assert missing is None
    functionals = left_kernel(m)
    assert any(f.get(1) for f in functionals)


def test_lambda_entries():
    m = matrix([["lambda", "1"], ["1", "1/lambda"]])
    assert rank([m.column(j) for j in range(2)]) == 1


def test_quotient_space():
    quotient = QuotientSpace([{0: Scalar(1)}, {1: Scalar(1)}], [{0: Scalar(1), 1: Scalar(1)}])
    assert quotient.dim == 1
    assert quotient.is_trivial({0: Scalar(2), 1: Scalar(2)})
    assert quotient.classify([{2: Scalar(1)}]) == [None]
