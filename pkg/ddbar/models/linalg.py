"""
Sparse exact linear algebra over Scalar, built on sympy's sparse RREF
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices.sdm import sdm_irref, sdm_nullspace_from_rref

from ddbar.models.scalars import Scalar

Vector = Dict[int, Scalar]


def vec_add(u: Vector, v: Vector) -> Vector:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k)
        s = c if s is None else s + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(v: Vector, c: Scalar) -> Vector:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_sub(u: Vector, v: Vector) -> Vector:
    return vec_add(u, vec_scale(v, Scalar(-1)))


def vec_combination(vectors: Sequence[Vector], coefficients: Vector) -> Vector:
    out: Vector = {}
    for k, c in coefficients.items():
        out = vec_add(out, vec_scale(vectors[k], c))
    return out


def vec_conjugate(v: Vector) -> Vector:
    return {k: c.conjugate() for k, c in v.items()}


def vec_dot(u: Vector, v: Vector) -> Scalar:
    total = Scalar(0)
    for k, c in u.items():
        x = v.get(k)
        if x is not None:
            total = total + c * x
    return total


class SparseMatrix:
    """Column-sparse matrix; ``columns[j]`` is the image of basis vector j"""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows: int, ncols: int, columns: Optional[Dict[int, Vector]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.columns: Dict[int, Vector] = {}
        for j, col in (columns or {}).items():
            col = {i: c for i, c in col.items() if c}
            if col:
                self.columns[j] = col

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {j: {j: Scalar(1)} for j in range(n)})

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Vector]) -> "SparseMatrix":
        return cls(nrows, len(columns), dict(enumerate(columns)))

    @classmethod
    def from_entries(
        cls, nrows: int, ncols: int, entries: Iterable[Tuple[int, int, Scalar]]
    ) -> "SparseMatrix":
        columns: Dict[int, Vector] = {}
        for i, j, c in entries:
            columns.setdefault(j, {})
            columns[j] = vec_add(columns[j], {i: c})
        return cls(nrows, ncols, columns)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> Vector:
        return self.columns.get(j, {})

    def entry(self, i: int, j: int) -> Scalar:
        return self.columns.get(j, {}).get(i, Scalar(0))

    def entries(self) -> List[Tuple[int, int, Scalar]]:
        return [
            (i, j, c)
            for j in sorted(self.columns)
            for i, c in sorted(self.columns[j].items())
        ]

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for j, c in v.items():
            col = self.columns.get(j)
            if col:
                out = vec_add(out, vec_scale(col, c))
        return out

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """self after other"""
        return SparseMatrix(
            self.nrows,
            other.ncols,
            {j: self.apply(col) for j, col in other.columns.items()},
        )

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        columns = dict(self.columns)
        for j, col in other.columns.items():
            columns[j] = vec_add(columns.get(j, {}), col)
        return SparseMatrix(self.nrows, self.ncols, columns)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(Scalar(-1))

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c: Scalar) -> "SparseMatrix":
        return SparseMatrix(
            self.nrows, self.ncols, {j: vec_scale(col, c) for j, col in self.columns.items()}
        )

    def conjugate(self) -> "SparseMatrix":
        return SparseMatrix(
            self.nrows, self.ncols, {j: vec_conjugate(col) for j, col in self.columns.items()}
        )

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.rows())

    def rows(self) -> Dict[int, Vector]:
        rows: Dict[int, Vector] = {}
        for j, col in self.columns.items():
            for i, c in col.items():
                rows.setdefault(i, {})[j] = c
        return rows

    def is_zero(self) -> bool:
        return not self.columns

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    def to_lists(self) -> List[List[str]]:
        return [
            [self.entry(i, j).to_text() for j in range(self.ncols)] for i in range(self.nrows)
        ]

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.columns.values()))})"


def rref(rows: Dict[int, Vector]) -> Tuple[Dict[int, Vector], List[int], Dict[int, set]]:
    """Reduced row echelon form; pivots are the first independent columns"""
    cleaned = {}
    for i, row in rows.items():
        row = {j: c for j, c in row.items() if c}
        if row:
            cleaned[i] = row
    if not cleaned:
        return {}, [], {}
    return sdm_irref(cleaned)


def rank(vectors: Sequence[Vector]) -> int:
    return len(independent_columns(vectors))


def independent_columns(vectors: Sequence[Vector]) -> List[int]:
    """Indices of the lexicographically first basis among ``vectors``"""
    matrix = SparseMatrix(0, len(vectors), dict(enumerate(vectors)))
    _, pivots, _ = rref(matrix.rows())
    return list(pivots)


def kernel(matrix: SparseMatrix) -> List[Vector]:
    reduced, pivots, nonzero = rref(matrix.rows())
    basis, _ = sdm_nullspace_from_rref(reduced, Scalar(1), matrix.ncols, pivots, nonzero)
    return basis


def left_kernel(matrix: SparseMatrix) -> List[Vector]:
    """Functionals vanishing on the column span"""
    return kernel(matrix.transpose())


def span_coordinates(basis: Sequence[Vector], targets: Sequence[Vector]) -> List[Optional[Vector]]:
    """Coordinates of each target in an independent ``basis``, or None outside the span"""
    m = len(basis)
    stacked = list(basis) + list(targets)
    matrix = SparseMatrix(0, len(stacked), dict(enumerate(stacked)))
    reduced, pivots, _ = rref(matrix.rows())
    if list(pivots[:m]) != list(range(m)):
        raise ValueError("span_coordinates needs an independent basis")
    out: List[Optional[Vector]] = []
    pivot_set = set(pivots)
    for k in range(len(targets)):
        col = m + k
        if col in pivot_set or any(col in reduced[r] for r in range(m, len(pivots))):
            out.append(None)
            continue
        out.append({r: reduced[r][col] for r in range(m) if col in reduced[r]})
    return out


def solve(matrix: SparseMatrix, targets: Sequence[Vector]) -> List[Optional[Vector]]:
    """Some y with matrix·y = target for each target, or None when unsolvable"""
    cols = [matrix.column(j) for j in range(matrix.ncols)]
    chosen = independent_columns(cols)
    coords = span_coordinates([cols[j] for j in chosen], targets)
    return [
        None if c is None else {chosen[k]: v for k, v in c.items()} for c in coords
    ]


def complement_basis(subspace: Sequence[Vector], vectors: Sequence[Vector]) -> List[Vector]:
    """Vectors from ``vectors`` completing an independent ``subspace`` basis"""
    m = len(subspace)
    stacked = list(subspace) + list(vectors)
    return [stacked[j] for j in independent_columns(stacked) if j >= m]


class QuotientSpace:
    """span(numerator) / span(denominator), with chosen representatives"""

    def __init__(self, numerator: Sequence[Vector], denominator: Sequence[Vector]):
        self.denominator_basis = [denominator[j] for j in independent_columns(denominator)]
        self.representatives = complement_basis(self.denominator_basis, numerator)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def classify(self, vectors: Sequence[Vector]) -> List[Optional[Vector]]:
        """Class coordinates, or None for vectors outside the numerator"""
        m = len(self.denominator_basis)
        coords = span_coordinates(self.denominator_basis + self.representatives, vectors)
        return [
            None if c is None else {k - m: v for k, v in c.items() if k >= m} for c in coords
        ]

    def is_trivial(self, vector: Vector) -> bool:
        coords = self.classify([vector])[0]
        return coords is not None and not coords
