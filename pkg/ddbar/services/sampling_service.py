"""
Randomized bicomplexes with known cohomology: direct sums of dots, squares and
two-term zigzags under bidegree-preserving changes of basis
"""

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ddbar.core.config import settings
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.bicomplex import Bicomplex, Bidegree, Chain, Flavor
from ddbar.models.linalg import SparseMatrix, Vector
from ddbar.models.scalars import Scalar

DOT, SQUARE, ZIGZAG_DEL, ZIGZAG_DELBAR = "dot", "square", "zigzag_del", "zigzag_delbar"
SHAPES = (DOT, SQUARE, ZIGZAG_DEL, ZIGZAG_DELBAR)

# Cohomology contributed by each indecomposable, as offsets from its corner (p,q)
_CONTRIBUTIONS: Dict[str, Dict[Flavor, List[Bidegree]]] = {
    DOT: {f: [(0, 0)] for f in Flavor},
    SQUARE: {f: [] for f in Flavor},
    ZIGZAG_DEL: {
        Flavor.DR: [],
        Flavor.DEL: [],
        Flavor.DELBAR: [(0, 0), (1, 0)],
        Flavor.BC: [(1, 0)],
        Flavor.A: [(0, 0)],
    },
    ZIGZAG_DELBAR: {
        Flavor.DR: [],
        Flavor.DEL: [(0, 0), (0, 1)],
        Flavor.DELBAR: [],
        Flavor.BC: [(0, 1)],
        Flavor.A: [(0, 0)],
    },
}


@dataclass
class Piece:
    shape: str
    corner: Bidegree


@dataclass
class SampledBicomplex:
    """A random bicomplex together with its decomposition and expected dimensions"""

    bicomplex: Bicomplex
    pieces: List[Piece]
    expected: Dict[Flavor, Dict[object, int]] = field(default_factory=dict)

    @property
    def expected_ddbar(self) -> bool:
        return all(p.shape in (DOT, SQUARE) for p in self.pieces)


class SamplingService(LoggerMixin):
    """Service generating bicomplexes with known ground truth"""

    def __init__(self, seed: Optional[int] = None):
        self.rng = random.Random(settings.RANDOM_SEED if seed is None else seed)

    # Indecomposables

    def piece(self, shape: str, corner: Bidegree) -> Bicomplex:
        p, q = corner
        one = SparseMatrix(1, 1, {0: {0: Scalar(1)}})
        minus = SparseMatrix(1, 1, {0: {0: Scalar(-1)}})
        if shape == DOT:
            return Bicomplex({corner: 1})
        if shape == SQUARE:
            # a, ∂a, ∂̄a, ∂∂̄a with ∂̄∂a = -∂∂̄a
            return Bicomplex(
                {corner: 1, (p + 1, q): 1, (p, q + 1): 1, (p + 1, q + 1): 1},
                {corner: one, (p, q + 1): one},
                {corner: one, (p + 1, q): minus},
            )
        if shape == ZIGZAG_DEL:
            return Bicomplex({corner: 1, (p + 1, q): 1}, {corner: one})
        if shape == ZIGZAG_DELBAR:
            return Bicomplex({corner: 1, (p, q + 1): 1}, None, {corner: one})
        raise ValueError(f"unknown shape {shape}")

    def direct_sum(self, parts: Sequence[Bicomplex]) -> Bicomplex:
        dims: Dict[Bidegree, int] = {}
        offsets: List[Dict[Bidegree, int]] = []
        for part in parts:
            offsets.append({bd: dims.get(bd, 0) for bd in part.dims})
            for bd, n in part.dims.items():
                dims[bd] = dims.get(bd, 0) + n

        def assemble(kind: str, shift: Tuple[int, int]) -> Dict[Bidegree, SparseMatrix]:
            maps: Dict[Bidegree, SparseMatrix] = {}
            for part, offset in zip(parts, offsets):
                for bd, block in getattr(part, kind).items():
                    target = (bd[0] + shift[0], bd[1] + shift[1])
                    matrix = maps.setdefault(bd, SparseMatrix(dims.get(target, 0), dims[bd]))
                    for i, j, c in block.entries():
                        matrix.columns.setdefault(offset[bd] + j, {})[offset[target] + i] = c
            return maps

        return Bicomplex(dims, assemble("del_maps", (1, 0)), assemble("delbar_maps", (0, 1)))

    # Basis changes

    def random_unimodular(self, n: int, steps: int = 6) -> Tuple[SparseMatrix, SparseMatrix]:
        """g and g⁻¹ as products of integral elementary matrices"""
        g, inverse = SparseMatrix.identity(n), SparseMatrix.identity(n)
        if n < 2:
            return g, inverse
        for _ in range(steps):
            i, j = self.rng.sample(range(n), 2)
            c = self.rng.choice((-2, -1, 1, 2))
            e = SparseMatrix.identity(n)
            e.columns[j][i] = Scalar(c)
            e_inverse = SparseMatrix.identity(n)
            e_inverse.columns[j][i] = Scalar(-c)
            g = e.compose(g)
            inverse = inverse.compose(e_inverse)
        return g, inverse

    def change_basis(self, bicomplex: Bicomplex) -> Tuple[Bicomplex, Dict[Bidegree, SparseMatrix]]:
        """Conjugate every block; returns the new bicomplex and the maps g per bidegree"""
        g: Dict[Bidegree, SparseMatrix] = {}
        inverse: Dict[Bidegree, SparseMatrix] = {}
        for bd, n in bicomplex.dims.items():
            g[bd], inverse[bd] = self.random_unimodular(n)

        def conjugate(maps: Dict[Bidegree, SparseMatrix], shift: Tuple[int, int]) -> Dict[Bidegree, SparseMatrix]:
            out = {}
            for bd, block in maps.items():
                target = (bd[0] + shift[0], bd[1] + shift[1])
                out[bd] = g[target].compose(block).compose(inverse[bd])
            return out

        sigma = None
        if bicomplex.sigma is not None:
            sigma = {
                bd: g[(bd[1], bd[0])].compose(block).compose(inverse[bd].conjugate())
                for bd, block in bicomplex.sigma.items()
            }
        changed = Bicomplex(
            bicomplex.dims,
            conjugate(bicomplex.del_maps, (1, 0)),
            conjugate(bicomplex.delbar_maps, (0, 1)),
            sigma,
            certified_degree=bicomplex.certified_degree,
            name=bicomplex.name,
        )
        return changed, g

    # Sampling

    def random_pieces(self, count: int, box: int = 3, shapes: Sequence[str] = SHAPES) -> List[Piece]:
        return [
            Piece(self.rng.choice(list(shapes)), (self.rng.randint(0, box), self.rng.randint(0, box)))
            for _ in range(count)
        ]

    def sample(self, pieces: Sequence[Piece]) -> SampledBicomplex:
        summed = self.direct_sum([self.piece(p.shape, p.corner) for p in pieces])
        top = summed.certified_degree
        changed, _ = self.change_basis(summed)
        return SampledBicomplex(changed, list(pieces), self.expected_dims(pieces, top))

    def random_bicomplex(self, count: Optional[int] = None, shapes: Sequence[str] = SHAPES) -> SampledBicomplex:
        count = count if count is not None else self.rng.randint(1, 6)
        return self.sample(self.random_pieces(count, shapes=shapes))

    def expected_dims(self, pieces: Sequence[Piece], top: int) -> Dict[Flavor, Dict[object, int]]:
        expected: Dict[Flavor, Dict[object, int]] = {f: {} for f in Flavor}
        for piece in pieces:
            p, q = piece.corner
            for flavor, offsets in _CONTRIBUTIONS[piece.shape].items():
                for dp, dq in offsets:
                    bd = (p + dp, q + dq)
                    if sum(bd) > top:
                        continue
                    key = sum(bd) if flavor is Flavor.DR else bd
                    expected[flavor][key] = expected[flavor].get(key, 0) + 1
        return expected

    # Random vectors

    def random_vector(self, n: int, density: float = 0.7) -> Vector:
        vector: Vector = {}
        for i in range(n):
            if self.rng.random() < density:
                c = self.rng.randint(-3, 3)
                if c:
                    vector[i] = Scalar(c)
        return vector

    def exact_ddbar_instance(self, bicomplex: Bicomplex) -> Optional[Tuple[Bidegree, Vector]]:
        """x = ∂∂̄y₀ for a random y₀, or None when no bidegree carries a nonzero ∂∂̄"""
        candidates = [bd for bd in bicomplex.dims if not bicomplex.ddbar_at(bd).is_zero()]
        if not candidates:
            return None
        bd = self.rng.choice(sorted(candidates))
        y0 = self.random_vector(bicomplex.dim(bd))
        x = bicomplex.ddbar_at(bd).apply(y0)
        return (bd[0] + 1, bd[1] + 1), x

    def exact_d_instance(self, bicomplex: Bicomplex) -> Optional[Tuple[Bidegree, Chain]]:
        """a = dβ₀ for a random pure β₀, or None when d vanishes on every bidegree"""
        candidates = [
            bd for bd in bicomplex.dims
            if not (bicomplex.del_at(bd).is_zero() and bicomplex.delbar_at(bd).is_zero())
        ]
        if not candidates:
            return None
        bd = self.rng.choice(sorted(candidates))
        beta0 = self.random_vector(bicomplex.dim(bd))
        return bd, bicomplex.apply_d({bd: beta0})
