"""
Finite-type bicomplexes, maps between them, and cohomology containers
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from ddbar.core.exceptions import InvalidBicomplexError
from ddbar.models.linalg import SparseMatrix, Vector, vec_add

Bidegree = Tuple[int, int]
Chain = Dict[Bidegree, Vector]


class Flavor(str, Enum):
    """The five cohomologies of a bicomplex"""

    DR = "dR"
    DEL = "del"
    DELBAR = "delbar"
    BC = "BC"
    A = "A"

    @property
    def bigraded(self) -> bool:
        return self is not Flavor.DR


def chain_add(u: Chain, v: Chain) -> Chain:
    out = dict(u)
    for bd, vec in v.items():
        s = vec_add(out.get(bd, {}), vec)
        if s:
            out[bd] = s
        else:
            out.pop(bd, None)
    return out


class Bicomplex:
    """Bigraded vector space with anticommuting ∂ (type (1,0)) and ∂̄ (type (0,1)).

    Matrices are keyed by source bidegree; missing blocks are zero. ``sigma`` maps
    (p,q) to (q,p) and acts antilinearly: σ(c·v) = conj(c)·σ(v).
    """

    def __init__(
        self,
        dims: Dict[Bidegree, int],
        del_maps: Optional[Dict[Bidegree, SparseMatrix]] = None,
        delbar_maps: Optional[Dict[Bidegree, SparseMatrix]] = None,
        sigma: Optional[Dict[Bidegree, SparseMatrix]] = None,
        labels: Optional[Dict[Bidegree, List[str]]] = None,
        certified_degree: Optional[int] = None,
        name: str = "",
    ):
        self.dims = {bd: n for bd, n in sorted(dims.items()) if n > 0}
        self.del_maps = {bd: m for bd, m in (del_maps or {}).items() if not m.is_zero()}
        self.delbar_maps = {
            bd: m for bd, m in (delbar_maps or {}).items() if not m.is_zero()
        }
        self.sigma = sigma
        self.labels = labels or {}
        self.name = name
        top = max((p + q for p, q in self.dims), default=0)
        self.certified_degree = top if certified_degree is None else certified_degree

    # Shape

    def dim(self, bd: Bidegree) -> int:
        return self.dims.get(bd, 0)

    def bidegrees(self) -> List[Bidegree]:
        return list(self.dims)

    def degrees(self) -> List[int]:
        return sorted({p + q for p, q in self.dims})

    def bidegrees_in_degree(self, k: int) -> List[Bidegree]:
        return [bd for bd in self.dims if sum(bd) == k]

    @property
    def has_real_structure(self) -> bool:
        return self.sigma is not None

    def is_first_quadrant(self) -> bool:
        return all(p >= 0 and q >= 0 for p, q in self.dims)

    def label(self, bd: Bidegree, index: int) -> str:
        names = self.labels.get(bd)
        if names and index < len(names):
            return names[index]
        return f"e{index}@{bd[0]},{bd[1]}"

    # Operators

    def del_at(self, bd: Bidegree) -> SparseMatrix:
        p, q = bd
        return self.del_maps.get(bd) or SparseMatrix.zero(self.dim((p + 1, q)), self.dim(bd))

    def delbar_at(self, bd: Bidegree) -> SparseMatrix:
        p, q = bd
        return self.delbar_maps.get(bd) or SparseMatrix.zero(self.dim((p, q + 1)), self.dim(bd))

    def ddbar_at(self, bd: Bidegree) -> SparseMatrix:
        """∂∂̄ from (p,q) to (p+1,q+1)"""
        p, q = bd
        return self.del_at((p, q + 1)).compose(self.delbar_at(bd))

    def sigma_at(self, bd: Bidegree) -> SparseMatrix:
        if self.sigma is None:
            raise InvalidBicomplexError("bicomplex has no real structure")
        p, q = bd
        return self.sigma.get(bd) or SparseMatrix.zero(self.dim((q, p)), self.dim(bd))

    def apply_del(self, chain: Chain) -> Chain:
        out: Chain = {}
        for (p, q), v in chain.items():
            out = chain_add(out, {(p + 1, q): self.del_at((p, q)).apply(v)})
        return out

    def apply_delbar(self, chain: Chain) -> Chain:
        out: Chain = {}
        for (p, q), v in chain.items():
            out = chain_add(out, {(p, q + 1): self.delbar_at((p, q)).apply(v)})
        return out

    def apply_d(self, chain: Chain) -> Chain:
        return chain_add(self.apply_del(chain), self.apply_delbar(chain))

    def apply_sigma(self, chain: Chain) -> Chain:
        out: Chain = {}
        for (p, q), v in chain.items():
            image = self.sigma_at((p, q)).apply({k: c.conjugate() for k, c in v.items()})
            out = chain_add(out, {(q, p): image})
        return out

    # Validation

    def validate(self) -> None:
        """Raise InvalidBicomplexError naming the first failing identity"""
        for kind, maps, shift in (("del", self.del_maps, (1, 0)), ("delbar", self.delbar_maps, (0, 1))):
            for (p, q), m in maps.items():
                expected = (self.dim((p + shift[0], q + shift[1])), self.dim((p, q)))
                if m.shape != expected:
                    raise InvalidBicomplexError(
                        f"{kind} block at ({p},{q}) has shape {m.shape}, expected {expected}",
                        {"bidegree": [p, q], "map": kind},
                    )
        for bd in self.dims:
            p, q = bd
            checks = (
                ("del^2", self.del_at((p + 1, q)).compose(self.del_at(bd))),
                ("delbar^2", self.delbar_at((p, q + 1)).compose(self.delbar_at(bd))),
                (
                    "del delbar + delbar del",
                    self.del_at((p, q + 1)).compose(self.delbar_at(bd))
                    + self.delbar_at((p + 1, q)).compose(self.del_at(bd)),
                ),
            )
            for identity, matrix in checks:
                if not matrix.is_zero():
                    raise InvalidBicomplexError(
                        f"{identity} != 0 on bidegree ({p},{q})",
                        {"bidegree": [p, q], "identity": identity},
                    )
        if self.sigma is not None:
            self._validate_sigma()

    def _validate_sigma(self) -> None:
        for bd in self.dims:
            p, q = bd
            s = self.sigma_at(bd)
            if s.shape != (self.dim((q, p)), self.dim(bd)):
                raise InvalidBicomplexError(f"sigma block at ({p},{q}) has the wrong shape")
            # σ antilinear: σ∘σ has matrix conj(S_qp)·S_pq
            square = self.sigma_at((q, p)).conjugate().compose(s)
            if square != SparseMatrix.identity(self.dim(bd)):
                raise InvalidBicomplexError(
                    f"sigma^2 != Id on bidegree ({p},{q})", {"bidegree": [p, q]}
                )
            # σ∂σ = ∂̄, i.e. σ∂ = ∂̄σ with the antilinear twist
            lhs = self.sigma_at((p + 1, q)).compose(self.del_at(bd).conjugate())
            rhs = self.delbar_at((q, p)).compose(s)
            if lhs != rhs:
                raise InvalidBicomplexError(
                    f"sigma del sigma != delbar on bidegree ({p},{q})", {"bidegree": [p, q]}
                )


@dataclass
class BicomplexMap:
    """Bidegree-preserving linear map, blocks keyed by bidegree"""

    source: Bicomplex
    target: Bicomplex
    blocks: Dict[Bidegree, SparseMatrix] = field(default_factory=dict)
    real: bool = False

    def block(self, bd: Bidegree) -> SparseMatrix:
        return self.blocks.get(bd) or SparseMatrix.zero(self.target.dim(bd), self.source.dim(bd))

    def apply(self, chain: Chain) -> Chain:
        out: Chain = {}
        for bd, v in chain.items():
            out = chain_add(out, {bd: self.block(bd).apply(v)})
        return out

    def compose(self, first: "BicomplexMap") -> "BicomplexMap":
        """self after first"""
        return BicomplexMap(
            first.source,
            self.target,
            {bd: self.block(bd).compose(first.block(bd)) for bd in first.source.dims},
            self.real and first.real,
        )

    @classmethod
    def identity(cls, bicomplex: Bicomplex) -> "BicomplexMap":
        return cls(
            bicomplex,
            bicomplex,
            {bd: SparseMatrix.identity(n) for bd, n in bicomplex.dims.items()},
            bicomplex.has_real_structure,
        )

    @classmethod
    def zero(cls, source: Bicomplex, target: Bicomplex) -> "BicomplexMap":
        return cls(source, target, {})

    def validate(self) -> None:
        for bd in self.source.dims:
            p, q = bd
            f = self.block(bd)
            if f.shape != (self.target.dim(bd), self.source.dim(bd)):
                raise InvalidBicomplexError(f"map block at ({p},{q}) has the wrong shape")
            if self.target.del_at(bd).compose(f) != self.block((p + 1, q)).compose(self.source.del_at(bd)):
                raise InvalidBicomplexError(f"map does not commute with del at ({p},{q})")
            if self.target.delbar_at(bd).compose(f) != self.block((p, q + 1)).compose(
                self.source.delbar_at(bd)
            ):
                raise InvalidBicomplexError(f"map does not commute with delbar at ({p},{q})")
            if self.real and self.source.has_real_structure and self.target.has_real_structure:
                lhs = self.target.sigma_at(bd).compose(f.conjugate())
                rhs = self.block((q, p)).compose(self.source.sigma_at(bd))
                if lhs != rhs:
                    raise InvalidBicomplexError(f"map does not commute with sigma at ({p},{q})")


@dataclass
class CohomologySpace:
    """Cohomology of one flavor: dimensions and representative cocycles.

    Keys are bidegrees, or (k, 0)-style total degrees for de Rham; representatives
    are chains so a de Rham class may spread over several bidegrees.
    """

    flavor: Flavor
    dims: Dict[object, int]
    representatives: Dict[object, List[Chain]]
    quotients: Dict[object, object] = field(default_factory=dict, repr=False)

    def dim(self, key) -> int:
        return self.dims.get(key, 0)

    def total_dims(self) -> Dict[int, int]:
        if not self.flavor.bigraded:
            return dict(self.dims)
        totals: Dict[int, int] = {}
        for (p, q), n in self.dims.items():
            totals[p + q] = totals.get(p + q, 0) + n
        return totals
