"""
Torus contraction data on a cbba and the Cartan model built from it
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ddbar.models.algebra import AlgebraMorphism, Element, GradedAlgebra
from ddbar.models.scalars import Scalar

# Contraction parts: "10" lowers p (type (-1,0)), "01" lowers q (type (0,-1))
PART_10, PART_01 = "10", "01"
PARTS = (PART_10, PART_01)
SHIFTS = {PART_10: (-1, 0), PART_01: (0, -1)}


@dataclass
class TCbba:
    """A cbba with odd contraction derivations ι_1..ι_k given on generators"""

    algebra: GradedAlgebra
    rank: int
    contractions: Dict[Tuple[str, int, str], Element] = field(default_factory=dict)
    name: str = ""

    def images(self, index: int, part: str) -> Dict[int, Element]:
        out = {}
        for (generator, a, p), value in self.contractions.items():
            if a == index and p == part and value:
                out[self.algebra.index[generator]] = value
        return out

    def contract(self, index: int, part: str, element: Element) -> Element:
        return self.algebra.derivation(element, self.images(index, part))

    def contract_total(self, index: int, element: Element) -> Element:
        return self.contract(index, PART_10, element) + self.contract(index, PART_01, element)

    @property
    def is_trivial(self) -> bool:
        return not any(self.contractions.values())


@dataclass
class CartanModel:
    """C = ℂ[ξ^1..ξ^k] ⊗ A with d_T = d − Σ ξ^a ι_a; the ξ are the first generators"""

    tcbba: TCbba
    algebra: GradedAlgebra
    restriction: AlgebraMorphism
    xi: List[str] = field(default_factory=list)

    def lift(self, element: Element) -> Element:
        """1 ⊗ ω"""
        k = len(self.xi)
        return Element(self.algebra, {(0,) * k + m: c for m, c in element.terms.items()})

    def split(self, element: Element) -> Dict[Tuple[int, ...], Element]:
        """Group an element of C by its ξ-monomial, returning the A-coefficients"""
        k = len(self.xi)
        source = self.tcbba.algebra
        out: Dict[Tuple[int, ...], Dict] = {}
        for m, c in element.terms.items():
            out.setdefault(m[:k], {})[m[k:]] = c
        return {f: Element(source, terms) for f, terms in out.items()}

    def xi_monomial(self, exponents: Tuple[int, ...]) -> Element:
        k = len(self.xi)
        rest = (0,) * (self.algebra.n - k)
        return Element(self.algebra, {tuple(exponents) + rest: Scalar(1)})
