"""
Graded-commutative algebras: free (bi)differential algebras and presented quotients
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ddbar.core.exceptions import (
    AlgebraValidationError,
    TruncationOverflowError,
    WindowError,
)
from ddbar.models.bicomplex import Bidegree
from ddbar.models.expressions import RESERVED, evaluate
from ddbar.models.linalg import rref
from ddbar.models.scalars import Scalar

Monomial = Tuple[int, ...]

DEL, DELBAR, D = "del", "delbar", "d"


@dataclass(frozen=True)
class Generator:
    """A generator; singly graded algebras place degree k at bidegree (k, 0).

    ``partner`` is None without real structure, the own name when σ fixes the
    generator, or the name of the generator σ swaps it with.
    """

    name: str
    bidegree: Bidegree
    partner: Optional[str] = None
    weight: Optional[int] = None

    @property
    def degree(self) -> int:
        return self.bidegree[0] + self.bidegree[1]

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class Element:
    """Linear combination of normal-form monomials of one algebra"""

    __slots__ = ("algebra", "terms", "overflow")

    def __init__(self, algebra: "GradedAlgebra", terms=None, overflow: bool = False):
        self.algebra = algebra
        self.terms: Dict[Monomial, Scalar] = {m: c for m, c in (terms or {}).items() if c}
        self.overflow = overflow

    def _wrap(self, other) -> "Element":
        if isinstance(other, Element):
            if other.algebra is not self.algebra:
                raise ValueError("elements belong to different algebras")
            return other
        return self.algebra.scalar(Scalar.coerce(other))

    def __add__(self, other) -> "Element":
        other = self._wrap(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            terms[m] = c if s is None else s + c
        return Element(self.algebra, terms, self.overflow or other.overflow)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.algebra, {m: -c for m, c in self.terms.items()}, self.overflow)

    def __sub__(self, other) -> "Element":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "Element":
        return self._wrap(other) - self

    def __mul__(self, other) -> "Element":
        if isinstance(other, (Scalar, int)):
            c = Scalar.coerce(other)
            return Element(self.algebra, {m: c * x for m, x in self.terms.items()}, self.overflow)
        return self.algebra.product(self, self._wrap(other))

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (Scalar, int)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Element, Scalar, int)):
            return not (self - other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def coefficient(self, monomial: Monomial) -> Scalar:
        return self.terms.get(monomial, Scalar(0))

    def bidegrees(self) -> List[Bidegree]:
        return sorted({self.algebra.monomial_bidegree(m) for m in self.terms})

    def bidegree(self) -> Optional[Bidegree]:
        """The common bidegree of a homogeneous element, None for zero"""
        found = self.bidegrees()
        if not found:
            return None
        if len(found) > 1:
            raise ValueError("element is not homogeneous")
        return found[0]

    def component(self, bd: Bidegree) -> "Element":
        return Element(
            self.algebra,
            {m: c for m, c in self.terms.items() if self.algebra.monomial_bidegree(m) == bd},
        )

    def conjugate(self) -> "Element":
        return self.algebra.conjugate(self)

    def to_text(self) -> str:
        return self.algebra.element_text(self)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Element({self.to_text()!r})"


class GradedAlgebra:
    """Free graded-commutative algebra on generators, optionally modulo relations.

    Differentials are odd derivations given on generators (``del``/``delbar``; a
    singly graded algebra stores d as ``del``). Products are exact; the truncation
    bound N is enforced by :meth:`multiply` and by window admissibility.
    """

    def __init__(
        self,
        generators: Sequence[Generator],
        *,
        bigraded: bool,
        truncation: int,
        name: str = "",
        real_structure: bool = False,
        notes: Sequence[str] = (),
    ):
        self.generators: List[Generator] = list(generators)
        self.bigraded = bigraded
        self.truncation = truncation
        self.name = name
        self.real_structure = real_structure
        self.notes = list(notes)
        self.index: Dict[str, int] = {}
        for i, g in enumerate(self.generators):
            if g.name in self.index:
                raise AlgebraValidationError(f"duplicate generator {g.name}", witness=g.name)
            self.index[g.name] = i
        self.n = len(self.generators)
        self.odd = tuple(g.odd for g in self.generators)
        self.weighted = any(g.weight is not None for g in self.generators)
        self.del_images: Dict[int, Element] = {}
        self.delbar_images: Dict[int, Element] = {}
        self.relations: List[Element] = []
        self._diff_cache: Dict[Tuple[str, Monomial], Element] = {}
        self._sigma_cache: Dict[Monomial, Element] = {}
        self._monomial_cache: Dict[Tuple[Bidegree, Optional[int]], List[Monomial]] = {}
        self._reduction_cache: Dict[Tuple[Bidegree, Optional[int]], "Reduction"] = {}
        self._check_generators()

    def _check_generators(self) -> None:
        for g in self.generators:
            if g.name in RESERVED:
                raise AlgebraValidationError(f"{g.name} is a reserved name", witness=g.name)
            p, q = g.bidegree
            if p < 0 or q < 0:
                raise AlgebraValidationError("negative bidegree", witness=g.name)
            if not self.bigraded and q != 0:
                raise AlgebraValidationError("singly graded generator with q != 0", witness=g.name)
            if self.weighted and (g.weight is None or g.weight <= 0):
                raise AlgebraValidationError(
                    "weights must be positive and given for every generator", witness=g.name
                )
            if g.degree == 0 and not self.weighted:
                raise AlgebraValidationError(
                    "degree-0 generators need a weight grading", witness=g.name
                )
            if self.real_structure:
                if g.partner is None or g.partner not in self.index:
                    raise AlgebraValidationError("missing real-structure partner", witness=g.name)
                other = self.generators[self.index[g.partner]]
                if other.partner != g.name or other.bidegree != (q, p) or other.weight != g.weight:
                    raise AlgebraValidationError(
                        f"partner {other.name} does not mirror {g.name}", witness=g.name
                    )

    # Construction helpers

    def generator(self, name: str) -> Element:
        i = self.index[name]
        exps = [0] * self.n
        exps[i] = 1
        return Element(self, {tuple(exps): Scalar(1)})

    def one(self) -> Element:
        return self.scalar(Scalar(1))

    def zero(self) -> Element:
        return Element(self)

    def scalar(self, c: Scalar) -> Element:
        return Element(self, {(0,) * self.n: c})

    def parse(self, text: str) -> Element:
        """Evaluate an element expression in this algebra's generators"""
        return self.normal_form(evaluate(text, self.scalar, self.generator))

    def set_differential(self, name: str, kind: str, image: Element) -> None:
        i = self.index[name]
        if kind == D:
            if self.bigraded:
                raise ValueError("bigraded algebras take del and delbar separately")
            kind = DEL
        target = self.del_images if kind == DEL else self.delbar_images
        target[i] = image
        self._diff_cache.clear()

    def add_relation(self, relation: Element) -> None:
        self.relations.append(relation)
        self._reduction_cache.clear()

    @property
    def is_free(self) -> bool:
        return not self.relations

    @property
    def needs_weight_bound(self) -> bool:
        """Generators at (0,0) make every bidegree infinite without a weight bound"""
        return any(g.degree == 0 for g in self.generators)

    # Monomials

    def monomial_bidegree(self, m: Monomial) -> Bidegree:
        p = q = 0
        for e, g in zip(m, self.generators):
            if e:
                p += e * g.bidegree[0]
                q += e * g.bidegree[1]
        return p, q

    def monomial_degree(self, m: Monomial) -> int:
        return sum(self.monomial_bidegree(m))

    def monomial_weight(self, m: Monomial) -> int:
        return sum(e * (g.weight or 0) for e, g in zip(m, self.generators))

    def monomial_text(self, m: Monomial) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def monomial_product(self, a: Monomial, b: Monomial) -> Optional[Tuple[int, Monomial]]:
        """Sign and normal-form monomial of a·b, None when an odd square appears"""
        suffix_odd = [0] * (self.n + 1)
        for k in range(self.n - 1, -1, -1):
            suffix_odd[k] = suffix_odd[k + 1] + (a[k] if self.odd[k] else 0)
        parity = 0
        for j, e in enumerate(b):
            if e and self.odd[j]:
                if a[j]:
                    return None
                parity += suffix_odd[j + 1]
        return (-1 if parity % 2 else 1), tuple(x + y for x, y in zip(a, b))

    def monomials(self, bd: Bidegree, max_weight: Optional[int] = None) -> List[Monomial]:
        """All monomials of bidegree ``bd`` in descending lexicographic order"""
        key = (bd, max_weight)
        if key in self._monomial_cache:
            return self._monomial_cache[key]
        for g in self.generators:
            if g.bidegree == (0, 0) and not g.odd and max_weight is None:
                raise WindowError(
                    f"a weight bound is needed to enumerate monomials with {g.name} at (0,0)"
                )
        found: List[Monomial] = []
        exps = [0] * self.n

        def walk(i: int, p: int, q: int, w: int) -> None:
            if i == self.n:
                if p == 0 and q == 0:
                    found.append(tuple(exps))
                return
            g = self.generators[i]
            gp, gq = g.bidegree
            gw = g.weight or 0
            limit = 1 if g.odd else None
            e = 0
            while True:
                if limit is not None and e > limit:
                    break
                rp, rq, rw = p - e * gp, q - e * gq, w - e * gw
                if rp < 0 or rq < 0 or (max_weight is not None and rw < 0):
                    break
                exps[i] = e
                walk(i + 1, rp, rq, rw)
                if gp == 0 and gq == 0 and gw == 0:
                    break
                e += 1
            exps[i] = 0

        walk(0, bd[0], bd[1], max_weight if max_weight is not None else 0)
        found.sort(reverse=True)
        self._monomial_cache[key] = found
        return found

    # Products

    def product(self, u: Element, v: Element) -> Element:
        """Exact product, reduced to normal form when the algebra has relations"""
        terms: Dict[Monomial, Scalar] = {}
        for a, ca in u.terms.items():
            for b, cb in v.terms.items():
                found = self.monomial_product(a, b)
                if found is None:
                    continue
                sign, m = found
                c = ca * cb if sign > 0 else -(ca * cb)
                s = terms.get(m)
                terms[m] = c if s is None else s + c
        result = Element(self, terms, u.overflow or v.overflow)
        return self.normal_form(result) if self.relations else result

    def multiply(self, u: Element, v: Element, strict: bool = True) -> Element:
        """Product under the truncation bound: overflow raises when ``strict``,
        otherwise terms above N are dropped and the result is flagged"""
        result = self.product(u, v)
        kept = {m: c for m, c in result.terms.items() if self.monomial_degree(m) <= self.truncation}
        if len(kept) == len(result.terms):
            return result
        if strict:
            raise TruncationOverflowError(
                f"product exceeds truncation N={self.truncation}",
                {"left": u.to_text(), "right": v.to_text()},
            )
        return Element(self, kept, overflow=True)

    # Differentials

    def image(self, kind: str, i: int) -> Element:
        if kind == D:
            return self.image(DEL, i) + self.image(DELBAR, i)
        images = self.del_images if kind == DEL else self.delbar_images
        return images.get(i) or self.zero()

    def differential(self, element: Element, kind: str = D) -> Element:
        result = self.zero()
        for m, c in element.terms.items():
            result = result + self._monomial_differential(m, kind) * c
        return self.normal_form(result) if self.relations else result

    def derivation(self, element: Element, images: Dict[int, Element]) -> Element:
        """Odd derivation given by its values on generators (missing means zero)"""
        result = self.zero()
        for m, c in element.terms.items():
            result = result + self._leibniz(m, images.get) * c
        return self.normal_form(result) if self.relations else result

    def _monomial_differential(self, m: Monomial, kind: str) -> Element:
        key = (kind, m)
        cached = self._diff_cache.get(key)
        if cached is None:
            cached = self._leibniz(m, lambda i: self.image(kind, i))
            self._diff_cache[key] = cached
        return cached

    def _leibniz(self, m: Monomial, image_of) -> Element:
        result = self.zero()
        prefix = [0] * self.n
        prefix_odd = 0
        for i, e in enumerate(m):
            if not e:
                continue
            image = image_of(i)
            if image:
                lower = list(prefix)
                lower[i] = e - 1
                suffix = [0] * self.n
                suffix[i + 1:] = m[i + 1:]
                left = Element(self, {tuple(lower): Scalar(-1 if prefix_odd % 2 else 1) * e})
                result = result + left * image * Element(self, {tuple(suffix): Scalar(1)})
            prefix[i] = e
            if self.odd[i]:
                prefix_odd += e
        return result

    # Real structure

    def conjugate(self, element: Element) -> Element:
        """σ: partner swap on generators, conjugation on coefficients"""
        if not self.real_structure:
            raise AlgebraValidationError("algebra has no real structure")
        result = self.zero()
        for m, c in element.terms.items():
            result = result + self._monomial_conjugate(m) * c.conjugate()
        return self.normal_form(result) if self.relations else result

    def _monomial_conjugate(self, m: Monomial) -> Element:
        cached = self._sigma_cache.get(m)
        if cached is not None:
            return cached
        result = self.one()
        for e, g in zip(m, self.generators):
            for _ in range(e):
                result = result * self.generator(g.partner)
        self._sigma_cache[m] = result
        return result

    # Relations

    def reduction(self, bd: Bidegree, max_weight: Optional[int] = None) -> "Reduction":
        key = (bd, max_weight)
        cached = self._reduction_cache.get(key)
        if cached is None:
            cached = Reduction(self, bd, max_weight)
            self._reduction_cache[key] = cached
        return cached

    def normal_form(self, element: Element) -> Element:
        if not self.relations:
            return element
        out: Dict[Monomial, Scalar] = {}
        groups: Dict[Tuple[Bidegree, int], Dict[Monomial, Scalar]] = {}
        for m, c in element.terms.items():
            key = (self.monomial_bidegree(m), self.monomial_weight(m) if self.weighted else 0)
            groups.setdefault(key, {})[m] = c
        for (bd, w), terms in groups.items():
            reduced = self.reduction(bd, w if self.weighted else None).reduce(terms)
            out.update(reduced)
        return Element(self, out, element.overflow)

    def basis(self, bd: Bidegree, max_weight: Optional[int] = None) -> List[Monomial]:
        """Standard monomials spanning the bidegree ``bd`` component"""
        if not self.relations:
            return self.monomials(bd, max_weight)
        if not self.weighted:
            return self.reduction(bd).standard
        weights = sorted({self.monomial_weight(m) for m in self.monomials(bd, max_weight)})
        found = []
        for w in weights:
            found.extend(self.reduction(bd, w).standard)
        return sorted(found, reverse=True)

    # Text

    def element_text(self, element: Element) -> str:
        if not element.terms:
            return "0"
        order = sorted(element.terms, key=lambda m: (self.monomial_degree(m), [-e for e in m]))
        parts: List[str] = []
        for m in order:
            c = element.terms[m]
            mono = self.monomial_text(m)
            ctext = c.to_text()
            if c.is_rational:
                negative = ctext.startswith("-")
                magnitude = ctext.lstrip("-")
            else:
                negative, magnitude = False, f"({ctext})"
            if mono == "1":
                body = magnitude
            elif magnitude == "1":
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        kind = "bigraded" if self.bigraded else "graded"
        return f"GradedAlgebra({self.name!r}, {kind}, {self.n} generators, N={self.truncation})"


class Reduction:
    """Per-(bi)degree quotient by the span of monomial·relation products"""

    def __init__(self, algebra: GradedAlgebra, bd: Bidegree, weight: Optional[int]):
        self.algebra = algebra
        if algebra.weighted and weight is not None:
            monos = [m for m in algebra.monomials(bd, weight) if algebra.monomial_weight(m) == weight]
        else:
            monos = algebra.monomials(bd, weight)
        self.monomials = monos
        self.column = {m: j for j, m in enumerate(monos)}
        rows: Dict[int, Dict[int, Scalar]] = {}
        for relation in algebra.relations:
            for rm, _ in relation.terms.items():
                rbd = algebra.monomial_bidegree(rm)
                rw = algebra.monomial_weight(rm)
                break
            else:
                continue
            sub = (bd[0] - rbd[0], bd[1] - rbd[1])
            if sub[0] < 0 or sub[1] < 0:
                continue
            if algebra.weighted and weight is not None:
                if weight - rw < 0:
                    continue
                multipliers = [
                    u for u in algebra.monomials(sub, weight - rw)
                    if algebra.monomial_weight(u) == weight - rw
                ]
            else:
                multipliers = algebra.monomials(sub)
            for u in multipliers:
                row: Dict[int, Scalar] = {}
                for m, c in relation.terms.items():
                    found = algebra.monomial_product(u, m)
                    if found is None:
                        continue
                    sign, prod = found
                    j = self.column[prod]
                    value = row.get(j, Scalar(0)) + (c if sign > 0 else -c)
                    row[j] = value
                rows[len(rows)] = row
        reduced, pivots, _ = rref(rows)
        self.rows = reduced
        self.pivots = list(pivots)
        pivot_set = set(self.pivots)
        self.standard = [m for j, m in enumerate(monos) if j not in pivot_set]

    @property
    def dim(self) -> int:
        return len(self.standard)

    def reduce(self, terms: Dict[Monomial, Scalar]) -> Dict[Monomial, Scalar]:
        vector = {self.column[m]: c for m, c in terms.items() if c}
        for r, p in enumerate(self.pivots):
            c = vector.get(p)
            if not c:
                continue
            for j, x in self.rows[r].items():
                value = vector.get(j, Scalar(0)) - c * x
                if value:
                    vector[j] = value
                else:
                    vector.pop(j, None)
        return {self.monomials[j]: c for j, c in vector.items()}


@dataclass
class AlgebraMorphism:
    """Algebra map given by images of generators"""

    source: GradedAlgebra
    target: GradedAlgebra
    images: Dict[str, Element]
    name: str = ""

    def image(self, name: str) -> Element:
        return self.images.get(name) or self.target.zero()

    def apply(self, element: Element) -> Element:
        if element.algebra is not self.source:
            raise ValueError("element does not belong to the source algebra")
        result = self.target.zero()
        for m, c in element.terms.items():
            term = self.target.scalar(c)
            for e, g in zip(m, self.source.generators):
                for _ in range(e):
                    term = term * self.image(g.name)
                    if not term:
                        break
                if not term:
                    break
            result = result + term
        return self.target.normal_form(result)

    def compose(self, first: "AlgebraMorphism") -> "AlgebraMorphism":
        """self after first"""
        return AlgebraMorphism(
            first.source,
            self.target,
            {g.name: self.apply(first.image(g.name)) for g in first.source.generators},
        )

    @classmethod
    def identity(cls, algebra: GradedAlgebra) -> "AlgebraMorphism":
        return cls(algebra, algebra, {g.name: algebra.generator(g.name) for g in algebra.generators})


def free_algebra(
    generators: Iterable[Generator],
    differentials: Dict[str, Tuple[Optional[str], Optional[str]]],
    *,
    bigraded: bool,
    truncation: int,
    relations: Sequence[str] = (),
    name: str = "",
    real_structure: bool = False,
    notes: Sequence[str] = (),
) -> GradedAlgebra:
    """Build an algebra from differential expressions ``{name: (del, delbar)}``.

    Singly graded algebras pass d in the ``del`` slot.
    """
    algebra = GradedAlgebra(
        list(generators),
        bigraded=bigraded,
        truncation=truncation,
        name=name,
        real_structure=real_structure,
        notes=notes,
    )
    for text in relations:
        algebra.add_relation(evaluate(text, algebra.scalar, algebra.generator))
    for gname, (del_text, delbar_text) in differentials.items():
        if gname not in algebra.index:
            raise AlgebraValidationError(f"differential for unknown generator {gname}", witness=gname)
        if del_text:
            algebra.set_differential(gname, DEL, algebra.parse(del_text))
        if delbar_text:
            if not bigraded:
                raise AlgebraValidationError("delbar given for a singly graded algebra", witness=gname)
            algebra.set_differential(gname, DELBAR, algebra.parse(delbar_text))
    return algebra

