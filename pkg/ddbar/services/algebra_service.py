"""
Algebra service: validation, windows, totalization, real points and morphism checks
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ddbar.core.exceptions import AlgebraValidationError, VerificationError, WindowError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import (
    D,
    DEL,
    DELBAR,
    AlgebraMorphism,
    Element,
    Generator,
    GradedAlgebra,
    Monomial,
)
from ddbar.models.bicomplex import Bicomplex, BicomplexMap, Bidegree, Chain
from ddbar.models.linalg import SparseMatrix, Vector
from ddbar.models.scalars import Scalar


@dataclass
class Verdict:
    """Outcome of a structural check with the first failing witness"""

    valid: bool
    witness: Optional[str] = None
    message: str = ""
    checked: int = 0

    def raise_for_failure(self) -> None:
        if not self.valid:
            raise AlgebraValidationError(self.message, witness=self.witness)


@dataclass
class AlgebraWindow:
    """Monomial bases of an algebra up to a collar, packaged as a bicomplex"""

    algebra: GradedAlgebra
    window: int
    max_weight: Optional[int]
    bicomplex: Bicomplex
    basis: Dict[Bidegree, List[Monomial]] = field(default_factory=dict)
    position: Dict[Bidegree, Dict[Monomial, int]] = field(default_factory=dict)

    def to_chain(self, element: Element) -> Chain:
        element = self.algebra.normal_form(element)
        chain: Chain = {}
        for m, c in element.terms.items():
            bd = self.algebra.monomial_bidegree(m)
            index = self.position.get(bd, {}).get(m)
            if index is None:
                raise WindowError(
                    f"monomial {self.algebra.monomial_text(m)} lies outside the window"
                )
            chain.setdefault(bd, {})[index] = c
        return chain

    def to_element(self, chain: Chain) -> Element:
        terms = {}
        for bd, v in chain.items():
            for i, c in v.items():
                terms[self.basis[bd][i]] = c
        return Element(self.algebra, terms)


def collar(algebra: GradedAlgebra, window: int) -> int:
    """Top total degree a window needs: one spare degree, two for bigraded algebras"""
    return window + (2 if algebra.bigraded else 1)


class AlgebraService(LoggerMixin):
    """Service for structural operations on graded algebras"""

    # Validation

    def validate(self, algebra: GradedAlgebra) -> Verdict:
        """Check degrees, d² = 0, relation stability and σ-compatibility generator-wise"""
        checked = 0
        kinds = (DEL, DELBAR) if algebra.bigraded else (DEL,)
        shifts = {DEL: (1, 0), DELBAR: (0, 1)}

        for g in algebra.generators:
            i = algebra.index[g.name]
            for kind in kinds:
                image = algebra.image(kind, i)
                expected = (g.bidegree[0] + shifts[kind][0], g.bidegree[1] + shifts[kind][1])
                failure = self._homogeneity(algebra, image, expected, g.weight)
                if failure:
                    return Verdict(False, g.name, f"{kind}({g.name}) {failure}", checked)
            checked += 1

        for g in algebra.generators:
            x = algebra.generator(g.name)
            for label, a, b in self._square_checks(algebra):
                value = algebra.differential(algebra.differential(x, a), b)
                if a != b:
                    value = value + algebra.differential(algebra.differential(x, b), a)
                if value:
                    return Verdict(False, g.name, f"{label} != 0 on {g.name}: {value}", checked)
            checked += 1

        for k, relation in enumerate(algebra.relations):
            label = f"relation {k + 1}"
            if len(relation.bidegrees()) > 1:
                return Verdict(False, label, f"{label} is not homogeneous", checked)
            if algebra.weighted and len({algebra.monomial_weight(m) for m in relation.terms}) > 1:
                return Verdict(False, label, f"{label} is not weight-homogeneous", checked)
            for kind in kinds:
                if algebra.differential(relation, kind):
                    return Verdict(False, label, f"{kind}({label}) is not in the ideal", checked)
            if algebra.real_structure and algebra.conjugate(relation):
                return Verdict(False, label, f"sigma({label}) is not in the ideal", checked)
            checked += 1

        if algebra.real_structure:
            if not algebra.bigraded:
                return Verdict(False, None, "real structure needs a bigraded algebra", checked)
            for g in algebra.generators:
                x = algebra.generator(g.name)
                lhs = algebra.conjugate(algebra.differential(algebra.conjugate(x), DEL))
                rhs = algebra.differential(x, DELBAR)
                if lhs != rhs:
                    return Verdict(False, g.name, f"sigma del sigma != delbar on {g.name}", checked)
                checked += 1

        self.log_debug("Validated algebra", algebra=algebra.name, checks=checked)
        return Verdict(True, None, "valid", checked)

    def _homogeneity(self, algebra: GradedAlgebra, image: Element, bd: Bidegree, weight) -> str:
        for m in image.terms:
            if algebra.monomial_bidegree(m) != bd:
                return f"has a term of bidegree {algebra.monomial_bidegree(m)}, expected {bd}"
            if algebra.weighted and algebra.monomial_weight(m) != weight:
                return f"does not preserve weight {weight}"
        return ""

    def _square_checks(self, algebra: GradedAlgebra):
        if not algebra.bigraded:
            return (("d^2", DEL, DEL),)
        return (
            ("del^2", DEL, DEL),
            ("delbar^2", DELBAR, DELBAR),
            ("del delbar + delbar del", DEL, DELBAR),
        )

    def require_valid(self, algebra: GradedAlgebra) -> GradedAlgebra:
        self.validate(algebra).raise_for_failure()
        return algebra

    # Arithmetic

    def multiply(self, u: Element, v: Element, strict: bool = True) -> Element:
        return u.algebra.multiply(u, v, strict=strict)

    # Windows

    def underlying_bicomplex(
        self, algebra: GradedAlgebra, window: int, max_weight: Optional[int] = None
    ) -> AlgebraWindow:
        """Bicomplex of the algebra in total degrees up to ``window`` plus the collar"""
        limit = algebra.truncation - (2 if algebra.bigraded else 1)
        if window > limit:
            raise WindowError(
                f"window {window} exceeds the reliable range {limit} for N={algebra.truncation}",
                {"window": window, "truncation": algebra.truncation},
            )
        top = collar(algebra, window)
        bidegrees = [
            (p, k - p)
            for k in range(top + 1)
            for p in range(k + 1)
            if algebra.bigraded or p == k
        ]
        basis: Dict[Bidegree, List[Monomial]] = {}
        for bd in bidegrees:
            monos = algebra.basis(bd, max_weight)
            if monos:
                basis[bd] = monos
        position = {bd: {m: j for j, m in enumerate(ms)} for bd, ms in basis.items()}
        partial = AlgebraWindow(algebra, window, max_weight, None, basis, position)

        del_maps: Dict[Bidegree, SparseMatrix] = {}
        delbar_maps: Dict[Bidegree, SparseMatrix] = {}
        sigma: Optional[Dict[Bidegree, SparseMatrix]] = {} if algebra.real_structure else None
        for (p, q), monos in basis.items():
            for kind, target, maps in (
                (DEL, (p + 1, q), del_maps),
                (DELBAR, (p, q + 1), delbar_maps),
            ):
                if sum(target) > top or target not in basis:
                    continue
                columns = {}
                for j, m in enumerate(monos):
                    image = algebra.differential(Element(algebra, {m: Scalar(1)}), kind)
                    if image:
                        columns[j] = self._vector(partial, image, target)
                maps[(p, q)] = SparseMatrix(len(basis[target]), len(monos), columns)
            if sigma is not None:
                columns = {}
                for j, m in enumerate(monos):
                    image = algebra.conjugate(Element(algebra, {m: Scalar(1)}))
                    columns[j] = self._vector(partial, image, (q, p))
                sigma[(p, q)] = SparseMatrix(len(basis.get((q, p), [])), len(monos), columns)

        labels = {bd: [algebra.monomial_text(m) for m in ms] for bd, ms in basis.items()}
        bicomplex = Bicomplex(
            {bd: len(ms) for bd, ms in basis.items()},
            del_maps,
            delbar_maps,
            sigma,
            labels,
            certified_degree=window,
            name=algebra.name,
        )
        partial.bicomplex = bicomplex
        self.log_debug(
            "Built algebra window",
            algebra=algebra.name,
            window=window,
            dimension=sum(bicomplex.dims.values()),
        )
        return partial

    def _vector(self, window: AlgebraWindow, image: Element, bd: Bidegree) -> Vector:
        chain = window.to_chain(image)
        stray = [k for k in chain if k != bd]
        if stray:
            raise VerificationError(f"image has components outside bidegree {bd}")
        return chain.get(bd, {})

    def window_map(
        self, morphism: AlgebraMorphism, source: AlgebraWindow, target: AlgebraWindow
    ) -> BicomplexMap:
        blocks: Dict[Bidegree, SparseMatrix] = {}
        for bd, monos in source.basis.items():
            if bd not in target.basis:
                continue
            columns = {}
            for j, m in enumerate(monos):
                image = morphism.apply(Element(morphism.source, {m: Scalar(1)}))
                columns[j] = self._vector(target, image, bd)
            blocks[bd] = SparseMatrix(len(target.basis[bd]), len(monos), columns)
        return BicomplexMap(source.bicomplex, target.bicomplex, blocks)

    # Structural transformations

    def totalize(self, algebra: GradedAlgebra) -> GradedAlgebra:
        """Same generators in total degree, d = ∂ + ∂̄"""
        generators = [Generator(g.name, (g.degree, 0), None, g.weight) for g in algebra.generators]
        total = GradedAlgebra(
            generators,
            bigraded=False,
            truncation=algebra.truncation,
            name=f"tot({algebra.name})",
            notes=algebra.notes,
        )
        for relation in algebra.relations:
            total.add_relation(Element(total, relation.terms))
        for i, g in enumerate(algebra.generators):
            image = algebra.image(D, i) if algebra.bigraded else algebra.image(DEL, i)
            if image:
                total.set_differential(g.name, DEL, Element(total, image.terms))
        return total

    def transfer(self, element: Element, algebra: GradedAlgebra) -> Element:
        """Reinterpret an element in an algebra with the same generator order"""
        return algebra.normal_form(Element(algebra, element.terms))

    def real_points(self, algebra: GradedAlgebra) -> GradedAlgebra:
        """σ-fixed subalgebra of tot(A), generated over the conjugation-fixed subfield"""
        if not algebra.real_structure:
            raise AlgebraValidationError("real_points needs a real structure")
        total = self.totalize(algebra)
        generators: List[Generator] = []
        seen = set()
        for g in algebra.generators:
            if g.name in seen:
                continue
            seen.update({g.name, g.partner})
            if g.partner == g.name:
                generators.append(Generator(g.name, (g.degree, 0), None, g.weight))
            else:
                generators.append(Generator(f"{g.name}_re", (g.degree, 0), None, g.weight))
                generators.append(Generator(f"{g.name}_im", (g.degree, 0), None, g.weight))
        real = GradedAlgebra(
            generators, bigraded=False, truncation=algebra.truncation, name=f"re({algebra.name})"
        )

        half, i = Scalar.rational(1, 2), Scalar.i()
        images: Dict[str, Element] = {}
        for g in algebra.generators:
            if g.partner == g.name:
                images[g.name] = real.generator(g.name)
            elif f"{g.name}_re" in real.index:
                re_, im_ = real.generator(f"{g.name}_re"), real.generator(f"{g.name}_im")
                images[g.name] = (re_ - im_ * i) * half
                images[g.partner] = (re_ + im_ * i) * half
        substitution = AlgebraMorphism(total, real, images)

        for relation in total.relations:
            image = substitution.apply(relation)
            for part in self._real_parts(real, image):
                if part:
                    real.add_relation(part)
        for g in algebra.generators:
            d_g = total.image(DEL, total.index[g.name])
            if g.partner == g.name:
                pairs = [(g.name, d_g)]
            elif f"{g.name}_re" in real.index:
                d_h = total.image(DEL, total.index[g.partner])
                pairs = [(f"{g.name}_re", d_g + d_h), (f"{g.name}_im", (d_g - d_h) * i)]
            else:
                continue
            for name, d_total in pairs:
                image = substitution.apply(d_total)
                if any(not c.is_real for c in image.terms.values()):
                    raise AlgebraValidationError(
                        "real points are not defined over the real subfield", witness=name
                    )
                if image:
                    real.set_differential(name, DEL, image)
        return real

    def _real_parts(self, algebra: GradedAlgebra, element: Element) -> List[Element]:
        re_terms = {m: Scalar(c.re) for m, c in element.terms.items()}
        im_terms = {m: Scalar(c.im) for m, c in element.terms.items()}
        return [Element(algebra, re_terms), Element(algebra, im_terms)]

    # Morphisms

    def check_morphism(self, morphism: AlgebraMorphism) -> Verdict:
        """Degree preservation, compatibility with differentials, relation killing"""
        source, target = morphism.source, morphism.target
        checked = 0
        for g in source.generators:
            image = morphism.image(g.name)
            for m in image.terms:
                if target.monomial_bidegree(m) != g.bidegree:
                    return Verdict(False, g.name, f"image of {g.name} has the wrong degree", checked)
            checked += 1

        kinds = self._compatible_kinds(source, target)
        for g in source.generators:
            x = source.generator(g.name)
            for source_kind, target_kind in kinds:
                lhs = morphism.apply(source.differential(x, source_kind))
                rhs = target.differential(morphism.image(g.name), target_kind)
                if lhs != rhs:
                    return Verdict(
                        False,
                        g.name,
                        f"f({source_kind} {g.name}) != {target_kind} f({g.name}): difference {lhs - rhs}",
                        checked,
                    )
            checked += 1

        for k, relation in enumerate(source.relations):
            if morphism.apply(relation):
                return Verdict(False, f"relation {k + 1}", "relation not killed", checked)
            checked += 1
        self.log_debug("Checked morphism", morphism=morphism.name, checks=checked)
        return Verdict(True, None, "valid", checked)

    def _compatible_kinds(self, source: GradedAlgebra, target: GradedAlgebra):
        if source.bigraded and target.bigraded:
            return ((DEL, DEL), (DELBAR, DELBAR))
        if source.bigraded != target.bigraded:
            raise AlgebraValidationError("morphism between singly and bigraded algebras")
        return ((DEL, DEL),)
