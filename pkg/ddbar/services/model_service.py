"""
Minimal and Koszul models, homotopy data, regular sequences and triple Massey products
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy import ZZ
from sympy.polys.rings import ring

from ddbar.core.exceptions import AlgebraValidationError, PreconditionError, VerificationError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import (
    DEL,
    DELBAR,
    AlgebraMorphism,
    Element,
    Generator,
    GradedAlgebra,
)
from ddbar.models.bicomplex import Bicomplex, CohomologySpace, Flavor
from ddbar.models.linalg import SparseMatrix, Vector, independent_columns, kernel, solve
from ddbar.models.scalars import Scalar
from ddbar.services.algebra_service import AlgebraService, AlgebraWindow
from ddbar.services.cohomology_service import CohomologyService, QisoVerdict

T_RING, T = ring("t", ZZ)


def pad(element: Element, algebra: GradedAlgebra) -> Element:
    """Carry an element into an algebra whose generator list extends the old one"""
    extra = algebra.n - element.algebra.n
    return Element(algebra, {m + (0,) * extra: c for m, c in element.terms.items()})


def word_length(m) -> int:
    return sum(m)


@dataclass
class ModelStage:
    degree: int
    closed: List[str] = field(default_factory=list)
    killing: List[Tuple[str, str]] = field(default_factory=list)


@dataclass
class MinimalModel:
    """ΛV with its quasi-isomorphism φ: ΛV → A and the per-degree construction log"""

    algebra: GradedAlgebra
    morphism: AlgebraMorphism
    stages: List[ModelStage]
    certified_degree: int

    def generators_in_degree(self, k: int) -> List[Generator]:
        return [g for g in self.algebra.generators if g.degree == k]

    def dimension_table(self) -> Dict[int, int]:
        table: Dict[int, int] = {}
        for g in self.algebra.generators:
            table[g.degree] = table.get(g.degree, 0) + 1
        return dict(sorted(table.items()))


@dataclass
class HomotopyData:
    """Dual homotopy: generators per (bi)degree with the linear parts of the differentials"""

    dims: Dict[object, int]
    generators: Dict[object, List[str]]
    linear_parts: Dict[str, Dict[str, str]]
    bicomplex: Optional[Bicomplex] = None
    flavored: Dict[Flavor, CohomologySpace] = field(default_factory=dict)


@dataclass
class RegularSequenceReport:
    degrees: List[int]
    quotient_series: List[int]
    product_series: List[int]
    verdict: bool
    truncation: int
    mismatch_degree: Optional[int] = None


@dataclass
class KoszulModel:
    algebra: GradedAlgebra
    morphism: AlgebraMorphism
    regularity: RegularSequenceReport
    qiso: QisoVerdict
    certified_degree: int
    target: GradedAlgebra


@dataclass
class MasseyProduct:
    representative: Element
    bounding: Tuple[Element, Element]
    indeterminacy: List[Element]
    vanishes: bool
    degree: int


class ModelService(LoggerMixin):
    """Service for model constructions over graded algebras"""

    def __init__(self):
        self.algebra_service = AlgebraService()
        self.cohomology_service = CohomologyService()

    # Helpers

    def _window(self, algebra: GradedAlgebra, window: int, max_weight: Optional[int] = None) -> AlgebraWindow:
        return self.algebra_service.underlying_bicomplex(algebra, window, max_weight)

    def _de_rham(self, window: AlgebraWindow) -> CohomologySpace:
        return self.cohomology_service.cohomology(window.bicomplex, Flavor.DR, validate=False)

    def _representatives(self, hom: CohomologySpace, window: AlgebraWindow, k: int) -> List[Element]:
        return [window.to_element(chain) for chain in hom.representatives.get(k, [])]

    def _classify(self, hom: CohomologySpace, window: AlgebraWindow, k: int, element: Element) -> Vector:
        coords = self.cohomology_service.classify(hom, k, window.to_chain(element))
        if coords is None:
            raise VerificationError(f"element of degree {k} is not a cocycle: {element}")
        return coords

    def _extend(self, algebra: GradedAlgebra, generators: List[Generator]) -> GradedAlgebra:
        grown = GradedAlgebra(
            algebra.generators + generators,
            bigraded=False,
            truncation=algebra.truncation,
            name=algebra.name,
        )
        for i, image in algebra.del_images.items():
            grown.set_differential(algebra.generators[i].name, DEL, pad(image, grown))
        return grown

    def _singly_graded(self, algebra: GradedAlgebra) -> GradedAlgebra:
        return self.algebra_service.totalize(algebra) if algebra.bigraded else algebra

    # Minimal models

    def minimal_model(self, algebra: GradedAlgebra, truncation: int) -> MinimalModel:
        """Sullivan minimal model through degree N, injective on H^{N+1}"""
        target = self._singly_graded(algebra)
        top = truncation + 1
        if target.truncation < top + 1:
            raise PreconditionError(
                f"algebra truncation {target.truncation} is too small for a model through degree {truncation}"
            )
        a_window = self._window(target, top)
        h_a = self._de_rham(a_window)
        if h_a.dim(0) != 1:
            raise PreconditionError("H^0 is not one-dimensional", {"dim": h_a.dim(0)})
        if h_a.dim(1):
            witness = self._representatives(h_a, a_window, 1)[0]
            raise PreconditionError(
                "algebra is not simply connected", {"class": witness.to_text()}
            )

        model = GradedAlgebra([], bigraded=False, truncation=truncation + 2, name=f"min({target.name})")
        images: Dict[str, Element] = {}
        stages: List[ModelStage] = []

        for n in range(2, truncation + 1):
            stage = ModelStage(n)
            model, images = self._add_closed(model, images, target, a_window, h_a, n, stage)
            model, images = self._add_killing(model, images, target, a_window, h_a, n, stage)
            stages.append(stage)
            self.log_info(
                "Minimal model stage",
                degree=n,
                closed=len(stage.closed),
                killing=len(stage.killing),
            )

        morphism = AlgebraMorphism(model, target, images, name="phi")
        result = MinimalModel(model, morphism, stages, truncation)
        self._verify_minimal(result, a_window, h_a)
        return result

    def _add_closed(self, model, images, target, a_window, h_a, n, stage):
        if not h_a.dim(n):
            return model, images
        window = self._window(model, n)
        h_l = self._de_rham(window)
        morphism = AlgebraMorphism(model, target, images)
        columns = [
            self._classify(h_a, a_window, n, morphism.apply(e))
            for e in self._representatives(h_l, window, n)
        ]
        units = [{j: Scalar(1)} for j in range(h_a.dim(n))]
        chosen = [j - len(columns) for j in independent_columns(columns + units) if j >= len(columns)]
        if not chosen:
            return model, images
        new = [Generator(f"x{n}_{k + 1}", (n, 0)) for k in range(len(chosen))]
        grown = self._extend(model, new)
        images = dict(images)
        for g, j in zip(new, chosen):
            images[g.name] = a_window.to_element(h_a.representatives[n][j])
            stage.closed.append(g.name)
        return grown, images

    def _add_killing(self, model, images, target, a_window, h_a, n, stage):
        window = self._window(model, n + 1)
        h_l = self._de_rham(window)
        reps = self._representatives(h_l, window, n + 1)
        if not reps:
            return model, images
        morphism = AlgebraMorphism(model, target, images)
        columns = [self._classify(h_a, a_window, n + 1, morphism.apply(r)) for r in reps]
        relations = kernel(SparseMatrix.from_columns(h_a.dim(n + 1), columns))
        if not relations:
            return model, images

        differential = a_window.bicomplex.del_at((n, 0))
        new: List[Generator] = []
        cocycles: List[Element] = []
        preimages: List[Element] = []
        for k, relation in enumerate(relations):
            z = model.zero()
            for j, c in relation.items():
                z = z + reps[j] * c
            image = a_window.to_chain(morphism.apply(z)).get((n + 1, 0), {})
            found = solve(differential, [image])[0] if image else {}
            if found is None:
                raise VerificationError(f"image of a kernel class in degree {n + 1} is not exact")
            new.append(Generator(f"y{n}_{k + 1}", (n, 0)))
            cocycles.append(z)
            preimages.append(a_window.to_element({(n, 0): found}))
        grown = self._extend(model, new)
        images = dict(images)
        for g, z, a in zip(new, cocycles, preimages):
            grown.set_differential(g.name, DEL, pad(z, grown))
            images[g.name] = a
            stage.killing.append((g.name, pad(z, grown).to_text()))
        return grown, images

    def _verify_minimal(self, model: MinimalModel, a_window: AlgebraWindow, h_a: CohomologySpace) -> None:
        algebra = model.algebra
        for i, g in enumerate(algebra.generators):
            image = algebra.image(DEL, i)
            if any(word_length(m) < 2 for m in image.terms):
                raise VerificationError(f"differential of {g.name} is not decomposable")
        verdict = self.algebra_service.check_morphism(model.morphism)
        if not verdict.valid:
            raise VerificationError(f"phi is not a dga map: {verdict.message}")
        top = model.certified_degree
        window = self._window(algebra, top + 1)
        h_l = self._de_rham(window)
        for k in range(top + 2):
            reps = self._representatives(h_l, window, k)
            columns = [self._classify(h_a, a_window, k, model.morphism.apply(r)) for r in reps]
            r = len(independent_columns(columns))
            injective = r == len(columns)
            surjective = r == h_a.dim(k)
            if not injective or (k <= top and not surjective):
                raise VerificationError(f"H(phi) fails to be bijective in degree {k}")

    # Regular sequences and Koszul models

    def is_regular_sequence(self, algebra: GradedAlgebra, truncation: int) -> RegularSequenceReport:
        """Compare the quotient's Hilbert series with Hilb(k[x]) * prod(1 - t^{d_i}) up to N"""
        degrees = []
        for relation in algebra.relations:
            bds = relation.bidegrees()
            if len(bds) != 1:
                raise PreconditionError("relations must be homogeneous")
            degrees.append(sum(bds[0]))
        free = GradedAlgebra(
            algebra.generators, bigraded=algebra.bigraded, truncation=algebra.truncation
        )
        quotient = [self._total_dim(algebra, k) for k in range(truncation + 1)]
        polynomial = [self._total_dim(free, k) for k in range(truncation + 1)]

        series = sum((c * T**k for k, c in enumerate(polynomial)), T_RING.zero)
        for d in degrees:
            series = series * (1 - T**d)
        product = [int(series.coeff(T**k)) for k in range(truncation + 1)]

        mismatch = next((k for k in range(truncation + 1) if quotient[k] != product[k]), None)
        report = RegularSequenceReport(degrees, quotient, product, mismatch is None, truncation, mismatch)
        self.log_info("Regular sequence check", verdict=report.verdict, mismatch=mismatch)
        return report

    def _total_dim(self, algebra: GradedAlgebra, k: int) -> int:
        bidegrees = [(p, k - p) for p in range(k + 1)] if algebra.bigraded else [(k, 0)]
        return sum(len(algebra.basis(bd)) for bd in bidegrees)

    def _relation_names(self, algebra: GradedAlgebra, prefix: str) -> List[str]:
        names, k = [], 1
        while len(names) < len(algebra.relations):
            name = f"{prefix}{k}"
            if name not in algebra.index:
                names.append(name)
            k += 1
        return names

    def koszul_model(self, algebra: GradedAlgebra, truncation: int) -> KoszulModel:
        """k[x] ⊗ Λ(p_i) with dp_i = r_i, mapped onto the quotient"""
        if algebra.bigraded:
            raise PreconditionError("koszul_model takes a singly graded algebra")
        report = self._require_regular(algebra, truncation)
        names = self._relation_names(algebra, "p")
        generators = [Generator(g.name, g.bidegree) for g in algebra.generators]
        generators += [
            Generator(name, (d - 1, 0)) for name, d in zip(names, report.degrees)
        ]
        model = GradedAlgebra(
            generators, bigraded=False, truncation=truncation + 1, name=f"koszul({algebra.name})"
        )
        for name, relation in zip(names, algebra.relations):
            model.set_differential(name, DEL, pad(relation, model))

        images = {g.name: algebra.generator(g.name) for g in algebra.generators}
        morphism = AlgebraMorphism(model, algebra, images, name="koszul")
        top = min(truncation, algebra.truncation - 1)
        source = self._window(model, top)
        target = self._window(algebra, top)
        bicomplex_map = self.algebra_service.window_map(morphism, source, target)
        qiso = self.cohomology_service.is_quasi_isomorphism(bicomplex_map, top)
        self.log_info("Koszul model", algebra=algebra.name, qiso=qiso.verdict, degree=top)
        return KoszulModel(model, morphism, report, qiso, top, algebra)

    def _require_regular(self, algebra: GradedAlgebra, truncation: int) -> RegularSequenceReport:
        report = self.is_regular_sequence(algebra, truncation)
        if not report.verdict:
            raise PreconditionError(
                "relations are not a regular sequence",
                {"mismatch_degree": report.mismatch_degree},
            )
        return report

    def weighted_copy(self, algebra: GradedAlgebra) -> GradedAlgebra:
        """Diagonal presented algebra with weight p on generators at (p,p), σ fixing them"""
        generators = []
        for g in algebra.generators:
            p, q = g.bidegree
            if p != q or p == 0:
                raise PreconditionError(f"generator {g.name} is not at a positive diagonal bidegree")
            generators.append(Generator(g.name, g.bidegree, g.name, p))
        copy = GradedAlgebra(
            generators,
            bigraded=True,
            truncation=algebra.truncation,
            name=algebra.name,
            real_structure=True,
        )
        for relation in algebra.relations:
            if any(not c.is_real for c in relation.terms.values()):
                raise PreconditionError("relations must have real coefficients")
            copy.add_relation(Element(copy, relation.terms))
        return copy

    def bigraded_koszul_model(
        self, algebra: GradedAlgebra, truncation: int, max_weight: Optional[int] = None
    ) -> KoszulModel:
        """ℂ[X] ⊗ Λ(P_j, ∂P_j, ∂̄P_j) with i∂∂̄P_j = R_j, mapped onto the quotient.

        The window is cut at ``max_weight`` only when some P_j sits at (0,0); the
        bound used is reported on the verdict.
        """
        if not algebra.bigraded:
            raise PreconditionError("bigraded_koszul_model takes a bigraded algebra")
        target = self.weighted_copy(algebra)
        report = self._require_regular(target, truncation)
        names = self._relation_names(target, "P")

        generators = [Generator(g.name, g.bidegree, g.name, g.weight) for g in target.generators]
        i = Scalar.i()
        for name, relation in zip(names, target.relations):
            r, _ = relation.bidegree()
            weight = target.monomial_weight(next(iter(relation.terms)))
            generators += [
                Generator(name, (r - 1, r - 1), name, weight),
                Generator(f"d{name}", (r, r - 1), f"db{name}", weight),
                Generator(f"db{name}", (r - 1, r), f"d{name}", weight),
            ]
        model = GradedAlgebra(
            generators,
            bigraded=True,
            truncation=truncation + 2,
            name=f"koszul({algebra.name})",
            real_structure=True,
        )
        for name, relation in zip(names, target.relations):
            lifted = pad(relation, model)
            model.set_differential(name, DEL, model.generator(f"d{name}"))
            model.set_differential(name, DELBAR, model.generator(f"db{name}"))
            model.set_differential(f"d{name}", DELBAR, lifted * i)
            model.set_differential(f"db{name}", DEL, lifted * (-i))
        self.algebra_service.require_valid(model)

        images = {g.name: target.generator(g.name) for g in target.generators}
        morphism = AlgebraMorphism(model, target, images, name="koszul")
        top = min(truncation, target.truncation - 2)
        weight = max_weight
        if weight is None and model.needs_weight_bound:
            weight = top // 2 + 1
        source = self._window(model, top, weight)
        image = self._window(target, top, weight)
        bicomplex_map = self.algebra_service.window_map(morphism, source, image)
        bicomplex_map.real = True
        qiso = self.cohomology_service.is_pluripotential_qiso(bicomplex_map)
        qiso.max_weight = weight
        self.log_info(
            "Bigraded Koszul model", algebra=algebra.name, qiso=qiso.verdict, degree=top, max_weight=weight
        )
        return KoszulModel(model, morphism, report, qiso, top, target)

    # Homotopy

    def _linear_part(self, element: Element) -> Element:
        return Element(element.algebra, {m: c for m, c in element.terms.items() if word_length(m) == 1})

    def homotopy(self, model: MinimalModel) -> HomotopyData:
        algebra = model.algebra
        dims: Dict[object, int] = {}
        names: Dict[object, List[str]] = {}
        linear: Dict[str, Dict[str, str]] = {}
        for i, g in enumerate(algebra.generators):
            part = self._linear_part(algebra.image(DEL, i))
            if part:
                raise AlgebraValidationError(
                    f"model is not minimal: d({g.name}) has linear part {part}", witness=g.name
                )
            dims[g.degree] = dims.get(g.degree, 0) + 1
            names.setdefault(g.degree, []).append(g.name)
            linear[g.name] = {"d": "0"}
        return HomotopyData(dims, names, linear)

    def homotopy_bicomplex(self, algebra: GradedAlgebra) -> HomotopyData:
        """Generators with the linear parts of ∂ and ∂̄, as a bicomplex with its flavors"""
        if not algebra.bigraded or not algebra.is_free:
            raise PreconditionError("homotopy_bicomplex takes a free bigraded algebra")
        for i, g in enumerate(algebra.generators):
            x = algebra.generator(g.name)
            part = self._linear_part(algebra.differential(algebra.differential(x, DELBAR), DEL))
            if part:
                raise AlgebraValidationError(
                    f"model is not minimal: del delbar {g.name} has linear part {part}",
                    witness=g.name,
                )

        names: Dict[object, List[str]] = {}
        for g in algebra.generators:
            names.setdefault(g.bidegree, []).append(g.name)
        position = {
            name: (bd, k) for bd, group in names.items() for k, name in enumerate(group)
        }
        unit = {
            name: tuple(1 if j == algebra.index[name] else 0 for j in range(algebra.n))
            for name in algebra.index
        }
        by_monomial = {m: name for name, m in unit.items()}

        maps = {DEL: {}, DELBAR: {}}
        linear: Dict[str, Dict[str, str]] = {}
        for kind, shift in ((DEL, (1, 0)), (DELBAR, (0, 1))):
            for bd, group in names.items():
                target = (bd[0] + shift[0], bd[1] + shift[1])
                columns = {}
                for j, name in enumerate(group):
                    part = self._linear_part(algebra.image(kind, algebra.index[name]))
                    linear.setdefault(name, {})[kind] = part.to_text()
                    column = {}
                    for m, c in part.terms.items():
                        column[position[by_monomial[m]][1]] = c
                    columns[j] = column
                maps[kind][bd] = SparseMatrix(len(names.get(target, [])), len(group), columns)

        sigma = None
        if algebra.real_structure:
            sigma = {}
            for bd, group in names.items():
                mirror = (bd[1], bd[0])
                columns = {
                    j: {position[algebra.generators[algebra.index[name]].partner][1]: Scalar(1)}
                    for j, name in enumerate(group)
                }
                sigma[bd] = SparseMatrix(len(names.get(mirror, [])), len(group), columns)

        top = max(g.degree for g in algebra.generators)
        bicomplex = Bicomplex(
            {bd: len(group) for bd, group in names.items()},
            maps[DEL],
            maps[DELBAR],
            sigma,
            {bd: list(group) for bd, group in names.items()},
            certified_degree=top,
            name=f"pi({algebra.name})",
        )
        flavored = self.cohomology_service.all_flavors(bicomplex)
        dims = {bd: len(group) for bd, group in sorted(names.items())}
        return HomotopyData(dims, {bd: list(g) for bd, g in sorted(names.items())}, linear, bicomplex, flavored)

    # Massey products

    def triple_massey(
        self,
        algebra: GradedAlgebra,
        u: Element,
        v: Element,
        w: Element,
        bounding: Optional[Tuple[Element, Element]] = None,
    ) -> MasseyProduct:
        """⟨u,v,w⟩ represented by s·w − (−1)^{|u|} u·t with ds = uv, dt = vw"""
        if algebra.bigraded:
            total = self.algebra_service.totalize(algebra)
            u, v, w = (self.algebra_service.transfer(x, total) for x in (u, v, w))
            if bounding is not None:
                bounding = tuple(self.algebra_service.transfer(x, total) for x in bounding)
            algebra = total
        degrees = [self._degree(x) for x in (u, v, w)]
        degree = sum(degrees) - 1
        window = self._window(algebra, degree)
        for x in (u, v, w):
            if algebra.differential(x):
                raise PreconditionError(f"{x} is not closed")

        if bounding is None:
            s = self._bound(window, u * v, degrees[0] + degrees[1] - 1)
            t = self._bound(window, v * w, degrees[1] + degrees[2] - 1)
        else:
            s, t = bounding
            if algebra.differential(s) != u * v or algebra.differential(t) != v * w:
                raise PreconditionError("bounding elements do not bound uv and vw")
        sign = -1 if degrees[0] % 2 else 1
        representative = s * w - u * t * sign

        hom = self._de_rham(window)
        indeterminacy = [u * h for h in self._representatives(hom, window, degrees[1] + degrees[2] - 1)]
        indeterminacy += [h * w for h in self._representatives(hom, window, degrees[0] + degrees[1] - 1)]
        indeterminacy = [x for x in indeterminacy if x]
        coords = self._classify(hom, window, degree, representative)
        spanned = [self._classify(hom, window, degree, x) for x in indeterminacy]
        vanishes = not coords or solve(SparseMatrix.from_columns(hom.dim(degree), spanned), [coords])[0] is not None
        self.log_info("Triple Massey product", degree=degree, vanishes=vanishes)
        return MasseyProduct(representative, (s, t), indeterminacy, vanishes, degree)

    def _degree(self, element: Element) -> int:
        degrees = {sum(bd) for bd in element.bidegrees()}
        if len(degrees) > 1:
            raise PreconditionError(f"{element} is not homogeneous")
        return degrees.pop() if degrees else 0

    def _bound(self, window: AlgebraWindow, product: Element, degree: int) -> Element:
        algebra = window.algebra
        if not product:
            return algebra.zero()
        chain = window.to_chain(product)
        image = chain.get((degree + 1, 0), {})
        found = solve(window.bicomplex.del_at((degree, 0)), [image])[0]
        if found is None:
            raise PreconditionError(
                "product is not exact in cohomology", {"product": product.to_text()}
            )
        return window.to_element({(degree, 0): found})
