"""
Toric service: fan validation, Stanley-Reisner presentations, Betti numbers and the ⊗S extension
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence

from sympy import ZZ, Matrix, binomial, igcd
from sympy.polys.rings import ring

from ddbar.core.exceptions import FanValidationError, PreconditionError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import DEL, DELBAR, AlgebraMorphism, Element, Generator, GradedAlgebra
from ddbar.models.fan import Fan, StanleyReisnerData
from ddbar.models.scalars import Scalar
from ddbar.services.algebra_service import AlgebraService
from ddbar.services.cohomology_service import CohomologyService, QisoVerdict
from ddbar.services.model_service import pad

S_RING, S = ring("s", ZZ)


@dataclass
class FreenessReport:
    verdict: bool
    truncation: int
    equivariant_series: List[int]
    predicted_series: List[int]
    mismatch_degree: Optional[int] = None


@dataclass
class SplittingReport:
    """Projection A⊗S → A/(images) checked as a pluripotential quasi-isomorphism"""

    extended: GradedAlgebra
    quotient: GradedAlgebra
    qiso: QisoVerdict
    window: int
    max_weight: int
    details: Dict[str, object] = field(default_factory=dict)


def tau(i: int) -> str:
    return f"tau{i + 1}"


class ToricService(LoggerMixin):
    """Service for fan combinatorics and toric cohomology rings"""

    def __init__(self):
        self.algebra_service = AlgebraService()
        self.cohomology_service = CohomologyService()

    # Fans

    def validate_fan(self, fan: Fan) -> Fan:
        if fan.rank < 1:
            raise FanValidationError("rank must be positive")
        for k, ray in enumerate(fan.rays):
            if len(ray) != fan.rank:
                raise FanValidationError(f"ray {k + 1} has length {len(ray)}", {"ray": k + 1})
            g = 0
            for x in ray:
                g = igcd(g, x)
            if g != 1:
                raise FanValidationError(f"ray {k + 1} is not primitive", {"ray": k + 1})
        seen = set()
        for cone in fan.cones:
            labels = sorted(i + 1 for i in cone)
            if cone in seen:
                raise FanValidationError(f"duplicate cone {labels}", {"cone": labels})
            seen.add(cone)
            if any(i < 0 or i >= fan.m for i in cone):
                raise FanValidationError(f"cone {labels} references a missing ray", {"cone": labels})
            if not cone or len(cone) > fan.rank or not self._is_unimodular(fan, cone):
                raise FanValidationError(f"cone {labels} is not smooth", {"cone": labels})
        if fan.complete:
            self._check_walls(fan)
        self.log_debug("Validated fan", fan=fan.name, rays=fan.m, cones=len(fan.cones))
        return fan

    def _is_unimodular(self, fan: Fan, cone) -> bool:
        rows = Matrix([list(fan.rays[i]) for i in sorted(cone)])
        k = rows.rows
        g = 0
        for cols in combinations(range(fan.rank), k):
            g = igcd(g, int(rows.extract(list(range(k)), list(cols)).det()))
        return g == 1

    def _check_walls(self, fan: Fan) -> None:
        n = fan.rank
        for cone in fan.cones:
            if len(cone) != n:
                raise FanValidationError(
                    f"complete fan has a maximal cone of dimension {len(cone)}",
                    {"cone": sorted(i + 1 for i in cone)},
                )
        walls: Dict[frozenset, int] = {}
        for cone in fan.cones:
            for wall in combinations(sorted(cone), n - 1):
                walls[frozenset(wall)] = walls.get(frozenset(wall), 0) + 1
        for wall, count in sorted(walls.items(), key=lambda item: sorted(item[0])):
            if count != 2:
                labels = sorted(i + 1 for i in wall)
                raise FanValidationError(
                    f"wall {labels} lies in {count} maximal cones, expected 2", {"wall": labels}
                )

    def minimal_nonfaces(self, fan: Fan) -> StanleyReisnerData:
        faces = fan.faces()
        found = []
        largest = max((len(c) for c in fan.cones), default=0)
        for k in range(1, min(fan.m, largest + 1) + 1):
            for subset in combinations(range(fan.m), k):
                key = frozenset(subset)
                if key in faces:
                    continue
                if all(frozenset(sub) in faces for sub in combinations(subset, k - 1)):
                    found.append(subset)
        return StanleyReisnerData(found)

    # Rings

    def _tau_algebra(self, fan: Fan, truncation: int, name: str) -> GradedAlgebra:
        generators = [Generator(tau(i), (1, 1), tau(i), 1) for i in range(fan.m)]
        return GradedAlgebra(
            generators, bigraded=True, truncation=truncation, name=name, real_structure=True
        )

    def _monomial(self, algebra: GradedAlgebra, indices) -> Element:
        exps = [0] * algebra.n
        for i in indices:
            exps[i] = 1
        return Element(algebra, {tuple(exps): Scalar(1)})

    def equivariant_cohomology(self, fan: Fan, truncation: Optional[int] = None) -> GradedAlgebra:
        """ℂ[τ_1..τ_m] modulo the products over minimal non-faces"""
        self.validate_fan(fan)
        truncation = truncation if truncation is not None else 2 * fan.rank + 2
        algebra = self._tau_algebra(fan, truncation, f"H_T({fan.name})")
        for face in self.minimal_nonfaces(fan).nonfaces:
            algebra.add_relation(self._monomial(algebra, face))
        return algebra

    def linear_forms(self, fan: Fan, algebra: GradedAlgebra) -> List[Element]:
        """θ_j = Σ_i ⟨e_j, u_i⟩ τ_i"""
        forms = []
        for j in range(fan.rank):
            form = algebra.zero()
            for i, ray in enumerate(fan.rays):
                if ray[j]:
                    form = form + algebra.generator(tau(i)) * ray[j]
            forms.append(form)
        return forms

    def ordinary_cohomology(self, fan: Fan, truncation: Optional[int] = None) -> GradedAlgebra:
        if not fan.complete:
            raise PreconditionError("ordinary cohomology needs a complete fan")
        algebra = self.equivariant_cohomology(fan, truncation)
        algebra.name = f"H({fan.name})"
        if Matrix([list(r) for r in fan.rays]).rank() < fan.rank:
            raise PreconditionError("linear forms are rank-deficient: degenerate fan")
        for form in self.linear_forms(fan, algebra):
            algebra.add_relation(form)
        return algebra

    def betti_numbers(self, algebra: GradedAlgebra, top: int) -> List[int]:
        return [len(algebra.basis((k // 2, k // 2))) if k % 2 == 0 else 0 for k in range(top + 1)]

    def ordinary_betti(self, fan: Fan) -> List[int]:
        betti = self.betti_numbers(self.ordinary_cohomology(fan), 2 * fan.rank)
        self.log_info("Ordinary cohomology", fan=fan.name, betti=betti)
        return betti

    def h_vector(self, fan: Fan) -> List[int]:
        """h_i from Σ f_{i-1} (t-1)^{n-i}, an oracle independent of the ring"""
        _, t = ring("t", ZZ)
        n = fan.rank
        counts = fan.face_counts()
        poly = sum((counts[i] * (t - 1) ** (n - i) for i in range(n + 1)), t.ring.zero)
        return [int(poly.coeff(t ** (n - i))) for i in range(n + 1)]

    def h_vector_betti(self, fan: Fan) -> List[int]:
        h = self.h_vector(fan)
        betti = []
        for k in range(2 * fan.rank + 1):
            betti.append(h[k // 2] if k % 2 == 0 else 0)
        return betti

    # Freeness

    def equivariant_dims(self, fan: Fan, truncation: int) -> List[int]:
        """Hilbert function of the Stanley-Reisner ring: monomials with face support"""
        free = self._tau_algebra(fan, truncation, "free")
        faces = fan.faces()
        dims = []
        for k in range(truncation + 1):
            if k % 2:
                dims.append(0)
                continue
            monomials = free.monomials((k // 2, k // 2))
            dims.append(
                sum(1 for m in monomials if frozenset(i for i, e in enumerate(m) if e) in faces)
            )
        return dims

    def freeness_check(self, fan: Fan, truncation: int) -> FreenessReport:
        """Hilb(H_T) = Hilb(H)·(1 − t²)^{−n} coefficientwise up to N"""
        self.validate_fan(fan)
        equivariant = self.equivariant_dims(fan, truncation)
        betti = self.ordinary_betti(fan)
        half = truncation // 2
        hilbert = sum((b * S ** (k // 2) for k, b in enumerate(betti) if k % 2 == 0), S_RING.zero)
        inverse = sum(
            (int(binomial(j + fan.rank - 1, fan.rank - 1)) * S**j for j in range(half + 1)),
            S_RING.zero,
        )
        product = hilbert * inverse
        predicted = []
        for k in range(truncation + 1):
            predicted.append(int(product.coeff(S ** (k // 2))) if k % 2 == 0 else 0)
        mismatch = next((k for k in range(truncation + 1) if equivariant[k] != predicted[k]), None)
        report = FreenessReport(mismatch is None, truncation, equivariant, predicted, mismatch)
        self.log_info("Freeness check", fan=fan.name, verdict=report.verdict)
        return report

    # Contractible extension

    def adjoin_contractible(
        self, algebra: GradedAlgebra, images: Sequence[Element], prefix: str = "s"
    ) -> GradedAlgebra:
        """A ⊗ Λ(s_j, ∂s_j, ∂̄s_j) with i∂∂̄s_j = g_j"""
        if not algebra.bigraded or not algebra.weighted:
            raise PreconditionError("adjoin_contractible needs a weighted bigraded algebra")
        names = []
        generators = list(algebra.generators)
        weights = []
        for j, g in enumerate(images):
            g = algebra.normal_form(g)
            if g and g.bidegrees() != [(1, 1)]:
                raise PreconditionError(f"image {j + 1} is not of bidegree (1,1)")
            if algebra.differential(g, DEL) or algebra.differential(g, DELBAR):
                raise PreconditionError(f"image {j + 1} is not closed", {"image": g.to_text()})
            found = {algebra.monomial_weight(m) for m in g.terms} or {1}
            if len(found) > 1:
                raise PreconditionError(f"image {j + 1} is not weight-homogeneous")
            weight = found.pop()
            name = f"{prefix}{j + 1}"
            real = algebra.real_structure
            generators += [
                Generator(name, (0, 0), name if real else None, weight),
                Generator(f"d{name}", (1, 0), f"db{name}" if real else None, weight),
                Generator(f"db{name}", (0, 1), f"d{name}" if real else None, weight),
            ]
            names.append(name)
            weights.append(weight)

        extended = GradedAlgebra(
            generators,
            bigraded=True,
            truncation=algebra.truncation,
            name=f"{algebra.name}(x)S",
            real_structure=algebra.real_structure,
        )
        for relation in algebra.relations:
            extended.add_relation(pad(relation, extended))
        for i, g in enumerate(algebra.generators):
            for kind in (DEL, DELBAR):
                image = algebra.image(kind, i)
                if image:
                    extended.set_differential(g.name, kind, pad(image, extended))
        i_unit = Scalar.i()
        for name, g in zip(names, images):
            lifted = pad(algebra.normal_form(g), extended)
            extended.set_differential(name, DEL, extended.generator(f"d{name}"))
            extended.set_differential(name, DELBAR, extended.generator(f"db{name}"))
            if lifted:
                extended.set_differential(f"d{name}", DELBAR, lifted * i_unit)
                extended.set_differential(f"db{name}", DEL, lifted * (-i_unit))
        self.algebra_service.require_valid(extended)
        self.log_info("Adjoined contractible factor", algebra=algebra.name, generators=len(names))
        return extended

    def projection(self, extended: GradedAlgebra, quotient: GradedAlgebra) -> AlgebraMorphism:
        """Generators shared by name map to themselves, the S generators to zero"""
        images = {
            g.name: quotient.generator(g.name) for g in extended.generators if g.name in quotient.index
        }
        return AlgebraMorphism(extended, quotient, images, name="projection")

    def splitting_check(self, fan: Fan, window: int, max_weight: Optional[int] = None) -> SplittingReport:
        """H_T ⊗ S with ∂∂̄s_j ~ θ_j projects quasi-isomorphically onto H"""
        truncation = window + 2
        equivariant = self.equivariant_cohomology(fan, truncation)
        extended = self.adjoin_contractible(equivariant, self.linear_forms(fan, equivariant))
        quotient = self.ordinary_cohomology(fan, truncation)
        morphism = self.projection(extended, quotient)
        verdict = self.algebra_service.check_morphism(morphism)
        verdict.raise_for_failure()
        weight = max_weight if max_weight is not None else (window + 2) // 2
        source = self.algebra_service.underlying_bicomplex(extended, window, weight)
        target = self.algebra_service.underlying_bicomplex(quotient, window, weight)
        bicomplex_map = self.algebra_service.window_map(morphism, source, target)
        bicomplex_map.real = True
        qiso = self.cohomology_service.is_pluripotential_qiso(bicomplex_map)
        qiso.max_weight = weight
        return SplittingReport(extended, quotient, qiso, window, weight)
