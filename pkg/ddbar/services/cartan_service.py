"""
Cartan service: contraction validation, the Cartan model and equivariant extension
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ddbar.core.exceptions import ContractionError, PreconditionError, VerificationError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import DEL, DELBAR, AlgebraMorphism, Element, Generator, GradedAlgebra
from ddbar.models.cartan import PART_01, PART_10, PARTS, SHIFTS, CartanModel, TCbba
from ddbar.models.linalg import rank
from ddbar.services.algebra_service import AlgebraService, Verdict
from ddbar.services.cohomology_service import CohomologyService, DdbarVerdict


@dataclass
class ExtensionStage:
    stage: int
    corrections: List[Tuple[str, str]] = field(default_factory=list)


@dataclass
class ExtensionResult:
    """d_T-closed lift of θ, or the stage at which an obstruction class appeared"""

    theta: Element
    extended: Optional[Element]
    stages: List[ExtensionStage]
    ddbar_holds: bool
    certificate: Optional[Dict[str, object]] = None

    @property
    def success(self) -> bool:
        return self.extended is not None


@dataclass
class CartanVerdict:
    ddbar: DdbarVerdict
    surjective: bool
    window: int
    failures: List[Dict[str, int]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """Surjectivity of the restriction forces the ∂∂̄-property"""
        return self.ddbar.verdict or not self.surjective


class CartanService(LoggerMixin):
    """Service for torus-equivariant Cartan models"""

    def __init__(self):
        self.algebra_service = AlgebraService()
        self.cohomology_service = CohomologyService()

    # Validation

    def validate(self, tcbba: TCbba) -> Verdict:
        algebra = tcbba.algebra
        if not algebra.bigraded:
            return Verdict(False, None, "contractions need a bigraded algebra")
        for (name, a, part), value in sorted(tcbba.contractions.items()):
            if name not in algebra.index:
                return Verdict(False, name, f"contraction on unknown generator {name}")
            if not 0 <= a < tcbba.rank or part not in PARTS:
                return Verdict(False, name, f"contraction index {a + 1} or part {part} out of range")
            g = algebra.generators[algebra.index[name]]
            expected = (g.bidegree[0] + SHIFTS[part][0], g.bidegree[1] + SHIFTS[part][1])
            if value and value.bidegrees() != [expected]:
                return Verdict(False, name, f"iota_{a + 1}^{part}({name}) is not of bidegree {expected}")

        checked = 0
        for g in algebra.generators:
            x = algebra.generator(g.name)
            failure = self._invariance(tcbba, x) or self._anticommutation(tcbba, x)
            if failure:
                return Verdict(False, g.name, f"{failure} on {g.name}", checked)
            if algebra.real_structure:
                for a in range(tcbba.rank):
                    lhs = algebra.conjugate(tcbba.contract(a, PART_10, algebra.conjugate(x)))
                    if lhs != tcbba.contract(a, PART_01, x):
                        return Verdict(False, g.name, f"sigma iota_{a + 1} sigma != iota_{a + 1} on {g.name}", checked)
            checked += 1
        for k, relation in enumerate(algebra.relations):
            for a in range(tcbba.rank):
                if tcbba.contract_total(a, relation):
                    return Verdict(False, f"relation {k + 1}", "contraction does not preserve the ideal", checked)
        self.log_debug("Validated contractions", algebra=algebra.name, checks=checked)
        return Verdict(True, None, "valid", checked)

    def _invariance(self, tcbba: TCbba, x: Element) -> str:
        algebra = tcbba.algebra

        def bracket(kind: str, index: int, part: str) -> Element:
            return tcbba.contract(index, part, algebra.differential(x, kind)) + algebra.differential(
                tcbba.contract(index, part, x), kind
            )

        for a in range(tcbba.rank):
            if bracket(DEL, a, PART_01):
                return f"del iota_{a + 1}^01 + iota_{a + 1}^01 del != 0"
            if bracket(DELBAR, a, PART_10):
                return f"delbar iota_{a + 1}^10 + iota_{a + 1}^10 delbar != 0"
            if bracket(DEL, a, PART_10) + bracket(DELBAR, a, PART_01):
                return f"d iota_{a + 1} + iota_{a + 1} d has a nonzero (0,0) part"
        return ""

    def _anticommutation(self, tcbba: TCbba, x: Element) -> str:
        def twice(a: int, p: str, b: int, q: str) -> Element:
            return tcbba.contract(a, p, tcbba.contract(b, q, x))

        for a in range(tcbba.rank):
            for b in range(a, tcbba.rank):
                for p, q in ((PART_10, PART_10), (PART_01, PART_01)):
                    if twice(a, p, b, q) + twice(b, q, a, p):
                        return f"iota_{a + 1} iota_{b + 1} + iota_{b + 1} iota_{a + 1} != 0"
                mixed = (
                    twice(a, PART_10, b, PART_01)
                    + twice(a, PART_01, b, PART_10)
                    + twice(b, PART_10, a, PART_01)
                    + twice(b, PART_01, a, PART_10)
                )
                if mixed:
                    return f"iota_{a + 1} iota_{b + 1} + iota_{b + 1} iota_{a + 1} != 0"
        return ""

    def require_valid(self, tcbba: TCbba) -> TCbba:
        verdict = self.validate(tcbba)
        if not verdict.valid:
            raise ContractionError(verdict.message, witness=verdict.witness)
        return tcbba

    # Construction

    def cartan_model(self, tcbba: TCbba) -> CartanModel:
        """C = R ⊗ A with ∂_T = ∂ − Σ ξ^a ι^{01}_a and ∂̄_T = ∂̄ − Σ ξ^a ι^{10}_a"""
        self.require_valid(tcbba)
        algebra = tcbba.algebra
        xi = []
        k = 1
        while len(xi) < tcbba.rank:
            if f"xi{k}" not in algebra.index:
                xi.append(f"xi{k}")
            k += 1
        weight = 1 if algebra.weighted else None
        real = algebra.real_structure
        generators = [Generator(name, (1, 1), name if real else None, weight) for name in xi]
        cartan = GradedAlgebra(
            generators + algebra.generators,
            bigraded=True,
            truncation=algebra.truncation,
            name=f"C_T({algebra.name})",
            real_structure=real,
        )
        restriction = AlgebraMorphism(
            cartan, algebra, {g.name: algebra.generator(g.name) for g in algebra.generators}, "restriction"
        )
        model = CartanModel(tcbba, cartan, restriction, xi)
        for relation in algebra.relations:
            cartan.add_relation(model.lift(relation))

        for i, g in enumerate(algebra.generators):
            x = algebra.generator(g.name)
            for kind, part in ((DEL, PART_01), (DELBAR, PART_10)):
                image = model.lift(algebra.image(kind, i))
                for a, name in enumerate(xi):
                    image = image - cartan.generator(name) * model.lift(tcbba.contract(a, part, x))
                if image:
                    cartan.set_differential(g.name, kind, image)

        verdict = self.algebra_service.validate(cartan)
        if not verdict.valid:
            raise VerificationError(f"Cartan differential fails: {verdict.message}")
        self.log_info("Built Cartan model", algebra=algebra.name, rank=tcbba.rank)
        return model

    # Equivariant extension

    def extend_to_equivariant(
        self, model: CartanModel, theta: Element, max_weight: Optional[int] = None
    ) -> ExtensionResult:
        """Correct 1⊗θ stage by stage until it is d_T-closed"""
        algebra = model.tcbba.algebra
        theta = algebra.normal_form(theta)
        try:
            bd = theta.bidegree()
        except ValueError:
            raise PreconditionError("theta is not of pure bidegree")
        if bd is None:
            return ExtensionResult(theta, model.algebra.zero(), [], True)
        if algebra.differential(theta, DEL) or algebra.differential(theta, DELBAR):
            raise PreconditionError("theta is not d-closed", {"theta": theta.to_text()})

        p, q = bd
        window = self.algebra_service.underlying_bicomplex(algebra, p + q, max_weight)
        ddbar_holds = self.cohomology_service.ddbar_property(window.bicomplex).verdict
        if not ddbar_holds:
            self.log_warning("Extension attempted on a window without the ddbar-property", bidegree=(p, q))

        cartan = model.algebra
        current = model.lift(theta)
        bound = (p + q + 1) // 2
        stages: List[ExtensionStage] = []
        for k in range(1, bound + 2):
            remainder = cartan.differential(current)
            if not remainder:
                break
            parts = model.split(remainder)
            lowest = min(sum(f) for f in parts)
            if k > bound or lowest != k or p < k or q < k:
                certificate = {
                    "stage": k,
                    "reason": "obstruction survives the stage bound" if k > bound else "unexpected remainder",
                    "remainder": remainder.to_text(),
                }
                return ExtensionResult(theta, None, stages, ddbar_holds, certificate)
            stage = ExtensionStage(k)
            correction = cartan.zero()
            for f in sorted((f for f in parts if sum(f) == k), reverse=True):
                eta = parts[f]
                target = (p - k, q - k)
                solved = self.cohomology_service.solve_d_bidegree(
                    window.bicomplex, target, window.to_chain(eta), strict=False
                )
                monomial = model.xi_monomial(f)
                if solved.beta is None:
                    certificate = {
                        "stage": k,
                        "xi_monomial": monomial.to_text(),
                        "class": eta.to_text(),
                        "reason": "class is not d-exact in pure bidegree",
                    }
                    self.log_info("Extension obstructed", stage=k)
                    return ExtensionResult(theta, None, stages, ddbar_holds, certificate)
                beta = window.to_element({target: solved.beta})
                correction = correction - monomial * model.lift(beta)
                stage.corrections.append((monomial.to_text(), beta.to_text()))
            current = current + correction
            stages.append(stage)
            self.log_debug("Extension stage", stage=k, corrections=len(stage.corrections))

        if cartan.differential(current, DEL) or cartan.differential(current, DELBAR):
            raise VerificationError("extension is not d_T-closed")
        if model.restriction.apply(current) != theta:
            raise VerificationError("extension does not restrict to theta")
        self.log_info("Extended to equivariant class", stages=len(stages))
        return ExtensionResult(theta, current, stages, ddbar_holds)

    # Verdicts

    def cartan_ddbar_check(self, model: CartanModel, window: int, max_weight: Optional[int] = None) -> CartanVerdict:
        source = self.algebra_service.underlying_bicomplex(model.algebra, window, max_weight)
        target = self.algebra_service.underlying_bicomplex(model.tcbba.algebra, window, max_weight)
        ddbar = self.cohomology_service.ddbar_property(source.bicomplex)
        restriction = self.algebra_service.window_map(model.restriction, source, target)
        induced = self.cohomology_service.induced_map(restriction, "dR")
        failures = []
        for k, matrix in sorted(induced.items()):
            if k > window:
                continue
            r = rank([matrix.column(j) for j in range(matrix.ncols)])
            if r != matrix.nrows:
                failures.append({"degree": k, "rank": r, "target_dim": matrix.nrows})
        verdict = CartanVerdict(ddbar, not failures, window, failures)
        self.log_info(
            "Cartan ddbar check",
            ddbar=ddbar.verdict,
            surjective=verdict.surjective,
            consistent=verdict.consistent,
        )
        return verdict
