"""
Worked fixtures: the counterexample family A_λ, its mixed-Hodge extension class and
the strong-formality certificate of the SL3 flag algebra
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ddbar.core.exceptions import VerificationError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import (
    DEL,
    DELBAR,
    AlgebraMorphism,
    Element,
    Generator,
    GradedAlgebra,
)
from ddbar.models.bicomplex import Chain, Flavor
from ddbar.models.linalg import SparseMatrix, Vector, QuotientSpace, kernel, rank, solve
from ddbar.models.scalars import HALF, FieldTag, Scalar
from ddbar.services.algebra_service import AlgebraService
from ddbar.services.cohomology_service import CohomologyService, DdbarVerdict, QisoVerdict
from ddbar.services.model_service import HomotopyData, MasseyProduct, MinimalModel, ModelService, word_length

# Cohomology ring of CP3 # CP3 # (S2 x S4); the degree-8 relations are forced by dimension 6
H_GENERATORS: Sequence[Tuple[str, int]] = (("alpha", 2), ("x", 2), ("y", 2), ("beta", 4))
H_RELATIONS: Sequence[str] = (
    "alpha^2",
    "x*alpha",
    "y*alpha",
    "x*y",
    "x*beta",
    "y*beta",
    "beta^2",
    "alpha*beta - x^3",
    "x^3 - y^3",
    "x^4",
    "y^4",
)
H_TRUNCATION = 8

# Minimal model generators through degree 5 with their differentials
V_GENERATORS: Sequence[Tuple[str, int]] = (
    ("alpha", 2), ("x", 2), ("y", 2),
    ("a", 3), ("b", 3), ("c", 3), ("e", 3),
    ("beta", 4), ("p1", 4), ("p2", 4), ("p3", 4), ("p4", 4),
) + tuple((f"q{k}", 5) for k in range(1, 12))
V_DIFFERENTIALS: Dict[str, str] = {
    "a": "alpha^2",
    "b": "x*alpha",
    "c": "y*alpha",
    "e": "x*y",
    "p1": "x*a - alpha*b",
    "p2": "y*a - alpha*c",
    "p3": "y*b - alpha*e",
    "p4": "x*c - alpha*e",
}
KERNEL_COCYCLES: Sequence[str] = (
    "alpha*beta - x^3",
    "alpha*beta - y^3",
    "x*beta",
    "y*beta",
    "a*b + alpha*p1",
    "a*c + alpha*p2",
    "b*c + alpha*p3 - alpha*p4",
    "a*e + x*p2 + alpha*p4",
    "b*e + x*p3",
    "c*e + y*p4",
    "y*p1 - x*p2 + alpha*p3 - alpha*p4",
)
V_DIFFERENTIALS.update({f"q{k + 1}": v for k, v in enumerate(KERNEL_COCYCLES)})
V_TRUNCATION = 8

# Expected (closed, killing) generator counts per degree of the minimal model of H
EXPECTED_STAGES: Dict[int, Tuple[int, int]] = {2: (3, 0), 3: (0, 4), 4: (1, 4), 5: (0, 11)}

# Triple Massey products <u,v,w> of degree-2 classes with defining systems ds = uv, dt = vw
MASSEY_TRIPLES: Sequence[Tuple[str, str, str, str, str]] = (
    ("x", "alpha", "alpha", "b", "a"),
    ("y", "alpha", "alpha", "c", "a"),
    ("x", "alpha", "y", "b", "c"),
)

# ξ = (ψ_λ - φ)/λ on the degree-4 generators
XI: Dict[str, str] = {"p1": "-y^2", "p2": "-x^2", "p3": "beta", "p4": "beta"}

# Bigraded model ΛW: X generators at (1,1), their killing pairs and the P/R layer
W_CLOSED: Sequence[str] = ("alpha", "x", "y")
W_KILLED: Dict[str, str] = {"A": "alpha^2", "B": "x*alpha", "C": "y*alpha", "E": "x*y"}
W_PRODUCTS: Sequence[str] = ("x*A - alpha*B", "y*A - alpha*C", "y*B - alpha*E", "x*C - alpha*E")
W_TRUNCATION = 6
W_WINDOW = 4

# ψ̃_0 on generators; ψ̃_λ adds λξ on the degree-4 generators
PSI_TILDE: Dict[str, str] = {
    "alpha": "alpha",
    "x": "x",
    "y": "y",
    "beta": "beta",
    "a": "i/2*(dbA - dA)",
    "b": "i/2*(dbB - dB)",
    "c": "i/2*(dbC - dC)",
    "e": "i/2*(dbE - dE)",
    "p1": "1/2*R1",
    "p2": "1/2*R2",
    "p3": "1/2*R3",
    "p4": "1/2*R4",
}

FLAG_RELATIONS: Sequence[str] = ("x1 + x2 + x3", "x1*x2 + x1*x3 + x2*x3", "x1*x2*x3")


@dataclass
class KernelCheck:
    """Listed cocycles against the kernel of H(φ) in one degree"""

    degree: int
    kernel_dim: int
    rank: int
    listed: int
    closed: bool

    @property
    def verdict(self) -> bool:
        return self.closed and self.rank == self.listed == self.kernel_dim


@dataclass
class MinimalModelReport:
    model: MinimalModel
    dimension_table: Dict[int, int]
    stage_counts: Dict[int, Tuple[int, int]]
    kernel_checks: List[KernelCheck]
    degree6_kernel_dim: int

    @property
    def verdict(self) -> bool:
        return all(check.verdict for check in self.kernel_checks)


@dataclass
class MorphismReport:
    morphism: AlgebraMorphism
    valid: bool
    witness: Optional[str] = None
    message: str = ""


@dataclass
class BigradedModelReport:
    algebra: GradedAlgebra
    valid: bool
    qiso: QisoVerdict
    window: int


@dataclass
class RationalTriple:
    """Rational model, real cbba and the comparison map between them"""

    rational: GradedAlgebra
    complex: GradedAlgebra
    comparison: AlgebraMorphism
    certified_degree: int
    rational_coefficients: bool
    cohomology_iso: bool


@dataclass
class ObstructionReport:
    lam: Scalar
    coefficients: Dict[str, Scalar]
    rational: Dict[str, bool]
    homotopy_dims: Dict[str, int]
    kernel_dim: int
    kernel_is_r: bool
    same_cohomology_map: bool
    obstructed: bool


@dataclass
class ExtensionClassReport:
    lam: Scalar
    entries: Dict[str, Scalar]
    projection: Dict[str, Scalar]
    cokernel_dim: int
    trivial: bool


@dataclass
class PipelineReport:
    lam: Scalar
    betti: List[int]
    minimal_model: MinimalModelReport
    psi: MorphismReport
    psi_tilde: MorphismReport
    lambda_w: BigradedModelReport
    triple: RationalTriple
    obstruction: ObstructionReport
    massey: Dict[str, MasseyProduct] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return (
            self.minimal_model.verdict
            and self.psi.valid
            and self.psi_tilde.valid
            and self.lambda_w.valid
            and self.lambda_w.qiso.verdict
            and self.triple.cohomology_iso
            and all(product.vanishes for product in self.massey.values())
        )


@dataclass
class FlagCertificate:
    betti: List[int]
    koszul_qiso: QisoVerdict
    bigraded_qiso: QisoVerdict
    ddbar: DdbarVerdict
    comparison_valid: bool
    comparison_real: bool
    square_commutes: bool
    failures: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return (
            self.koszul_qiso.verdict
            and self.bigraded_qiso.verdict
            and self.ddbar.verdict
            and self.comparison_valid
            and self.comparison_real
            and self.square_commutes
        )


class ReplicationService(LoggerMixin):
    """Service reproducing the worked computations end to end"""

    def __init__(self):
        self.algebra_service = AlgebraService()
        self.cohomology_service = CohomologyService()
        self.model_service = ModelService()

    # H and its minimal model

    def build_H(self, bigraded: bool = False, order: Optional[Sequence[int]] = None) -> GradedAlgebra:
        """Presented cohomology ring; bigraded puts degree 2k at (k,k) with σ fixing generators"""
        spec = list(H_GENERATORS)
        if order is not None:
            spec = [spec[j] for j in order]
        if bigraded:
            generators = [Generator(name, (d // 2, d // 2), name) for name, d in spec]
        else:
            generators = [Generator(name, (d, 0)) for name, d in spec]
        algebra = GradedAlgebra(
            generators,
            bigraded=bigraded,
            truncation=H_TRUNCATION,
            name="H_C" if bigraded else "H",
            real_structure=bigraded,
        )
        for text in H_RELATIONS:
            algebra.add_relation(algebra.parse(text))
        return self.algebra_service.require_valid(algebra)

    def betti_numbers(self, algebra: GradedAlgebra, top: int = 6) -> List[int]:
        return [
            sum(len(algebra.basis((p, k - p))) for p in range(k + 1))
            if algebra.bigraded
            else len(algebra.basis((k, 0)))
            for k in range(top + 1)
        ]

    def named_model(self, top_degree: int = 5) -> GradedAlgebra:
        """ΛV on the named generators of degree at most ``top_degree``"""
        generators = [Generator(name, (d, 0)) for name, d in V_GENERATORS if d <= top_degree]
        algebra = GradedAlgebra(
            generators, bigraded=False, truncation=V_TRUNCATION, name=f"LambdaV<={top_degree}"
        )
        for name, text in V_DIFFERENTIALS.items():
            if name in algebra.index:
                algebra.set_differential(name, DEL, algebra.parse(text))
        return self.algebra_service.require_valid(algebra)

    def phi(self, source: GradedAlgebra, target: GradedAlgebra) -> AlgebraMorphism:
        images = {name: target.generator(name) for name in ("alpha", "x", "y", "beta") if name in source.index}
        return AlgebraMorphism(source, target, images, "phi")

    def build_V(self, truncation: int = 5, order: Optional[Sequence[int]] = None) -> MinimalModelReport:
        h = self.build_H(order=order)
        model = self.model_service.minimal_model(h, truncation)
        counts = {stage.degree: (len(stage.closed), len(stage.killing)) for stage in model.stages}
        for degree, expected in EXPECTED_STAGES.items():
            if degree <= truncation and counts.get(degree, (0, 0)) != expected:
                raise VerificationError(
                    f"minimal model mismatch in degree {degree}",
                    {"degree": degree, "found": list(counts.get(degree, (0, 0))), "expected": list(expected)},
                )
        degree6 = counts.get(5, (0, 0))[1]

        h = self.build_H()
        checks = [
            self._kernel_check(self.named_model(2), h, 4, [V_DIFFERENTIALS[n] for n in "abce"]),
            self._kernel_check(self.named_model(3), h, 5, [V_DIFFERENTIALS[f"p{k}"] for k in range(1, 5)]),
            self._kernel_check(self.named_model(4), h, 6, list(KERNEL_COCYCLES)),
        ]
        for check in checks:
            if not check.verdict:
                raise VerificationError(
                    f"listed cocycles do not span the kernel in degree {check.degree}",
                    {"degree": check.degree, "kernel_dim": check.kernel_dim, "rank": check.rank},
                )
        report = MinimalModelReport(model, model.dimension_table(), counts, checks, degree6)
        self.log_info("Minimal model of H verified", dims=report.dimension_table, kernel6=degree6)
        return report

    def _kernel_check(self, source: GradedAlgebra, h: GradedAlgebra, degree: int, cocycles: List[str]) -> KernelCheck:
        phi = self.phi(source, h)
        window = self.algebra_service.underlying_bicomplex(source, degree)
        target = self.algebra_service.underlying_bicomplex(h, degree)
        hom = self.cohomology_service.cohomology(window.bicomplex, Flavor.DR, validate=False)
        hom_h = self.cohomology_service.cohomology(target.bicomplex, Flavor.DR, validate=False)
        columns = []
        for chain in hom.representatives.get(degree, []):
            image = phi.apply(window.to_element(chain))
            coords = self.cohomology_service.classify(hom_h, degree, target.to_chain(image))
            columns.append(coords or {})
        kernel_dim = hom.dim(degree) - rank(columns)

        elements = [source.parse(text) for text in cocycles]
        closed = all(not source.differential(v) and not phi.apply(v) for v in elements)
        classes = [self.cohomology_service.classify(hom, degree, window.to_chain(v)) or {} for v in elements]
        return KernelCheck(degree, kernel_dim, rank(classes), len(elements), closed)

    # ψ_λ

    def build_psi(self, lam: Scalar, xi: Optional[Dict[str, str]] = None) -> MorphismReport:
        """ψ_λ = φ + λξ from ΛV (through degree 5) to H over the coefficient field of λ"""
        source = self.named_model(5)
        h = self.build_H()
        morphism = self.phi(source, h)
        morphism.name = "psi"
        for name, text in (xi or XI).items():
            morphism.images[name] = h.parse(text) * lam
        verdict = self.algebra_service.check_morphism(morphism)
        self.log_info("psi checked", lam=lam, valid=verdict.valid, witness=verdict.witness)
        return MorphismReport(morphism, verdict.valid, verdict.witness, verdict.message)

    # ΛW and ψ̃_λ

    def build_W(self) -> GradedAlgebra:
        generators = [Generator(name, (1, 1), name) for name in list(W_CLOSED) + list(W_KILLED)]
        generators += [Generator(f"d{n}", (2, 1), f"db{n}") for n in W_KILLED]
        generators += [Generator(f"db{n}", (1, 2), f"d{n}") for n in W_KILLED]
        generators.append(Generator("beta", (2, 2), "beta"))
        for k in range(1, 5):
            generators += [
                Generator(f"P{k}", (2, 1), f"Pb{k}"),
                Generator(f"Pb{k}", (1, 2), f"P{k}"),
                Generator(f"R{k}", (2, 2), f"R{k}"),
                Generator(f"dP{k}", (3, 1), f"dbPb{k}"),
                Generator(f"dbPb{k}", (1, 3), f"dP{k}"),
            ]
        w = GradedAlgebra(
            generators, bigraded=True, truncation=W_TRUNCATION, name="LambdaW", real_structure=True
        )
        i = Scalar.i()
        for name, text in W_KILLED.items():
            target = w.parse(text)
            w.set_differential(name, DEL, w.generator(f"d{name}"))
            w.set_differential(name, DELBAR, w.generator(f"db{name}"))
            w.set_differential(f"d{name}", DELBAR, target * i)
            w.set_differential(f"db{name}", DEL, target * (-i))
        for k, text in enumerate(W_PRODUCTS, start=1):
            m = w.parse(text)
            dm, dbm = w.differential(m, DEL), w.differential(m, DELBAR)
            r = w.generator(f"R{k}")
            w.set_differential(f"P{k}", DEL, w.generator(f"dP{k}"))
            w.set_differential(f"P{k}", DELBAR, r - m * i)
            w.set_differential(f"Pb{k}", DEL, r + m * i)
            w.set_differential(f"Pb{k}", DELBAR, w.generator(f"dbPb{k}"))
            w.set_differential(f"R{k}", DEL, dm * (-i))
            w.set_differential(f"R{k}", DELBAR, dbm * i)
            w.set_differential(f"dP{k}", DELBAR, dm * (2 * i))
            w.set_differential(f"dbPb{k}", DEL, dbm * (-2 * i))
        return self.algebra_service.require_valid(w)

    def check_W(self, w: Optional[GradedAlgebra] = None, window: int = W_WINDOW) -> BigradedModelReport:
        """Validate ΛW and check Φ: ΛW → H_C on the window"""
        w = w or self.build_W()
        h = self.build_H(bigraded=True)
        images = {name: h.generator(name) for name in ("alpha", "x", "y", "beta")}
        morphism = AlgebraMorphism(w, h, images, "Phi")
        verdict = self.algebra_service.check_morphism(morphism)
        if not verdict.valid:
            raise VerificationError(f"Phi is not a cbba map: {verdict.message}", {"witness": verdict.witness})
        source = self.algebra_service.underlying_bicomplex(w, window)
        target = self.algebra_service.underlying_bicomplex(h, window)
        bicomplex_map = self.algebra_service.window_map(morphism, source, target)
        bicomplex_map.real = True
        qiso = self.cohomology_service.is_pluripotential_qiso(bicomplex_map)
        return BigradedModelReport(w, True, qiso, window)

    def build_psi_tilde(self, lam: Scalar, w: Optional[GradedAlgebra] = None) -> MorphismReport:
        """ψ̃_λ: ΛV^{≤4} → tot(ΛW)"""
        source = self.named_model(4)
        total = self.algebra_service.totalize(w or self.build_W())
        images = {name: total.parse(text) for name, text in PSI_TILDE.items()}
        for name, text in XI.items():
            images[name] = images[name] + total.parse(text) * lam
        morphism = AlgebraMorphism(source, total, images, "psi_tilde")
        verdict = self.algebra_service.check_morphism(morphism)
        return MorphismReport(morphism, verdict.valid, verdict.witness, verdict.message)

    def rational_triple(self, psi_tilde: AlgebraMorphism) -> RationalTriple:
        source = psi_tilde.source
        rational = all(
            c.is_rational
            for i in range(source.n)
            for c in source.image(DEL, i).terms.values()
        )
        window = W_WINDOW
        f = self.algebra_service.window_map(
            psi_tilde,
            self.algebra_service.underlying_bicomplex(source, window),
            self.algebra_service.underlying_bicomplex(psi_tilde.target, window),
        )
        qiso = self.cohomology_service.is_quasi_isomorphism(f, window)
        return RationalTriple(source, psi_tilde.target, psi_tilde, window, rational, qiso.verdict)

    def _cohomology_matrices(self, psi_tilde: AlgebraMorphism) -> Dict[object, SparseMatrix]:
        f = self.algebra_service.window_map(
            psi_tilde,
            self.algebra_service.underlying_bicomplex(psi_tilde.source, W_WINDOW),
            self.algebra_service.underlying_bicomplex(psi_tilde.target, W_WINDOW),
        )
        return self.cohomology_service.induced_map(f, Flavor.DR)

    # Homotopy-level obstruction

    def _homotopy_chain(self, data: HomotopyData, element: Element) -> Chain:
        algebra = element.algebra
        chain: Chain = {}
        for m, c in element.terms.items():
            if word_length(m) != 1:
                continue
            g = algebra.generators[m.index(1)]
            bd = g.bidegree
            chain.setdefault(bd, {})[data.generators[bd].index(g.name)] = c
        return chain

    def obstruction(self, lam: Scalar, w: Optional[GradedAlgebra] = None) -> ObstructionReport:
        """[β]-coefficients of π⁴(ψ̃_λ)[p_i] and their rationality"""
        w = w or self.build_W()
        data = self.model_service.homotopy_bicomplex(w)
        dr, aeppli = data.flavored[Flavor.DR], data.flavored[Flavor.A]
        to_a = self.cohomology_service.comparison_map(data.bicomplex, dr, aeppli)[4]
        kernel_dim = len(kernel(to_a))

        def de_rham_class(element: Element) -> Vector:
            coords = self.cohomology_service.classify(dr, 4, self._homotopy_chain(data, element))
            if coords is None:
                raise VerificationError(f"linear part of {element} is not closed in the homotopy bicomplex")
            return coords

        r_classes = [de_rham_class(w.generator(f"R{k}")) for k in range(1, 5)]
        kernel_is_r = rank(r_classes) == kernel_dim == 4 and all(not to_a.apply(c) for c in r_classes)
        beta_image = to_a.apply(de_rham_class(w.generator("beta")))
        if not beta_image:
            raise VerificationError("[beta] vanishes in the Aeppli homotopy")

        psi_tilde = self.build_psi_tilde(lam, w)
        if not psi_tilde.valid:
            raise VerificationError(f"psi_tilde is not a dga map: {psi_tilde.message}")
        coefficients: Dict[str, Scalar] = {}
        rational: Dict[str, bool] = {}
        for name in ("p1", "p2", "p3", "p4"):
            image = self.algebra_service.transfer(psi_tilde.morphism.image(name), w)
            found = solve(
                SparseMatrix.from_columns(to_a.nrows, [beta_image]),
                [to_a.apply(de_rham_class(image))],
            )[0]
            if found is None:
                raise VerificationError(f"image of [{name}] leaves the span of [beta] in the Aeppli homotopy")
            coefficients[name] = found.get(0, Scalar(0))
            rational[name] = coefficients[name].is_in_subfield(FieldTag.Q)[0]

        baseline = self.build_psi_tilde(Scalar(0), w)
        same = self._cohomology_matrices(psi_tilde.morphism) == self._cohomology_matrices(baseline.morphism)
        obstructed = not (rational["p3"] and rational["p4"])
        report = ObstructionReport(
            lam,
            coefficients,
            rational,
            {"dR": dr.dim(4), "A": aeppli.total_dims().get(4, 0)},
            kernel_dim,
            kernel_is_r,
            same,
            obstructed,
        )
        self.log_info("Obstruction computed", lam=lam, obstructed=obstructed)
        return report

    # Massey products

    def massey_products(self, top_degree: int = 5) -> Dict[str, MasseyProduct]:
        """<u,v,w> on ΛV^{≤top_degree}; below degree 4 the classes are not yet killed"""
        algebra = self.named_model(top_degree)
        g = algebra.generator
        products = {
            f"<{u},{v},{w}>": self.model_service.triple_massey(algebra, g(u), g(v), g(w), (g(s), g(t)))
            for u, v, w, s, t in MASSEY_TRIPLES
        }
        self.log_info(
            "Massey products",
            top_degree=top_degree,
            vanishing=sorted(label for label, product in products.items() if product.vanishes),
        )
        return products

    # Mixed Hodge extension class

    def mhs_extension(self, lam: Scalar) -> ExtensionClassReport:
        """λ·pr∘ξ on P = ⟨p_i⟩ with values in C = coker(H²⊗H² → H⁴) = ⟨β⟩, modulo ℚ-valued maps"""
        h = self.build_H()
        window = self.algebra_service.underlying_bicomplex(h, 4)
        top = window.basis.get((4, 0), [])
        units = [{j: Scalar(1)} for j in range(len(top))]
        degree2 = [h.generator(g.name) for g in h.generators if g.degree == 2]
        products = [window.to_chain(u * v).get((4, 0), {}) for u in degree2 for v in degree2]
        cokernel = QuotientSpace(units, products)
        if cokernel.dim != 1:
            raise VerificationError("cokernel of H2 x H2 -> H4 is not one-dimensional", {"dim": cokernel.dim})

        def project(element: Element) -> Vector:
            return cokernel.classify([window.to_chain(element).get((4, 0), {})])[0] or {}

        beta = project(h.generator("beta"))
        if not beta:
            raise VerificationError("beta lies in H2.H2")
        projection: Dict[str, Scalar] = {}
        entries: Dict[str, Scalar] = {}
        for name, text in XI.items():
            value = project(h.parse(text)).get(0, Scalar(0))
            projection[name] = value / beta[0]
            entries[name] = projection[name] * lam
        trivial = all(c.is_in_subfield(FieldTag.Q)[0] for c in entries.values())
        self.log_info("Extension class computed", lam=lam, trivial=trivial)
        return ExtensionClassReport(lam, entries, projection, cokernel.dim, trivial)

    # End-to-end run

    def pipeline(self, lam: Scalar) -> PipelineReport:
        h = self.build_H()
        betti = self.betti_numbers(h)
        minimal = self.build_V()
        psi = self.build_psi(lam)
        w = self.build_W()
        lambda_w = self.check_W(w)
        psi_tilde = self.build_psi_tilde(lam, w)
        triple = self.rational_triple(psi_tilde.morphism)
        obstruction = self.obstruction(lam, w)
        massey = self.massey_products()
        return PipelineReport(lam, betti, minimal, psi, psi_tilde, lambda_w, triple, obstruction, massey)

    # Flag manifold certificate

    def build_flag(self, bigraded: bool = False) -> GradedAlgebra:
        bidegree = (1, 1) if bigraded else (2, 0)
        generators = [Generator(f"x{k}", bidegree, f"x{k}" if bigraded else None) for k in range(1, 4)]
        algebra = GradedAlgebra(
            generators,
            bigraded=bigraded,
            truncation=10,
            name="flag_C" if bigraded else "flag",
            real_structure=bigraded,
        )
        for text in FLAG_RELATIONS:
            algebra.add_relation(algebra.parse(text))
        return self.algebra_service.require_valid(algebra)

    def flag_certificate(self, truncation: int = 6) -> FlagCertificate:
        h_q = self.build_flag()
        h_c = self.build_flag(bigraded=True)
        betti = self.betti_numbers(h_q)
        k_q = self.model_service.koszul_model(h_q, truncation)
        k_c = self.model_service.bigraded_koszul_model(h_c, truncation)

        window = self.algebra_service.underlying_bicomplex(k_c.algebra, k_c.certified_degree, k_c.qiso.max_weight)
        ddbar = self.cohomology_service.ddbar_property(window.bicomplex)

        total = self.algebra_service.totalize(k_c.algebra)
        target = self.algebra_service.totalize(k_c.target)
        half_i = HALF * Scalar.i()
        images: Dict[str, Element] = {}
        for g in k_q.algebra.generators:
            if g.name.startswith("p"):
                j = g.name[1:]
                images[g.name] = (total.generator(f"dbP{j}") - total.generator(f"dP{j}")) * half_i
            else:
                images[g.name] = total.generator(g.name)
        comparison = AlgebraMorphism(k_q.algebra, total, images, "comparison")
        comparison_valid = self.algebra_service.check_morphism(comparison).valid
        comparison_real = all(
            k_c.algebra.conjugate(self.algebra_service.transfer(image, k_c.algebra))
            == self.algebra_service.transfer(image, k_c.algebra)
            for image in images.values()
        )

        projection = AlgebraMorphism(
            total,
            target,
            {name: self.algebra_service.transfer(k_c.morphism.image(name), target) for name in total.index},
        )
        inclusion = AlgebraMorphism(h_q, target, {g.name: target.generator(g.name) for g in h_q.generators})
        failures = []
        for g in k_q.algebra.generators:
            left = projection.apply(comparison.image(g.name))
            right = inclusion.apply(k_q.morphism.image(g.name))
            if left != right:
                failures.append(g.name)
        certificate = FlagCertificate(
            betti,
            k_q.qiso,
            k_c.qiso,
            ddbar,
            comparison_valid,
            comparison_real,
            not failures,
            failures,
        )
        self.log_info("Flag certificate", verdict=certificate.verdict, failures=failures)
        return certificate
