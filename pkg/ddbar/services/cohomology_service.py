"""
Cohomology of bicomplexes: the five flavors, induced maps, ∂∂̄ verdicts and solvers
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ddbar.core.config import settings
from ddbar.core.exceptions import PreconditionError, VerificationError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.bicomplex import (
    Bicomplex,
    BicomplexMap,
    Bidegree,
    Chain,
    CohomologySpace,
    Flavor,
    chain_add,
)
from ddbar.models.linalg import (
    QuotientSpace,
    SparseMatrix,
    Vector,
    independent_columns,
    kernel,
    left_kernel,
    rank,
    solve,
    vec_dot,
)
from ddbar.models.scalars import Scalar


def stack(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    """Vertical concatenation of blocks with a common source"""
    ncols = blocks[0].ncols
    columns: Dict[int, Vector] = {}
    offset = 0
    for block in blocks:
        for j, col in block.columns.items():
            target = columns.setdefault(j, {})
            for i, c in col.items():
                target[offset + i] = c
        offset += block.nrows
    return SparseMatrix(offset, ncols, columns)


def image_vectors(matrix: SparseMatrix) -> List[Vector]:
    return [matrix.column(j) for j in range(matrix.ncols) if matrix.column(j)]


class TotalSpace:
    """Direct sum of B^{p,q} over p+q = k, flattened with p ascending"""

    def __init__(self, bicomplex: Bicomplex, degree: int):
        self.bicomplex = bicomplex
        self.degree = degree
        self.parts: List[Bidegree] = sorted(bicomplex.bidegrees_in_degree(degree))
        self.offsets: Dict[Bidegree, int] = {}
        offset = 0
        for bd in self.parts:
            self.offsets[bd] = offset
            offset += bicomplex.dim(bd)
        self.dim = offset

    def flatten(self, chain: Chain) -> Vector:
        out: Vector = {}
        for bd, v in chain.items():
            if sum(bd) != self.degree:
                continue
            if bd not in self.offsets:
                if v:
                    raise ValueError(f"chain has a component outside the bicomplex at {bd}")
                continue
            base = self.offsets[bd]
            for i, c in v.items():
                out[base + i] = c
        return out

    def unflatten(self, vector: Vector) -> Chain:
        out: Chain = {}
        for bd in self.parts:
            base, n = self.offsets[bd], self.bicomplex.dim(bd)
            part = {i - base: c for i, c in vector.items() if base <= i < base + n}
            if part:
                out[bd] = part
        return out


def total_differential(bicomplex: Bicomplex, source: TotalSpace, target: TotalSpace) -> SparseMatrix:
    columns: Dict[int, Vector] = {}
    for bd in source.parts:
        base = source.offsets[bd]
        for j in range(bicomplex.dim(bd)):
            image = target.flatten(bicomplex.apply_d({bd: {j: Scalar(1)}}))
            if image:
                columns[base + j] = image
    return SparseMatrix(target.dim, source.dim, columns)


@dataclass
class DdbarVerdict:
    verdict: bool
    injective: bool
    counts_hold: bool
    table: List[Tuple[int, int, int, int]]  # (k, h_BC, h_A, b_k)
    witness: Optional[Chain] = None
    witness_degree: Optional[int] = None


@dataclass
class QisoVerdict:
    verdict: bool
    method: str
    failures: List[Dict[str, object]] = field(default_factory=list)
    # weight pieces above this bound were not compared; None means the whole window
    max_weight: Optional[int] = None


@dataclass
class SolveResult:
    solved: bool
    solution: Optional[Vector] = None
    certificate: Optional[Vector] = None


@dataclass
class DSolveResult:
    beta: Optional[Vector]
    route: str
    steps: Dict[str, Vector] = field(default_factory=dict)


class CohomologyService(LoggerMixin):
    """Service computing flavored cohomology of validated bicomplexes"""

    # Flavors

    def cohomology(self, bicomplex: Bicomplex, flavor: Flavor, validate: bool = True) -> CohomologySpace:
        """Kernel/image quotients of one flavor up to the certified degree"""
        if validate:
            bicomplex.validate()
        flavor = Flavor(flavor)
        top = bicomplex.certified_degree
        dims: Dict[object, int] = {}
        reps: Dict[object, List[Chain]] = {}
        quotients: Dict[object, object] = {}

        if flavor is Flavor.DR:
            for k in range(min(bicomplex.degrees(), default=0), top + 1):
                space = TotalSpace(bicomplex, k)
                if not space.dim:
                    continue
                quotient = self._de_rham_quotient(bicomplex, k, space)
                quotients[k] = (quotient, space)
                if quotient.dim:
                    dims[k] = quotient.dim
                    reps[k] = [space.unflatten(v) for v in quotient.representatives]
        else:
            for bd in bicomplex.bidegrees():
                if sum(bd) > top:
                    continue
                quotient = self._bigraded_quotient(bicomplex, flavor, bd)
                quotients[bd] = quotient
                if quotient.dim:
                    dims[bd] = quotient.dim
                    reps[bd] = [{bd: v} for v in quotient.representatives]

        self.log_debug("Computed cohomology", flavor=flavor, dims=dims)
        return CohomologySpace(flavor, dims, reps, quotients)

    def _bigraded_quotient(self, b: Bicomplex, flavor: Flavor, bd: Bidegree) -> QuotientSpace:
        p, q = bd
        if flavor is Flavor.BC:
            numerator = kernel(stack([b.del_at(bd), b.delbar_at(bd)]))
            denominator = image_vectors(b.ddbar_at((p - 1, q - 1)))
        elif flavor is Flavor.A:
            numerator = kernel(b.ddbar_at(bd))
            denominator = image_vectors(b.del_at((p - 1, q))) + image_vectors(
                b.delbar_at((p, q - 1))
            )
        elif flavor is Flavor.DEL:
            numerator = kernel(b.del_at(bd))
            denominator = image_vectors(b.del_at((p - 1, q)))
        else:
            numerator = kernel(b.delbar_at(bd))
            denominator = image_vectors(b.delbar_at((p, q - 1)))
        return QuotientSpace(numerator, denominator)

    def _de_rham_quotient(self, b: Bicomplex, k: int, space: TotalSpace) -> QuotientSpace:
        below = TotalSpace(b, k - 1)
        above = TotalSpace(b, k + 1)
        numerator = kernel(total_differential(b, space, above))
        denominator = image_vectors(total_differential(b, below, space))
        return QuotientSpace(numerator, denominator)

    def all_flavors(self, bicomplex: Bicomplex) -> Dict[Flavor, CohomologySpace]:
        bicomplex.validate()
        return {f: self.cohomology(bicomplex, f, validate=False) for f in Flavor}

    # Comparison and induced maps

    def classify(self, space: CohomologySpace, key, chain: Chain) -> Optional[Vector]:
        """Class coordinates of a cocycle chain in ``space`` at ``key``"""
        entry = space.quotients.get(key)
        if entry is None:
            return {}
        if space.flavor is Flavor.DR:
            quotient, total = entry
            return quotient.classify([total.flatten(chain)])[0]
        return entry.classify([chain.get(key, {})])[0]

    def comparison_map(
        self, bicomplex: Bicomplex, source: CohomologySpace, target: CohomologySpace
    ) -> Dict[object, SparseMatrix]:
        """Matrix of the natural map between two flavors, keyed by source slot.

        Targets are the same bidegree, the total degree (into dR) or the concatenation
        of H^{p,q} over p+q = k in ascending p (out of dR).
        """
        out: Dict[object, SparseMatrix] = {}
        keys = sorted(source.quotients)
        for key in keys:
            reps = source.representatives.get(key, [])
            if source.flavor.bigraded and target.flavor.bigraded:
                slots = [key]
            elif target.flavor is Flavor.DR:
                slots = [sum(key)] if source.flavor.bigraded else [key]
            else:
                slots = sorted(bd for bd in target.quotients if sum(bd) == key)
            offsets, nrows = {}, 0
            for slot in slots:
                offsets[slot] = nrows
                nrows += target.dim(slot)
            columns: Dict[int, Vector] = {}
            for j, chain in enumerate(reps):
                column: Vector = {}
                for slot in slots:
                    coords = self.classify(target, slot, chain)
                    if coords is None:
                        raise VerificationError(
                            f"representative of {source.flavor.value} at {key} is not a "
                            f"{target.flavor.value} cocycle"
                        )
                    for i, c in coords.items():
                        column[offsets[slot] + i] = c
                columns[j] = column
            out[key] = SparseMatrix(nrows, len(reps), columns)
        return out

    def induced_map(self, f: BicomplexMap, flavor: Flavor) -> Dict[object, SparseMatrix]:
        """Matrices of H(f) per (bi)degree in the representative bases"""
        f.validate()
        flavor = Flavor(flavor)
        source = self.cohomology(f.source, flavor)
        target = self.cohomology(f.target, flavor)
        return self._induced(f, source, target)

    def _induced(
        self, f: BicomplexMap, source: CohomologySpace, target: CohomologySpace
    ) -> Dict[object, SparseMatrix]:
        out: Dict[object, SparseMatrix] = {}
        keys = sorted(set(source.quotients) | set(target.quotients))
        for key in keys:
            reps = source.representatives.get(key, [])
            columns: Dict[int, Vector] = {}
            for j, chain in enumerate(reps):
                coords = self.classify(target, key, f.apply(chain))
                if coords is None:
                    raise VerificationError(f"image of a class at {key} is not a cocycle")
                columns[j] = coords
            out[key] = SparseMatrix(target.dim(key), len(reps), columns)
        return out

    # Verdicts

    def ddbar_property(self, bicomplex: Bicomplex) -> DdbarVerdict:
        """Injectivity of H_BC -> H_dR, cross-checked against h_BC + h_A = 2 b_k"""
        spaces = self.all_flavors(bicomplex)
        bc, aeppli, dr = spaces[Flavor.BC], spaces[Flavor.A], spaces[Flavor.DR]
        to_dr = self.comparison_map(bicomplex, bc, dr)

        bc_totals, a_totals = bc.total_dims(), aeppli.total_dims()
        injective, counts_hold = True, True
        witness, witness_degree = None, None
        table = []
        for k in range(min(bicomplex.degrees(), default=0), bicomplex.certified_degree + 1):
            h_bc, h_a, b_k = bc_totals.get(k, 0), a_totals.get(k, 0), dr.dim(k)
            table.append((k, h_bc, h_a, b_k))
            if h_bc + h_a != 2 * b_k:
                counts_hold = False
            if injective:
                found = self._bc_kernel_witness(bc, to_dr, k)
                if found is not None:
                    injective, witness, witness_degree = False, found, k

        if injective != counts_hold:
            self.log_warning("ddbar criteria disagree", injective=injective, counts=counts_hold)
        self.log_info("ddbar verdict", verdict=injective, degrees=len(table))
        return DdbarVerdict(injective, injective, counts_hold, table, witness, witness_degree)

    def _bc_kernel_witness(self, bc: CohomologySpace, to_dr: Dict, k: int) -> Optional[Chain]:
        slots = sorted(bd for bd in bc.representatives if sum(bd) == k)
        columns, reps = [], []
        for bd in slots:
            matrix = to_dr[bd]
            for j, chain in enumerate(bc.representatives[bd]):
                columns.append(matrix.column(j))
                reps.append(chain)
        if len(independent_columns(columns)) == len(columns):
            return None
        nrows = 1 + max((i for col in columns for i in col), default=0)
        relation = kernel(SparseMatrix.from_columns(nrows, columns))[0]
        witness: Chain = {}
        for j, c in relation.items():
            witness = chain_add(witness, {bd: {i: c * x for i, x in v.items()} for bd, v in reps[j].items()})
        return witness

    def is_pluripotential_qiso(self, f: BicomplexMap, method: Optional[str] = None) -> QisoVerdict:
        """Both H_BC(f) and H_A(f) isomorphisms, or the first-quadrant H_∂/H_∂̄ fast path"""
        f.validate()
        method = method or settings.QISO_METHOD
        flavors = (Flavor.BC, Flavor.A)
        used = "full"
        if method == "auto" and f.source.is_first_quadrant() and f.target.is_first_quadrant():
            flavors, used = (Flavor.DEL, Flavor.DELBAR), "dolbeault"
        failures = self._iso_failures(f, flavors)
        self.log_info("qiso check", method=used, failures=len(failures))
        return QisoVerdict(not failures, used, failures)

    def is_quasi_isomorphism(self, f: BicomplexMap, upto: Optional[int] = None) -> QisoVerdict:
        """H_dR(f) bijective in every degree up to ``upto`` (default: certified range)"""
        f.validate()
        failures = self._iso_failures(f, (Flavor.DR,), upto)
        self.log_info("de Rham qiso check", failures=len(failures))
        return QisoVerdict(not failures, "dR", failures)

    def _iso_failures(
        self, f: BicomplexMap, flavors: Sequence[Flavor], upto: Optional[int] = None
    ) -> List[Dict[str, object]]:
        top = min(f.source.certified_degree, f.target.certified_degree)
        if upto is not None:
            top = min(top, upto)
        failures: List[Dict[str, object]] = []
        for flavor in flavors:
            source = self.cohomology(f.source, flavor, validate=False)
            target = self.cohomology(f.target, flavor, validate=False)
            for key, matrix in sorted(self._induced(f, source, target).items()):
                degree = sum(key) if flavor.bigraded else key
                if degree > top:
                    continue
                r = rank([matrix.column(j) for j in range(matrix.ncols)])
                if not (matrix.nrows == matrix.ncols == r):
                    failures.append(
                        {
                            "flavor": flavor.value,
                            "bidegree": list(key) if flavor.bigraded else [key, 0],
                            "source_dim": matrix.ncols,
                            "target_dim": matrix.nrows,
                            "rank": r,
                        }
                    )
        return failures

    # Solvers

    def solve_ddbar(self, bicomplex: Bicomplex, bd: Bidegree, x: Vector) -> SolveResult:
        """y at (p-1,q-1) with ∂∂̄y = x, or a functional separating x from im ∂∂̄"""
        p, q = bd
        if any(i >= bicomplex.dim(bd) or i < 0 for i in x):
            raise PreconditionError(f"vector does not live in bidegree ({p},{q})")
        matrix = bicomplex.ddbar_at((p - 1, q - 1))
        found = solve(matrix, [x])[0]
        if found is not None:
            return SolveResult(True, solution=found)
        for functional in left_kernel(matrix):
            if vec_dot(functional, x):
                return SolveResult(False, certificate=functional)
        raise VerificationError("no separating functional for an unsolvable ddbar equation")

    def solve_d_bidegree(
        self, bicomplex: Bicomplex, bd: Bidegree, a: Chain, strict: bool = True
    ) -> DSolveResult:
        """β of pure bidegree (p,q) with dβ = a, following the ∂∂̄-lemma construction.

        With ``strict`` the ∂∂̄-property and d-exactness are checked first and any failure
        raises PreconditionError. Otherwise a failed ∂∂̄-solve falls back to a direct solve
        restricted to B^{p,q}; ``beta`` is None when no pure solution exists.
        """
        p, q = bd
        stray = [k for k, v in a.items() if v and k not in ((p + 1, q), (p, q + 1))]
        if stray:
            raise PreconditionError(f"right-hand side has components outside ({p + 1},{q}) + ({p},{q + 1})")
        if not any(a.values()):
            return DSolveResult({}, "trivial")

        if strict:
            verdict = self.ddbar_property(bicomplex)
            if not verdict.verdict:
                raise PreconditionError(
                    "bicomplex fails the ddbar-property",
                    {"witness_degree": verdict.witness_degree},
                )
            k = p + q + 1
            if not self._is_d_exact(bicomplex, k, a):
                raise PreconditionError("right-hand side is not d-exact", {"degree": k})

        alpha = a.get((p + 1, q), {})
        alpha_bar = a.get((p, q + 1), {})
        steps: Dict[str, Vector] = {}
        beta = self._lemma_route(bicomplex, bd, alpha, alpha_bar, steps)
        route = "lemma"
        if beta is None:
            if strict:
                raise PreconditionError("a ddbar-equation in the lemma route has no solution", {"steps": list(steps)})
            route = "direct"
            beta = self._direct_route(bicomplex, bd, a)
            if beta is None:
                return DSolveResult(None, route, steps)

        check = bicomplex.apply_d({bd: beta})
        if chain_add(check, {k: {i: -c for i, c in v.items()} for k, v in a.items()}):
            raise VerificationError("d(beta) != a after solving")
        return DSolveResult(beta, route, steps)

    def _lemma_route(self, b: Bicomplex, bd: Bidegree, alpha: Vector, alpha_bar: Vector, steps) -> Optional[Vector]:
        p, q = bd
        rhs_x = b.del_at((p, q + 1)).apply(alpha_bar)
        x = self._ddbar_solve(b, (p + 1, q + 1), rhs_x)
        if x is None:
            return None
        steps["x"] = x
        rest = chain_add({(p + 1, q): alpha}, {(p + 1, q): {i: -c for i, c in b.del_at(bd).apply(x).items()}})
        y1 = self._ddbar_solve(b, (p + 1, q), rest.get((p + 1, q), {}))
        if y1 is None:
            return None
        rest_bar = chain_add(
            {(p, q + 1): alpha_bar}, {(p, q + 1): {i: -c for i, c in b.delbar_at(bd).apply(x).items()}}
        )
        y2 = self._ddbar_solve(b, (p, q + 1), rest_bar.get((p, q + 1), {}))
        if y2 is None:
            return None
        steps["y1"], steps["y2"] = y1, y2
        beta = chain_add({bd: x}, {bd: b.delbar_at((p, q - 1)).apply(y1)})
        beta = chain_add(beta, {bd: {i: -c for i, c in b.del_at((p - 1, q)).apply(y2).items()}})
        return beta.get(bd, {})

    def _ddbar_solve(self, b: Bicomplex, bd: Bidegree, x: Vector) -> Optional[Vector]:
        if not x:
            return {}
        p, q = bd
        return solve(b.ddbar_at((p - 1, q - 1)), [x])[0]

    def _direct_route(self, b: Bicomplex, bd: Bidegree, a: Chain) -> Optional[Vector]:
        p, q = bd
        matrix = stack([b.del_at(bd), b.delbar_at(bd)])
        offset = b.dim((p + 1, q))
        target = dict(a.get((p + 1, q), {}))
        for i, c in a.get((p, q + 1), {}).items():
            target[offset + i] = c
        return solve(matrix, [target])[0]

    def _is_d_exact(self, b: Bicomplex, k: int, chain: Chain) -> bool:
        space, below = TotalSpace(b, k), TotalSpace(b, k - 1)
        return solve(total_differential(b, below, space), [space.flatten(chain)])[0] is not None
