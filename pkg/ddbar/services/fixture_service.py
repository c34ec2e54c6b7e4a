"""
Fixture runner: executes the shipped regression cases on a worker pool
"""

import json
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from ddbar.core.config import settings
from ddbar.core.exceptions import DdbarError, PreconditionError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import GradedAlgebra
from ddbar.models.cartan import TCbba
from ddbar.models.fan import Fan
from ddbar.models.scalars import parse_scalar
from ddbar.schemas.fixtures import FixtureCase, FixtureCheckEnum, FixtureManifest, FixtureResult
from ddbar.services.algebra_service import AlgebraService
from ddbar.services.cartan_service import CartanService
from ddbar.services.cohomology_service import CohomologyService
from ddbar.services.model_service import ModelService
from ddbar.services.parser_service import ParserService
from ddbar.services.replication_service import ReplicationService
from ddbar.services.toric_service import ToricService

MANIFEST = "manifest.json"


def default_fixtures_dir() -> Path:
    if settings.FIXTURES_DIR:
        return Path(settings.FIXTURES_DIR)
    return Path(__file__).resolve().parents[2] / "fixtures"


class FixtureService(LoggerMixin):
    """Service running every shipped fixture case; each job builds its own services and data"""

    def __init__(self, fixtures_dir: Optional[Path] = None, max_workers: Optional[int] = None):
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir else default_fixtures_dir()
        self.max_workers = max_workers or settings.MAX_WORKERS
        self.checks: Dict[FixtureCheckEnum, Callable[[FixtureCase], Any]] = {
            FixtureCheckEnum.PARSE: self._parse,
            FixtureCheckEnum.DDBAR: self._ddbar,
            FixtureCheckEnum.BETTI: self._betti,
            FixtureCheckEnum.FREENESS: self._freeness,
            FixtureCheckEnum.SPLITTING: self._splitting,
            FixtureCheckEnum.KOSZUL: self._koszul,
            FixtureCheckEnum.MINIMAL_MODEL: self._minimal_model,
            FixtureCheckEnum.LAMBDA_W: self._lambda_w,
            FixtureCheckEnum.OBSTRUCTION: self._obstruction,
            FixtureCheckEnum.MHS: self._mhs,
            FixtureCheckEnum.FLAG: self._flag,
            FixtureCheckEnum.CARTAN: self._cartan,
            FixtureCheckEnum.EXTENSION: self._extension,
        }

    # Manifest

    def manifest(self) -> FixtureManifest:
        path = self.fixtures_dir / MANIFEST
        if not path.exists():
            raise PreconditionError(f"no fixture manifest at {path}")
        return FixtureManifest.model_validate(json.loads(path.read_text(encoding="utf-8")))

    def load(self, case: FixtureCase, *expected: type) -> Any:
        if not case.file:
            raise PreconditionError(f"case {case.name} needs a file")
        obj = ParserService().load(self.fixtures_dir / case.file)
        if expected and not isinstance(obj, expected):
            raise PreconditionError(f"{case.file} holds a {type(obj).__name__}")
        return obj

    # Running

    def run_case(self, case: FixtureCase) -> FixtureResult:
        self.log_debug("Running fixture case", case=case.name, check=case.check.value)
        try:
            observed = self.checks[case.check](case)
        except DdbarError as e:
            observed = type(e).__name__
            passed = observed == case.expected
            return FixtureResult(
                name=case.name,
                check=case.check,
                passed=passed,
                expected=case.expected,
                observed=observed,
                error=None if passed else e.message,
            )
        return FixtureResult(
            name=case.name,
            check=case.check,
            passed=observed == case.expected,
            expected=case.expected,
            observed=observed,
        )

    def run_all(self, include_slow: bool = True, names: Optional[List[str]] = None) -> List[FixtureResult]:
        cases = [
            case
            for case in self.manifest().cases
            if (include_slow or not case.slow) and (not names or case.name in names)
        ]
        self.log_info("Running fixtures", cases=len(cases), workers=self.max_workers)
        results: List[FixtureResult] = []
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = {executor.submit(self.run_case, case): case for case in cases}
            for future in as_completed(futures):
                result = future.result()
                results.append(result)
                if not result.passed:
                    self.log_warning("Fixture case failed", case=result.name, observed=result.observed)
        results.sort(key=lambda r: r.name)
        self.log_info("Fixtures finished", passed=sum(r.passed for r in results), total=len(results))
        return results

    # Checks

    def _parse(self, case: FixtureCase) -> Any:
        self.load(case)
        return True

    def _ddbar(self, case: FixtureCase) -> bool:
        obj = self.load(case)
        if isinstance(obj, (GradedAlgebra, TCbba)):
            algebra = obj.algebra if isinstance(obj, TCbba) else obj
            window = case.options.get("window", algebra.truncation - (2 if algebra.bigraded else 1))
            obj = AlgebraService().underlying_bicomplex(algebra, window, case.options.get("max_weight")).bicomplex
        return CohomologyService().ddbar_property(obj).verdict

    def _betti(self, case: FixtureCase) -> Any:
        fan = self.load(case, Fan)
        service = ToricService()
        betti = service.ordinary_betti(fan)
        if betti != service.h_vector_betti(fan):
            return {"betti": betti, "h_vector": service.h_vector_betti(fan)}
        return betti

    def _freeness(self, case: FixtureCase) -> bool:
        fan = self.load(case, Fan)
        degree = case.options.get("truncation", settings.FREENESS_DEGREE)
        return ToricService().freeness_check(fan, degree).verdict

    def _splitting(self, case: FixtureCase) -> bool:
        fan = self.load(case, Fan)
        return ToricService().splitting_check(fan, case.options.get("window", 2)).qiso.verdict

    def _koszul(self, case: FixtureCase) -> bool:
        algebra = self.load(case, GradedAlgebra)
        truncation = case.options.get("truncation", settings.DEFAULT_TRUNCATION)
        service = ModelService()
        if algebra.bigraded:
            return service.bigraded_koszul_model(algebra, truncation).qiso.verdict
        return service.koszul_model(algebra, truncation).qiso.verdict

    def _minimal_model(self, case: FixtureCase) -> Dict[str, int]:
        if case.file:
            algebra = self.load(case, GradedAlgebra)
            model = ModelService().minimal_model(algebra, case.options.get("truncation", 5))
            table = model.dimension_table()
        else:
            report = ReplicationService().build_V(case.options.get("truncation", 5))
            table = report.dimension_table if report.verdict else {}
        return {str(k): n for k, n in sorted(table.items())}

    def _lambda_w(self, case: FixtureCase) -> bool:
        """The shipped table agrees with the built ΛW and passes the Φ check"""
        parsed = self.load(case, GradedAlgebra)
        service = ReplicationService()
        built = service.build_W()
        same = [g.name for g in parsed.generators] == [g.name for g in built.generators] and all(
            parsed.image(kind, i).terms == built.image(kind, i).terms
            for kind in ("del", "delbar")
            for i in range(built.n)
        )
        report = service.check_W(parsed)
        return same and report.valid and report.qiso.verdict

    def _obstruction(self, case: FixtureCase) -> Any:
        lam = parse_scalar(case.options.get("lambda", "lambda"))
        report = ReplicationService().obstruction(lam)
        if report.coefficients["p3"] != lam:
            return {"p3": report.coefficients["p3"].to_text()}
        return report.obstructed

    def _mhs(self, case: FixtureCase) -> bool:
        lam = parse_scalar(case.options.get("lambda", "lambda"))
        return ReplicationService().mhs_extension(lam).trivial

    def _flag(self, case: FixtureCase) -> bool:
        return ReplicationService().flag_certificate(case.options.get("truncation", 6)).verdict

    def _cartan(self, case: FixtureCase) -> bool:
        tcbba = self.load(case, TCbba)
        service = CartanService()
        model = service.cartan_model(tcbba)
        window = case.options.get("window")
        if window is None:
            return True
        return service.cartan_ddbar_check(model, window, case.options.get("max_weight")).consistent

    def _extension(self, case: FixtureCase) -> bool:
        tcbba = self.load(case, TCbba)
        service = CartanService()
        model = service.cartan_model(tcbba)
        theta = tcbba.algebra.parse(case.options["theta"])
        return service.extend_to_equivariant(model, theta, case.options.get("max_weight")).success
