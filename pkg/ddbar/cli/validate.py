"""
Validate command: parse one document or run the shipped fixture suite
"""

from typing import Optional, Tuple

import click

from ddbar.cli.common import common_options, input_option, resolve, run
from ddbar.core.exceptions import PreconditionError
from ddbar.core.logging_config import LoggerMixin
from ddbar.schemas.reports import CommandEnum, Report
from ddbar.services.fixture_service import FixtureService


class ValidateCLI(LoggerMixin):
    """Validate command handlers"""

    def fixture_service(self, fixtures_dir: Optional[str], workers: Optional[int]) -> FixtureService:
        return FixtureService(fixtures_dir, workers)


validate_cli = ValidateCLI()


@click.command("validate")
@input_option(required=False)
@click.option("--all", "run_all", is_flag=True, help="Run every case of the fixture manifest")
@click.option("--fast", is_flag=True, help="Skip cases marked slow")
@click.option("--case", "cases", multiple=True, help="Run only the named cases")
@click.option("--fixtures", "fixtures_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--workers", type=int, default=None, help="Worker threads (default: DDBAR_MAX_WORKERS)")
@common_options
@click.pass_context
def validate(
    ctx,
    input_path: Optional[str],
    run_all: bool,
    fast: bool,
    cases: Tuple[str, ...],
    fixtures_dir: Optional[str],
    workers: Optional[int],
    field,
    truncation,
    output_format,
):
    """Check that a document loads, or run the fixture suite"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        if input_path:
            obj = context.load(input_path)
            return Report(
                command=context.command(CommandEnum.VALIDATE, inputs=[input_path]),
                verdict=True,
                details={"type": type(obj).__name__, "name": getattr(obj, "name", "")},
            )
        if not (run_all or cases):
            raise PreconditionError("validate needs --input, --all or --case")
        service = validate_cli.fixture_service(fixtures_dir, workers)
        results = service.run_all(include_slow=not fast, names=list(cases) or None)
        if cases and not fast and len(results) != len(set(cases)):
            found = {r.name for r in results}
            raise PreconditionError(f"unknown cases: {', '.join(sorted(set(cases) - found))}")
        failures = [r.model_dump(mode="json") for r in results if not r.passed]
        return Report(
            command=context.command(CommandEnum.VALIDATE, "all" if run_all else "cases", fast=fast or None),
            verdict=not failures,
            tables={
                "cases": [
                    {"name": r.name, "check": r.check.value, "passed": r.passed} for r in results
                ]
            },
            certificates={"failures": failures} if failures else {},
            details={"passed": sum(r.passed for r in results), "total": len(results)},
        )

    run(context, build)
