"""
Toric commands: equivariant, ordinary, freeness and splitting
"""

from typing import Optional

import click

from ddbar.cli.common import common_options, input_option, resolve, run
from ddbar.core.config import settings
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import GradedAlgebra
from ddbar.models.fan import Fan
from ddbar.schemas.reports import CommandEnum, Report
from ddbar.services.toric_service import ToricService


class ToricCLI(LoggerMixin):
    """Toric command handlers"""

    def __init__(self):
        self.toric_service = ToricService()

    def presentation(self, algebra: GradedAlgebra) -> dict:
        return {
            "generators": [g.name for g in algebra.generators],
            "relations": [algebra.element_text(r) for r in algebra.relations],
        }


toric_cli = ToricCLI()


@click.group("toric")
def toric():
    """Cohomology rings of smooth toric varieties from fans"""


@toric.command("equivariant")
@input_option()
@common_options
@click.pass_context
def equivariant(ctx, input_path: str, field, truncation, output_format):
    """Stanley-Reisner presentation of the equivariant cohomology"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        fan = context.load(input_path, Fan)
        service = toric_cli.toric_service
        algebra = service.equivariant_cohomology(fan, context.truncation)
        dims = service.equivariant_dims(fan, context.truncation)
        return Report(
            command=context.command(CommandEnum.TORIC, "equivariant", [input_path]),
            tables={"dimensions": [{"degree": k, "dim": n} for k, n in enumerate(dims)]},
            details={
                **toric_cli.presentation(algebra),
                "minimal_nonfaces": service.minimal_nonfaces(fan).labels(),
            },
        )

    run(context, build)


@toric.command("ordinary")
@input_option()
@common_options
@click.pass_context
def ordinary(ctx, input_path: str, field, truncation, output_format):
    """Ordinary cohomology with Betti numbers checked against the h-vector"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        fan = context.load(input_path, Fan)
        service = toric_cli.toric_service
        algebra = service.ordinary_cohomology(fan)
        betti = service.ordinary_betti(fan)
        oracle = service.h_vector_betti(fan)
        palindromic = betti == betti[::-1]
        return Report(
            command=context.command(CommandEnum.TORIC, "ordinary", [input_path]),
            verdict=betti == oracle and palindromic,
            tables={
                "betti": [
                    {"degree": k, "betti": b, "h_vector": h} for k, (b, h) in enumerate(zip(betti, oracle))
                ]
            },
            details={**toric_cli.presentation(algebra), "betti": betti, "palindromic": palindromic},
        )

    run(context, build)


@toric.command("freeness")
@input_option()
@common_options
@click.pass_context
def freeness(ctx, input_path: str, field, truncation, output_format):
    """Hilbert series of H_T against H times the polynomial ring, up to N"""
    context = resolve(ctx, field, truncation, output_format)
    degree = truncation if truncation is not None else settings.FREENESS_DEGREE

    def build() -> Report:
        fan = context.load(input_path, Fan)
        report = toric_cli.toric_service.freeness_check(fan, degree)
        rows = [
            {"degree": k, "equivariant": a, "predicted": b}
            for k, (a, b) in enumerate(zip(report.equivariant_series, report.predicted_series))
        ]
        certificates = {}
        if report.mismatch_degree is not None:
            certificates["mismatch_degree"] = report.mismatch_degree
        return Report(
            command=context.command(CommandEnum.TORIC, "freeness", [input_path], degree=degree),
            verdict=report.verdict,
            tables={"series": rows},
            certificates=certificates,
        )

    run(context, build)


@toric.command("splitting")
@input_option()
@click.option("--window", type=int, default=2, show_default=True, help="Total degree window")
@click.option("--max-weight", type=int, default=None, help="Weight bound (default: half the window plus one)")
@common_options
@click.pass_context
def splitting(ctx, input_path: str, window: int, max_weight: Optional[int], field, truncation, output_format):
    """H_T tensor the contractible algebra projects onto H as a pluripotential qiso"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        fan = context.load(input_path, Fan)
        report = toric_cli.toric_service.splitting_check(fan, window, max_weight)
        return Report(
            command=context.command(CommandEnum.TORIC, "splitting", [input_path], window=window, max_weight=max_weight),
            verdict=report.qiso.verdict,
            certificates={"failures": report.qiso.failures} if report.qiso.failures else {},
            details={"window": report.window, "max_weight": report.max_weight, "method": report.qiso.method},
        )

    run(context, build)
