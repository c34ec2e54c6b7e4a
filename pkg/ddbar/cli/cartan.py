"""
Cartan commands: build, extend and ddbar
"""

from typing import Optional

import click

from ddbar.cli.common import common_options, input_option, resolve, run
from ddbar.cli.models import model_cli
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.cartan import TCbba
from ddbar.schemas.reports import CommandEnum, Report
from ddbar.services.cartan_service import CartanService


class CartanCLI(LoggerMixin):
    """Cartan command handlers"""

    def __init__(self):
        self.cartan_service = CartanService()


cartan_cli = CartanCLI()


def _weight(tcbba: TCbba, window: int, max_weight: Optional[int]) -> Optional[int]:
    if max_weight is None and tcbba.algebra.needs_weight_bound:
        return window // 2 + 1
    return max_weight


@click.group("cartan")
def cartan():
    """Equivariant Cartan models of cbbas with torus contractions"""


@cartan.command("build")
@input_option()
@common_options
@click.pass_context
def build_model(ctx, input_path: str, field, truncation, output_format):
    """Build the Cartan model and verify its differentials"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        tcbba = context.load(input_path, TCbba)
        model = cartan_cli.cartan_service.cartan_model(tcbba)
        return Report(
            command=context.command(CommandEnum.CARTAN, "build", [input_path]),
            verdict=True,
            tables={"generators": model_cli.generator_rows(model.algebra)},
            details={"xi": model.xi, "rank": tcbba.rank, "trivial_action": tcbba.is_trivial},
        )

    run(context, build)


@cartan.command("extend")
@input_option()
@click.option("--theta", required=True, help="Closed pure-type element to extend")
@click.option("--max-weight", type=int, default=None, help="Weight bound for weighted algebras")
@common_options
@click.pass_context
def extend(ctx, input_path: str, theta: str, max_weight: Optional[int], field, truncation, output_format):
    """Extend a closed pure-type element to a d_T-closed element of the Cartan model"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        tcbba = context.load(input_path, TCbba)
        service = cartan_cli.cartan_service
        model = service.cartan_model(tcbba)
        element = context.parser.element(tcbba.algebra, theta, "--theta")
        degree = sum(element.bidegrees()[0]) if element else 0
        result = service.extend_to_equivariant(model, element, _weight(tcbba, degree, max_weight))
        details = {
            "theta": result.theta.to_text(),
            "ddbar_holds": result.ddbar_holds,
            "stages": [
                {"stage": s.stage, "corrections": [list(c) for c in s.corrections]} for s in result.stages
            ],
        }
        if result.extended is not None:
            details["extended"] = result.extended.to_text()
        return Report(
            command=context.command(CommandEnum.CARTAN, "extend", [input_path], theta=theta),
            verdict=result.success,
            certificates={"obstruction": result.certificate} if result.certificate else {},
            details=details,
        )

    run(context, build)


@cartan.command("ddbar")
@input_option()
@click.option("--window", type=int, default=None, help="Total degree window (default: the truncation)")
@click.option("--max-weight", type=int, default=None, help="Weight bound for weighted algebras")
@common_options
@click.pass_context
def cartan_ddbar(ctx, input_path: str, window: Optional[int], max_weight: Optional[int], field, truncation, output_format):
    """ddbar-property of the Cartan model next to surjectivity of the restriction"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        tcbba = context.load(input_path, TCbba)
        service = cartan_cli.cartan_service
        model = service.cartan_model(tcbba)
        top = window if window is not None else min(context.truncation, tcbba.algebra.truncation - 2)
        verdict = service.cartan_ddbar_check(model, top, _weight(tcbba, top, max_weight))
        rows = [
            {"degree": k, "h_BC": h_bc, "h_A": h_a, "b": b}
            for k, h_bc, h_a, b in verdict.ddbar.table
        ]
        return Report(
            command=context.command(CommandEnum.CARTAN, "ddbar", [input_path], window=top),
            verdict=verdict.consistent,
            tables={"counts": rows},
            certificates={"restriction_failures": verdict.failures} if verdict.failures else {},
            details={"ddbar": verdict.ddbar.verdict, "surjective": verdict.surjective, "window": top},
        )

    run(context, build)
