"""
Bicomplex commands: cohomology, ddbar and qiso
"""

from typing import Optional

import click

from ddbar.cli.common import chain_rows, common_options, input_option, resolve, run, space_rows
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import GradedAlgebra
from ddbar.models.bicomplex import Bicomplex, BicomplexMap, Flavor
from ddbar.models.cartan import TCbba
from ddbar.schemas.reports import CommandEnum, Report
from ddbar.services.cohomology_service import CohomologyService


class BicomplexCLI(LoggerMixin):
    """Bicomplex command handlers"""

    def __init__(self):
        self.cohomology_service = CohomologyService()


bicomplex_cli = BicomplexCLI()


@click.command("cohomology")
@input_option()
@click.option(
    "--flavor",
    type=click.Choice([f.value for f in Flavor]),
    default=None,
    help="Single cohomology flavor (default: all five)",
)
@click.option("--max-weight", type=int, default=None, help="Weight bound for weighted algebras")
@common_options
@click.pass_context
def cohomology(ctx, input_path: str, flavor: Optional[str], max_weight: Optional[int], field, truncation, output_format):
    """Dimension tables of de Rham, Dolbeault, Bott-Chern and Aeppli cohomology"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        obj = context.load(input_path, Bicomplex, GradedAlgebra, TCbba)
        bicomplex = context.window(obj, max_weight)
        if flavor:
            spaces = {Flavor(flavor): bicomplex_cli.cohomology_service.cohomology(bicomplex, Flavor(flavor))}
        else:
            spaces = bicomplex_cli.cohomology_service.all_flavors(bicomplex)
        return Report(
            command=context.command(CommandEnum.COHOMOLOGY, inputs=[input_path], flavor=flavor, max_weight=max_weight),
            tables={f.value: space_rows(space) for f, space in spaces.items()},
            details={"name": bicomplex.name, "certified_degree": bicomplex.certified_degree},
        )

    run(context, build)


@click.command("ddbar")
@input_option()
@click.option("--max-weight", type=int, default=None, help="Weight bound for weighted algebras")
@common_options
@click.pass_context
def ddbar(ctx, input_path: str, max_weight: Optional[int], field, truncation, output_format):
    """Decide the ddbar-property by injectivity, cross-checked by dimension counts"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        obj = context.load(input_path, Bicomplex, GradedAlgebra, TCbba)
        bicomplex = context.window(obj, max_weight)
        verdict = bicomplex_cli.cohomology_service.ddbar_property(bicomplex)
        rows = [
            {"degree": k, "h_BC": h_bc, "h_A": h_a, "b": b, "counts_hold": h_bc + h_a == 2 * b}
            for k, h_bc, h_a, b in verdict.table
        ]
        certificates = {}
        if verdict.witness is not None:
            certificates["kernel_witness"] = {
                "degree": verdict.witness_degree,
                "chain": chain_rows(bicomplex, verdict.witness),
            }
        return Report(
            command=context.command(CommandEnum.DDBAR, inputs=[input_path], max_weight=max_weight),
            verdict=verdict.verdict,
            tables={"counts": rows},
            certificates=certificates,
            details={"injective": verdict.injective, "counts_hold": verdict.counts_hold},
        )

    run(context, build)


@click.command("qiso")
@input_option()
@click.option(
    "--method",
    type=click.Choice(["full", "auto", "dR"]),
    default=None,
    help="full: H_BC and H_A; auto: Dolbeault fast path when first-quadrant; dR: de Rham only",
)
@common_options
@click.pass_context
def qiso(ctx, input_path: str, method: Optional[str], field, truncation, output_format):
    """Check whether a bicomplex map is a (pluripotential) quasi-isomorphism"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        f = context.load(input_path, BicomplexMap)
        service = bicomplex_cli.cohomology_service
        if method == "dR":
            verdict = service.is_quasi_isomorphism(f, context.truncation)
        else:
            verdict = service.is_pluripotential_qiso(f, method)
        return Report(
            command=context.command(CommandEnum.QISO, inputs=[input_path], method=method),
            verdict=verdict.verdict,
            certificates={"failures": verdict.failures} if verdict.failures else {},
            details={"method": verdict.method},
        )

    run(context, build)
