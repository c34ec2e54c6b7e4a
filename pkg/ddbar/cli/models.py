"""
Model commands: minimal-model, koszul, regseq and massey
"""

from typing import Any, Dict, List, Optional, Tuple

import click

from ddbar.cli.common import common_options, input_option, resolve, run
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import DEL, DELBAR, GradedAlgebra
from ddbar.schemas.reports import CommandEnum, Report
from ddbar.services.model_service import ModelService


class ModelCLI(LoggerMixin):
    """Model command handlers"""

    def __init__(self):
        self.model_service = ModelService()

    def generator_rows(self, algebra: GradedAlgebra) -> List[Dict[str, Any]]:
        rows = []
        for i, g in enumerate(algebra.generators):
            row: Dict[str, Any] = {"name": g.name}
            if algebra.bigraded:
                row["bidegree"] = list(g.bidegree)
                row["del"] = algebra.element_text(algebra.image(DEL, i))
                row["delbar"] = algebra.element_text(algebra.image(DELBAR, i))
            else:
                row["degree"] = g.degree
                row["d"] = algebra.element_text(algebra.image(DEL, i))
            rows.append(row)
        return rows


model_cli = ModelCLI()


@click.command("minimal-model")
@input_option()
@common_options
@click.pass_context
def minimal_model(ctx, input_path: str, field, truncation, output_format):
    """Sullivan minimal model through the truncation degree"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        algebra = context.load(input_path, GradedAlgebra)
        model = model_cli.model_service.minimal_model(algebra, context.truncation)
        homotopy = model_cli.model_service.homotopy(model)
        return Report(
            command=context.command(CommandEnum.MINIMAL_MODEL, inputs=[input_path]),
            verdict=True,
            tables={
                "generators": model_cli.generator_rows(model.algebra),
                "dimensions": [{"degree": k, "dim": n} for k, n in model.dimension_table().items()],
            },
            details={
                "certified_degree": model.certified_degree,
                "stages": [
                    {"degree": s.degree, "closed": s.closed, "killing": [list(k) for k in s.killing]}
                    for s in model.stages
                ],
                "homotopy": {str(k): n for k, n in sorted(homotopy.dims.items())},
                "images": {
                    g.name: model.morphism.image(g.name).to_text() for g in model.algebra.generators
                },
            },
        )

    run(context, build)


@click.command("koszul")
@input_option()
@click.option("--max-weight", type=int, default=None, help="Weight bound for models with generators at (0,0)")
@common_options
@click.pass_context
def koszul(ctx, input_path: str, max_weight: Optional[int], field, truncation, output_format):
    """Koszul model of a complete intersection, bigraded for bigraded input"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        algebra = context.load(input_path, GradedAlgebra)
        service = model_cli.model_service
        if algebra.bigraded:
            model = service.bigraded_koszul_model(algebra, context.truncation, max_weight)
        else:
            model = service.koszul_model(algebra, context.truncation)
        certificates = {"failures": model.qiso.failures} if model.qiso.failures else {}
        return Report(
            command=context.command(CommandEnum.KOSZUL, inputs=[input_path], max_weight=max_weight),
            verdict=model.qiso.verdict,
            tables={"generators": model_cli.generator_rows(model.algebra)},
            certificates=certificates,
            details={
                "method": model.qiso.method,
                "certified_degree": model.certified_degree,
                "max_weight": model.qiso.max_weight,
                "relation_degrees": model.regularity.degrees,
            },
        )

    run(context, build)


@click.command("regseq")
@input_option()
@common_options
@click.pass_context
def regseq(ctx, input_path: str, field, truncation, output_format):
    """Hilbert-series test that the relations form a regular sequence"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        algebra = context.load(input_path, GradedAlgebra)
        report = model_cli.model_service.is_regular_sequence(algebra, context.truncation)
        rows = [
            {"degree": k, "quotient": a, "expected": b}
            for k, (a, b) in enumerate(zip(report.quotient_series, report.product_series))
        ]
        certificates = {}
        if report.mismatch_degree is not None:
            certificates["mismatch_degree"] = report.mismatch_degree
        return Report(
            command=context.command(CommandEnum.REGSEQ, inputs=[input_path]),
            verdict=report.verdict,
            tables={"hilbert_series": rows},
            certificates=certificates,
            details={"relation_degrees": report.degrees},
        )

    run(context, build)


@click.command("massey")
@input_option()
@click.argument("classes", nargs=3)
@common_options
@click.pass_context
def massey(ctx, input_path: str, classes: Tuple[str, str, str], field, truncation, output_format):
    """Triple Massey product of three closed elements"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        algebra = context.load(input_path, GradedAlgebra)
        u, v, w = (context.parser.element(algebra, text, f"class {k + 1}") for k, text in enumerate(classes))
        product = model_cli.model_service.triple_massey(algebra, u, v, w)
        s, t = product.bounding
        return Report(
            command=context.command(CommandEnum.MASSEY, inputs=[input_path], classes=list(classes)),
            certificates={"bounding": {"s": s.to_text(), "t": t.to_text()}},
            details={
                "degree": product.degree,
                "representative": product.representative.to_text(),
                "indeterminacy": [x.to_text() for x in product.indeterminacy],
                "vanishes": product.vanishes,
            },
        )

    run(context, build)
