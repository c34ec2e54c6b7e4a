"""
Replication commands: section5 (alias pipeline), mhs and flag
"""

import click

from ddbar.cli.common import common_options, resolve, run, scalar_map
from ddbar.core.logging_config import LoggerMixin
from ddbar.schemas.reports import CommandEnum, Report
from ddbar.services.replication_service import ObstructionReport, ReplicationService, PipelineReport


class ReplicationCLI(LoggerMixin):
    """Replication command handlers"""

    def __init__(self):
        self.replication_service = ReplicationService()

    def obstruction_details(self, report: ObstructionReport) -> dict:
        return {
            "coefficients": scalar_map(report.coefficients),
            "rational": dict(sorted(report.rational.items())),
            "homotopy_dims": report.homotopy_dims,
            "kernel_dim": report.kernel_dim,
            "kernel_is_r": report.kernel_is_r,
            "same_cohomology_map": report.same_cohomology_map,
            "obstructed": report.obstructed,
        }

    def pipeline_report(self, context, report: PipelineReport, lam_text: str) -> Report:
        model = report.minimal_model
        stages = [
            {"degree": k, "dim": model.dimension_table.get(k, 0), "closed": c, "killing": y}
            for k, (c, y) in sorted(model.stage_counts.items())
        ]
        kernels = [
            {
                "degree": check.degree,
                "kernel_dim": check.kernel_dim,
                "listed": check.listed,
                "rank": check.rank,
                "closed": check.closed,
            }
            for check in model.kernel_checks
        ]
        certificates = {}
        for label, morphism in (("psi", report.psi), ("psi_tilde", report.psi_tilde)):
            if not morphism.valid:
                certificates[label] = {"witness": morphism.witness, "message": morphism.message}
        if report.lambda_w.qiso.failures:
            certificates["lambda_w_qiso"] = report.lambda_w.qiso.failures
        return Report(
            command=context.command(CommandEnum.REPLICATE, "section5", **{"lambda": lam_text}),
            verdict=report.verdict,
            tables={
                "betti": [{"degree": k, "betti": b} for k, b in enumerate(report.betti)],
                "minimal_model": stages,
                "kernel_checks": kernels,
            },
            certificates=certificates,
            details={
                "lambda": report.lam.to_text(),
                "psi_valid": report.psi.valid,
                "psi_tilde_valid": report.psi_tilde.valid,
                "lambda_w": {
                    "valid": report.lambda_w.valid,
                    "qiso": report.lambda_w.qiso.verdict,
                    "window": report.lambda_w.window,
                    "certified": f"Phi: LambdaW -> H_C is checked through total degree {report.lambda_w.window} only",
                },
                "massey": {
                    label: {"representative": product.representative.to_text(), "vanishes": product.vanishes}
                    for label, product in sorted(report.massey.items())
                },
                "rational_model": {
                    "rational_coefficients": report.triple.rational_coefficients,
                    "cohomology_iso": report.triple.cohomology_iso,
                    "certified_degree": report.triple.certified_degree,
                },
                "obstruction": self.obstruction_details(report.obstruction),
            },
        )


replication_cli = ReplicationCLI()

lambda_option = click.option(
    "--lambda", "lam", default="lambda", show_default=True, help="Parameter of the counterexample family"
)


@click.group("replicate")
def replicate():
    """End-to-end reproductions of the worked examples"""


@replicate.command("section5")
@lambda_option
@common_options
@click.pass_context
def counterexample(ctx, lam: str, field, truncation, output_format):
    """Minimal model, ψ, ΛW, ψ̃, Massey products and the obstruction for one parameter value"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        value = context.scalar(lam)
        report = replication_cli.replication_service.pipeline(value)
        return replication_cli.pipeline_report(context, report, lam)

    run(context, build)


replicate.add_command(counterexample, "pipeline")


@replicate.command("mhs")
@lambda_option
@click.option("--compare", is_flag=True, help="Also run the obstruction and require agreement")
@common_options
@click.pass_context
def mhs(ctx, lam: str, compare: bool, field, truncation, output_format):
    """Mixed Hodge extension class of the cohomology of A_λ"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        value = context.scalar(lam)
        service = replication_cli.replication_service
        extension = service.mhs_extension(value)
        details = {
            "lambda": value.to_text(),
            "entries": scalar_map(extension.entries),
            "projection": scalar_map(extension.projection),
            "cokernel_dim": extension.cokernel_dim,
            "trivial": extension.trivial,
        }
        verdict = None
        if compare:
            obstruction = service.obstruction(value)
            details["obstruction"] = replication_cli.obstruction_details(obstruction)
            verdict = obstruction.obstructed == (not extension.trivial)
        return Report(
            command=context.command(CommandEnum.REPLICATE, "mhs", compare=compare, **{"lambda": lam}),
            verdict=verdict,
            details=details,
        )

    run(context, build)


@replicate.command("flag")
@common_options
@click.pass_context
def flag(ctx, field, truncation, output_format):
    """Strong-formality certificate for the complete flag manifold of C^3"""
    context = resolve(ctx, field, truncation, output_format)

    def build() -> Report:
        certificate = replication_cli.replication_service.flag_certificate(context.truncation)
        return Report(
            command=context.command(CommandEnum.REPLICATE, "flag"),
            verdict=certificate.verdict,
            tables={
                "betti": [{"degree": k, "betti": b} for k, b in enumerate(certificate.betti)],
                "counts": [
                    {"degree": k, "h_BC": h_bc, "h_A": h_a, "b": b}
                    for k, h_bc, h_a, b in certificate.ddbar.table
                ],
            },
            certificates={"square_failures": certificate.failures} if certificate.failures else {},
            details={
                "koszul_qiso": certificate.koszul_qiso.verdict,
                "bigraded_qiso": certificate.bigraded_qiso.verdict,
                "ddbar": certificate.ddbar.verdict,
                "comparison_valid": certificate.comparison_valid,
                "comparison_real": certificate.comparison_real,
                "square_commutes": certificate.square_commutes,
            },
        )

    run(context, build)
