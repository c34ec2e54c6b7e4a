"""
Command-line entry point for ddbar
"""

import logging
from typing import Optional

import click

from ddbar.cli import bicomplexes, cartan, models, replicate, toric, validate
from ddbar.cli.common import CLIContext
from ddbar.core.config import FIELD_TAGS, LOG_LEVELS, settings
from ddbar.core.logging_config import setup_logging

logger = logging.getLogger(__name__)


@click.group()
@click.option("--field", type=click.Choice(FIELD_TAGS), default=None, help="Coefficient field")
@click.option("--truncate", "truncation", type=int, default=None, help="Truncation bound N")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default=None, help="Report format")
@click.option(
    "--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None, help="Override DDBAR_LOG_LEVEL"
)
@click.version_option(settings.VERSION, prog_name=settings.APP_NAME)
@click.pass_context
def cli(
    ctx, field: Optional[str], truncation: Optional[int], output_format: Optional[str], log_level: Optional[str]
):
    """Exact ddbar-lemma checks for bicomplexes, cbbas, toric varieties and Cartan models"""
    setup_logging(log_level)
    ctx.obj = CLIContext(
        field or settings.DEFAULT_FIELD,
        truncation if truncation is not None else settings.DEFAULT_TRUNCATION,
        output_format or settings.DEFAULT_FORMAT,
    )
    logger.debug("Starting %s %s", settings.APP_NAME, ctx.invoked_subcommand)


# Commands
cli.add_command(bicomplexes.cohomology)
cli.add_command(bicomplexes.ddbar)
cli.add_command(bicomplexes.qiso)
cli.add_command(models.minimal_model)
cli.add_command(models.koszul)
cli.add_command(models.regseq)
cli.add_command(models.massey)
cli.add_command(toric.toric)
cli.add_command(cartan.cartan)
cli.add_command(replicate.replicate)
cli.add_command(validate.validate)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
