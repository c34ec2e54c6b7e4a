"""
Shared options, input loading and report output for the command groups
"""

import json
import sys
import time
from typing import Any, Callable, Dict, List, Optional

import click
from rich.console import Console
from rich.table import Table

from ddbar.core.config import FIELD_TAGS, settings
from ddbar.core.exceptions import EXIT_OK, EXIT_VERDICT_FAILED, DdbarError, FieldMismatchError, PreconditionError
from ddbar.core.logging_config import LoggerMixin
from ddbar.models.algebra import GradedAlgebra
from ddbar.models.bicomplex import Bicomplex, Chain, CohomologySpace
from ddbar.models.cartan import TCbba
from ddbar.models.scalars import FieldTag, Scalar, parse_scalar
from ddbar.schemas.reports import Command, CommandEnum, OutputFormatEnum, Report
from ddbar.services.algebra_service import AlgebraService
from ddbar.services.parser_service import Parsed, ParserService


class CLIContext(LoggerMixin):
    """Options shared by every command, carried on the click context"""

    def __init__(self, field: str, truncation: int, output_format: str):
        self.field = FieldTag(field)
        self.truncation = truncation
        self.output_format = OutputFormatEnum(output_format)
        self.parser = ParserService(self.field)
        self.algebra_service = AlgebraService()

    def command(self, name: CommandEnum, subcommand: Optional[str] = None, inputs=(), **options) -> Command:
        return Command(
            name=name,
            subcommand=subcommand,
            inputs=[str(p) for p in inputs],
            field=self.field.value,
            truncation=self.truncation,
            output_format=self.output_format,
            options={k: v for k, v in sorted(options.items()) if v is not None},
        )

    def load(self, path: str, *expected: type) -> Parsed:
        obj = self.parser.load(path)
        if expected and not isinstance(obj, expected):
            names = " or ".join(t.__name__ for t in expected)
            raise PreconditionError(f"{path} holds a {type(obj).__name__}, expected {names}")
        return obj

    def scalar(self, text: str, option: str = "--lambda") -> Scalar:
        c = parse_scalar(text)
        if not self.field.contains(c.minimal_tag()):
            raise FieldMismatchError(f"{option} {c.to_text()} is not in {self.field.value}")
        return c

    def window(self, obj: Parsed, max_weight: Optional[int] = None) -> Bicomplex:
        """The bicomplex of a document, cut to the truncation for algebras"""
        if isinstance(obj, Bicomplex):
            return obj
        algebra = obj.algebra if isinstance(obj, TCbba) else obj
        if not isinstance(algebra, GradedAlgebra):
            raise PreconditionError(f"{type(obj).__name__} has no underlying bicomplex")
        limit = algebra.truncation - (2 if algebra.bigraded else 1)
        window = min(self.truncation, limit)
        if max_weight is None and algebra.needs_weight_bound:
            max_weight = window // 2 + 1
        return self.algebra_service.underlying_bicomplex(algebra, window, max_weight).bicomplex


def common_options(func: Callable) -> Callable:
    """--field, --truncate and --format on a command"""
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice(["text", "json"]),
        default=None,
        help="Report format",
    )(func)
    func = click.option("--truncate", "truncation", type=int, default=None, help="Truncation bound N")(func)
    func = click.option("--field", type=click.Choice(FIELD_TAGS), default=None, help="Coefficient field")(func)
    return func


def input_option(required: bool = True) -> Callable:
    return click.option(
        "--input",
        "input_path",
        type=click.Path(exists=True, dir_okay=False),
        required=required,
        help="Input document",
    )


def resolve(ctx: click.Context, field: Optional[str], truncation: Optional[int], output_format: Optional[str]) -> CLIContext:
    """Command-level options override the ones given on the group"""
    parent = ctx.find_object(CLIContext)
    return CLIContext(
        field or (parent.field.value if parent else settings.DEFAULT_FIELD),
        truncation if truncation is not None else (parent.truncation if parent else settings.DEFAULT_TRUNCATION),
        output_format or (parent.output_format.value if parent else settings.DEFAULT_FORMAT),
    )


# Report helpers


def space_rows(space: CohomologySpace) -> List[Dict[str, Any]]:
    if space.flavor.bigraded:
        return [{"bidegree": list(bd), "dim": n} for bd, n in sorted(space.dims.items()) if n]
    return [{"degree": k, "dim": n} for k, n in sorted(space.dims.items()) if n]


def chain_rows(bicomplex: Bicomplex, chain: Optional[Chain]) -> List[Dict[str, Any]]:
    if not chain:
        return []
    return [
        {"bidegree": list(bd), "basis": bicomplex.label(bd, i), "value": c.to_text()}
        for bd in sorted(chain)
        for i, c in sorted(chain[bd].items())
    ]


def scalar_map(values: Dict[str, Scalar]) -> Dict[str, str]:
    return {k: v.to_text() for k, v in sorted(values.items())}


# Output


def _cell(value: Any) -> str:
    return value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)


def render_text(report: Report, console: Console) -> None:
    verdict = {None: "[cyan]computed[/cyan]", True: "[green]true[/green]", False: "[red]false[/red]"}
    console.print(f"[bold]{report.command.label}[/bold]  verdict: {verdict[report.verdict]}")
    for name, rows in report.tables.items():
        if not rows:
            continue
        table = Table(title=name, show_lines=False)
        columns = list(rows[0].keys())
        for column in columns:
            table.add_column(column)
        for row in rows:
            table.add_row(*(_cell(row.get(c)) for c in columns))
        console.print(table)
    for section in ("certificates", "details"):
        payload = getattr(report, section)
        if payload:
            console.print(f"[bold]{section}[/bold]")
            console.print_json(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    if report.timing_seconds is not None:
        console.print(f"[dim]{report.timing_seconds:.3f} s[/dim]")


def emit(report: Report) -> None:
    if report.command.output_format == OutputFormatEnum.JSON:
        click.echo(report.to_json())
    else:
        render_text(report, Console(file=sys.stdout, soft_wrap=True))


def run(context: CLIContext, build: Callable[[], Report]) -> None:
    """Build and emit a report, mapping outcomes onto the exit codes"""
    started = time.perf_counter()
    try:
        report = build()
    except DdbarError as e:
        context.log_warning("Command failed", error=type(e).__name__, message=e.message)
        if context.output_format == OutputFormatEnum.JSON:
            click.echo(json.dumps(e.to_dict(), sort_keys=True, indent=2, ensure_ascii=False), err=True)
        else:
            click.echo(f"error: {e.message}", err=True)
        sys.exit(e.exit_code)
    except Exception as e:
        context.log_error("Unexpected failure", error=str(e))
        raise
    if report.command.output_format == OutputFormatEnum.TEXT:
        report.timing_seconds = time.perf_counter() - started
    emit(report)
    sys.exit(EXIT_VERDICT_FAILED if report.verdict is False else EXIT_OK)
