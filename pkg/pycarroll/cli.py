import csv
import io
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence

import click
import jsonpickle
from tabulate import tabulate

from pycarroll.checks import CheckResult, Report, property_suite
from pycarroll.const import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    FORMAT_CSV,
    FORMAT_JSON,
    FORMAT_TEXT,
    FORMATS,
    HORIZON_TOLERANCE,
    MAX_HARMONIC_DEGREE,
    STATUS_FAIL,
    STATUS_PASS,
    TABLE_TOLERANCE,
)
from pycarroll.forms import BundleError, CarrollBundle, FormError
from pycarroll.helpers import split_top_level
from pycarroll.hodge import star_table_rows
from pycarroll.horizon import harmonic_scan, verify_hodge_table, verify_laplacian_table
from pycarroll.horizon.tables import reference_forms
from pycarroll.maxwell import (
    EMFieldSymbolic,
    FieldConfigError,
    load_config,
    maxwell_residual,
    run_simulation,
)
from pycarroll.maxwell.fdtd import write_csv_stream
from pycarroll.maxwell.symbolic import flat_space
from pycarroll.scalar_field import ExpressionSyntaxError, parse_scalar

_LOGGER = logging.getLogger(__name__)

INPUT_ERRORS = (BundleError, ExpressionSyntaxError, FieldConfigError, FormError)
REPORT_HEADERS = ["Suite", "Case", "Status", "Max deviation", "Witness", "Expected", "Computed"]


class RunOptions:
    """Global options shared by every command."""

    def __init__(
        self,
        seed: int,
        tolerance: float,
        samples: int,
        output_format: str,
        output: Optional[Path],
    ) -> None:
        self.seed = seed
        self.tolerance = tolerance
        self.samples = samples
        self.output_format = output_format
        self.output = output

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.__dict__})"

    def emit(self, text: str) -> None:
        """Machine-readable output goes to ``--output`` or stdout."""
        if self.output is not None:
            self.output.write_text(text if text.endswith("\n") else f"{text}\n")
        else:
            click.echo(text, nl=not text.endswith("\n"))


pass_options = click.make_pass_decorator(RunOptions)


def _emit_report(options: RunOptions, report: Report) -> None:
    if options.output_format == FORMAT_JSON:
        options.emit(report.to_json())
    elif options.output_format == FORMAT_CSV:
        options.emit(report.to_csv())
    else:
        _LOGGER.info("\n%s", tabulate(report.rows(), headers=REPORT_HEADERS))

    failure = report.first_failure
    if failure is not None:
        _LOGGER.error(
            "First violated invariant: %s / %s (%s, deviation %s) at %s",
            failure.suite,
            failure.case,
            failure.status,
            failure.max_deviation,
            failure.witness or "-",
        )
        raise click.exceptions.Exit(1)
    _LOGGER.info("All %d checks passed", len(report))


def _emit_table(options: RunOptions, headers: List[str], rows: Sequence[Sequence[Any]]) -> None:
    if options.output_format == FORMAT_JSON:
        options.emit(
            jsonpickle.encode([dict(zip(headers, row)) for row in rows], unpicklable=False)
        )
    elif options.output_format == FORMAT_CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(rows)
        options.emit(buffer.getvalue())
    else:
        _LOGGER.info("\n%s", tabulate(rows, headers=headers))


@click.group(invoke_without_command=False)
@click.option(
    "--seed",
    envvar="CARROLL_SEED",
    required=False,
    default=DEFAULT_SEED,
    type=click.INT,
    help="Seed of the random inputs and the sampling sequence",
    show_default=True,
    show_envvar=True,
)
@click.option(
    "--tolerance",
    envvar="CARROLL_TOLERANCE",
    required=False,
    default=DEFAULT_TOLERANCE,
    type=click.FloatRange(min=0, min_open=True),
    help="Residual below which a form counts as zero",
    show_default=True,
    show_envvar=True,
)
@click.option(
    "--samples",
    envvar="CARROLL_SAMPLES",
    required=False,
    default=DEFAULT_SAMPLE_COUNT,
    type=click.IntRange(min=1),
    help="Number of sample points per check",
    show_default=True,
    show_envvar=True,
)
@click.option(
    "--format",
    "output_format",
    envvar="CARROLL_FORMAT",
    required=False,
    default=FORMAT_TEXT,
    type=click.Choice(FORMATS),
    show_default=True,
    show_envvar=True,
)
@click.option(
    "--output",
    required=False,
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write machine-readable output to this file instead of stdout",
)
@click.option("--verbose", is_flag=True, default=False, help="Log at DEBUG level")
@click.pass_context
def cli(
    ctx,
    seed: int,
    tolerance: float,
    samples: int,
    output_format: str,
    output: Optional[Path],
    verbose: bool,
) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)

    ctx.obj = RunOptions(seed, tolerance, samples, output_format, output)


@cli.command()
@click.option(
    "--n",
    "dimensions",
    multiple=True,
    default=(1, 2, 3),
    type=click.IntRange(min=1, max=3),
    help="Base dimension(s) to verify",
    show_default=True,
)
@pass_options
def verify(options: RunOptions, dimensions: Sequence[int]) -> None:
    """Run the forms and Hodge property suites."""
    report = property_suite(
        sorted(set(dimensions)), options.seed, options.tolerance, options.samples
    )
    _emit_report(options, report)


def _parse_bundle(metric: Optional[str], connection: Optional[str], n: int) -> CarrollBundle:
    if metric is None:
        rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    else:
        rows = [
            [parse_scalar(entry) for entry in split_top_level(row, ",")]
            for row in split_top_level(metric, ";")
        ]
    components = None
    if connection is not None:
        components = [parse_scalar(entry) for entry in split_top_level(connection, ",")]
    return CarrollBundle(rows, components, name="cli")


@cli.command()
@click.option(
    "--metric",
    required=False,
    default=None,
    help="Base metric rows separated by ';', entries by ',' (e.g. '1+x1^2,0;0,1')",
)
@click.option(
    "--connection",
    required=False,
    default=None,
    help="Connection components A_a separated by ',' (e.g. '0,x1')",
)
@click.option(
    "--n",
    "dimension",
    required=False,
    default=3,
    type=click.IntRange(min=1),
    help="Base dimension of the flat metric used when --metric is omitted",
    show_default=True,
)
@pass_options
def star_table(
    options: RunOptions, metric: Optional[str], connection: Optional[str], dimension: int
) -> None:
    """Print the Hodge star of every basis monomial."""
    try:
        bundle = _parse_bundle(metric, connection, dimension)
    except INPUT_ERRORS as err:
        raise click.BadParameter(str(err)) from err
    _emit_table(options, ["Monomial", "Star"], star_table_rows(bundle))


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@pass_options
def maxwell_run(options: RunOptions, config: Path) -> None:
    """Run the log-time grid solver described by a config file."""
    try:
        sim_config = load_config(config)
    except FieldConfigError as err:
        raise click.BadParameter(str(err), param_hint="CONFIG") from err

    result = run_simulation(sim_config)
    if options.output_format == FORMAT_TEXT:
        _LOGGER.info("\n%s", tabulate(result.rows, headers="keys"))
    elif options.output_format == FORMAT_JSON:
        options.emit(jsonpickle.encode(result.rows, unpicklable=False))
    else:
        buffer = io.StringIO()
        write_csv_stream(result.rows, buffer)
        options.emit(buffer.getvalue())
    _LOGGER.info("Relative energy drift: %.3e", result.relative_energy_drift())


@cli.command()
@click.option("--e", "e_text", required=True, help="E components 'Ex,Ey,Ez' over x1..x3, t")
@click.option("--b", "b_text", required=True, help="B components 'Bx,By,Bz' over x1..x3, t")
@pass_options
def maxwell_check(options: RunOptions, e_text: str, b_text: str) -> None:
    """Evaluate the Maxwell residuals of a symbolic (E, B) pair."""
    e_parts = split_top_level(e_text, ",")
    b_parts = split_top_level(b_text, ",")
    if len(e_parts) != 3 or len(b_parts) != 3:
        raise click.BadParameter("E and B need exactly three components each")
    try:
        field = EMFieldSymbolic.parse(e_parts, b_parts)
    except INPUT_ERRORS as err:
        raise click.BadParameter(str(err)) from err

    samples = flat_space().samples(options.samples, options.seed)
    residual = maxwell_residual(field, samples, options.tolerance, strict=False)
    results = []
    for name, value in (
        ("dF = 0 and d*F = 0", residual.form_residual),
        ("div B, curl E - LB, div E, curl B + LE", residual.vector_residual),
    ):
        status = STATUS_PASS if value < options.tolerance else STATUS_FAIL
        results.append(CheckResult("maxwell", name, status, value, residual.witness))
    if not residual.consistent:
        gap = abs(residual.form_residual - residual.vector_residual)
        results.append(
            CheckResult("maxwell", "formulations agree", STATUS_FAIL, gap, residual.witness)
        )
    _emit_report(options, Report(results))


@cli.command()
@click.option(
    "--kappa",
    "kappas",
    multiple=True,
    default=(0.5,),
    type=click.FloatRange(min=0, min_open=True),
    help="Surface gravity (repeatable)",
    show_default=True,
)
@pass_options
def horizon_table(options: RunOptions, kappas: Sequence[float]) -> None:
    """Verify the horizon Hodge table and the Laplacian table."""
    report = Report()
    for kappa in kappas:
        report.extend(verify_hodge_table(kappa, min(options.tolerance, TABLE_TOLERANCE)))
        for form in reference_forms():
            report.extend(verify_laplacian_table(form, kappa, HORIZON_TOLERANCE))
    _emit_report(options, report)


@cli.command()
@click.option(
    "--kappa",
    required=False,
    default=0.5,
    type=click.FloatRange(min=0, min_open=True),
    show_default=True,
)
@click.option(
    "--l-max",
    required=False,
    default=2,
    type=click.IntRange(min=0, max=MAX_HARMONIC_DEGREE),
    show_default=True,
)
@click.option(
    "--lambda-max",
    required=False,
    default=3,
    type=click.IntRange(min=0),
    show_default=True,
)
@click.option(
    "--degree",
    "degrees",
    multiple=True,
    default=(0, 1, 2, 3),
    type=click.IntRange(min=0, max=3),
    help="Form degree(s) to scan",
    show_default=True,
)
@pass_options
def horizon_scan(
    options: RunOptions, kappa: float, l_max: int, lambda_max: int, degrees: Sequence[int]
) -> None:
    """Search separable t^lambda Y_lm ansaetze for harmonic forms."""
    hits = harmonic_scan(kappa, l_max, lambda_max, tuple(degrees), HORIZON_TOLERANCE)
    headers = ["degree", "l", "m", "lambda", "pattern", "residual", "table_residual"]
    _emit_table(options, headers, [hit.as_row() for hit in hits])


if __name__ == "__main__":
    cli()
