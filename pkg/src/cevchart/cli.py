"""Command-line interface.

Documents go to stdout (or ``--output``); diagnostics go to stderr.
Exit status is 0 on success, 1 on data errors and 2 on configuration errors.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path

import click

from cevchart.chart import LimitSource, Phase1Result, monitor, run_phase1
from cevchart.csvio import format_csv, ingest_csv
from cevchart.datagen import GenSpec, generate
from cevchart.errors import ConfigurationError, DataError, DomainError
from cevchart.estimator import EstimationConfig, NaiveMethod, Variant, estimate, naive_estimate
from cevchart.limits import (
    DEFAULT_ALPHA,
    DEFAULT_REPLICATES,
    SimulationConfig,
    classical_coefficients,
    reproduce_paper_tables,
    simulate_coefficients,
    table_coefficients,
)
from cevchart.render import render_chart

_LOGGER = logging.getLogger(__name__)

EXIT_DATA = 1
EXIT_CONFIG = 2

_SOURCES = {
    "table": LimitSource.TABLE,
    "montecarlo": LimitSource.MONTE_CARLO,
    "classical": LimitSource.CLASSICAL,
}


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DataError as exc:
            _fail(str(exc), EXIT_DATA)
        except (ConfigurationError, DomainError) as exc:
            _fail(str(exc), EXIT_CONFIG)

    return wrapper


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _params(p) -> dict:
    return {"mu": p.mu, "sigma": p.sigma}


input_option = click.option(
    "--input", "-i", "input_path", required=True, type=click.Path(dir_okay=False),
    help="Wide CSV file, one subgroup per row.",
)
threshold_option = click.option("--threshold", "-c", required=True, type=float,
                                 help="Detection limit C.")
size_option = click.option("--subgroup-size", "-n", "subgroup_size", required=True,
                           type=click.IntRange(min=2), help="Readings per subgroup.")
output_option = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                             help="Write the document here instead of stdout.")


def estimation_options(func):
    func = click.option("--variant", type=click.Choice([v.value for v in Variant]),
                        default=Variant.AP2.value, show_default=True)(func)
    func = click.option("--max-iterations", type=click.IntRange(min=1), default=1000,
                        show_default=True)(func)
    func = click.option("--tolerance", type=float, default=1e-8, show_default=True)(func)
    return func


def simulation_options(func):
    func = click.option("--seed", type=int, default=0, show_default=True)(func)
    func = click.option("--replicates", type=click.IntRange(min=1000),
                        default=DEFAULT_REPLICATES, show_default=True)(func)
    func = click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True)(func)
    return func


source_option = click.option("--limit-source", type=click.Choice(sorted(_SOURCES)),
                             default="table", show_default=True)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """CEV control charts for left-censored data."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


@main.command("estimate")
@input_option
@threshold_option
@size_option
@estimation_options
@click.option("--trace/--no-trace", default=False, help="Include the iteration trace.")
@output_option
@_handle_errors
def estimate_cmd(input_path, threshold, subgroup_size, tolerance, max_iterations, variant,
                 trace, output):
    """Estimate in-control mean and standard deviation."""
    config = EstimationConfig(tolerance, max_iterations, Variant(variant))
    matrix = ingest_csv(input_path, threshold, subgroup_size)
    result = estimate(matrix.to_sample(), config)
    doc = {
        "mu": result.params.mu,
        "sigma": result.params.sigma,
        "wc": result.w_c,
        "pc": result.p_c,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    if trace:
        doc["trace"] = [list(t) for t in result.trace]
    _emit(_dump(doc), output)


@main.command("limits")
@click.option("--n", "n", required=True, type=click.IntRange(min=2), help="Subgroup size.")
@click.option("--pc", "p_c", required=True, type=float, help="Censoring proportion.")
@source_option
@simulation_options
@output_option
@_handle_errors
def limits_cmd(n, p_c, limit_source, alpha, replicates, seed, output):
    """Standardized UCL coefficients for a subgroup size and censoring proportion."""
    source = _SOURCES[limit_source]
    if source is LimitSource.TABLE:
        coeffs = table_coefficients(n, p_c)
    elif source is LimitSource.CLASSICAL:
        coeffs = classical_coefficients(n)
    else:
        coeffs = simulate_coefficients(
            SimulationConfig(n=n, p_c=p_c, alpha=alpha, replicates=replicates, seed=seed)
        )
    for w in coeffs.warnings:
        _LOGGER.warning(w)
    _emit(_dump(coeffs.to_dict()), output)


@main.command("tables")
@simulation_options
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@output_option
@_handle_errors
def tables_cmd(alpha, replicates, seed, workers, output):
    """Compare the published coefficients with Monte Carlo and A3/B4."""
    _emit(_dump(reproduce_paper_tables(alpha, replicates, seed, workers=workers)), output)


@main.command("phase1")
@input_option
@threshold_option
@size_option
@estimation_options
@source_option
@simulation_options
@click.option("--max-rounds", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--chart-dir", type=click.Path(file_okay=False), default=".",
              show_default=True, help="Directory for the two chart files.")
@click.option("--format", "chart_format", type=click.Choice(["svg", "csv", "json"]),
              default="svg", show_default=True)
@click.option("--units", default="measurement units", show_default=True,
              help="Axis unit label for the charts.")
@output_option
@_handle_errors
def phase1_cmd(input_path, threshold, subgroup_size, tolerance, max_iterations, variant,
               limit_source, alpha, replicates, seed, max_rounds, chart_dir, chart_format,
               units, output):
    """Phase I: estimate parameters, set limits, exclude signalling subgroups."""
    config = EstimationConfig(tolerance, max_iterations, Variant(variant))
    matrix = ingest_csv(input_path, threshold, subgroup_size)
    result = run_phase1(matrix, config, _SOURCES[limit_source], max_rounds,
                        alpha=alpha, replicates=replicates, seed=seed)
    if result.max_rounds_reached:
        _LOGGER.warning("subgroups still signal after %d rounds", result.rounds)
    out_dir = Path(chart_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for report in (result.xbar_report, result.s_report):
        path = out_dir / f"{report.chart_kind.value}.{chart_format}"
        path.write_text(render_chart(report, chart_format, units), encoding="utf-8")
    _emit(_dump(result.to_dict()), output)


@main.command("monitor")
@input_option
@click.option("--baseline", "-b", required=True, type=click.Path(dir_okay=False),
              help="Phase I result JSON.")
@output_option
@_handle_errors
def monitor_cmd(input_path, baseline, output):
    """Phase II: chart new subgroups against Phase I limits."""
    try:
        doc = json.loads(Path(baseline).read_text(encoding="utf-8"))
        base = Phase1Result.from_dict(doc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigurationError(f"unusable baseline {baseline}: {exc}") from None
    matrix = ingest_csv(input_path, base.scheme.limit_c, base.n)
    xs, ss = monitor(matrix, base)
    ucl_x, ucl_s = base.limits
    _emit(_dump({"xbar_ucl": ucl_x, "s_ucl": ucl_s, "xbar_signals": xs, "s_signals": ss}),
          output)


@main.command("simulate")
@click.option("--mu", required=True, type=float)
@click.option("--sigma", required=True, type=float)
@threshold_option
@click.option("--k", "k", required=True, type=click.IntRange(min=1), help="Subgroups.")
@click.option("--n", "n", required=True, type=click.IntRange(min=2), help="Subgroup size.")
@click.option("--seed", type=int, default=0, show_default=True)
@output_option
@_handle_errors
def simulate_cmd(mu, sigma, threshold, k, n, seed, output):
    """Generate censored normal subgroup data as CSV."""
    _emit(format_csv(generate(GenSpec(mu, sigma, threshold, k, n, seed))), output)


@main.command("compare-naive")
@input_option
@threshold_option
@size_option
@estimation_options
@output_option
@_handle_errors
def compare_naive_cmd(input_path, threshold, subgroup_size, tolerance, max_iterations,
                      variant, output):
    """Naive substitution estimates next to the CEV estimate."""
    sample = ingest_csv(input_path, threshold, subgroup_size).to_sample()
    naive = {}
    for method in NaiveMethod:
        try:
            naive[method.value] = _params(naive_estimate(sample, method))
        except DataError as exc:
            naive[method.value] = {"error": str(exc)}
    result = estimate(sample, EstimationConfig(tolerance, max_iterations, Variant(variant)))
    doc = {
        "naive": naive,
        "cev": {**_params(result.params), "iterations": result.iterations,
                "converged": result.converged},
    }
    _emit(_dump(doc), output)


if __name__ == "__main__":
    main()
