"""Evaluate command: metrics, means and gains for both arms."""

import click

from sdflab.cli.utils import CliEcho, exit_on_error, experiment_options, load_config, resolve_seed
from sdflab.shell.pipeline import layout_for, run_evaluate
from sdflab.shell.report_generator import generate_metrics_table


@click.command()
@experiment_options
@click.pass_context
def evaluate(ctx: click.Context, config_path: str | None, seed: int | None, out: str | None) -> None:
    """Evaluate both arms on the test split and write report.json, metrics.csv and table.md."""
    echo = CliEcho(ctx)
    try:
        config = load_config(config_path, out)
        seed = resolve_seed(config, seed)
        report = run_evaluate(config, seed)
    except Exception as e:
        exit_on_error(echo, e)

    echo.echo(generate_metrics_table(report))
    echo.success(f"Report written to {layout_for(config, seed).report_dir}")
