"""Run command: every stage for every configured seed."""

import click

from sdflab.cli.utils import CliEcho, exit_on_error, experiment_options, load_config
from sdflab.shell.pipeline import run_experiment


@click.command()
@experiment_options
@click.pass_context
def run(ctx: click.Context, config_path: str | None, seed: int | None, out: str | None) -> None:
    """Generate, train both arms, predict and evaluate for each seed.

    ``--seed`` restricts the run to a single seed.
    """
    echo = CliEcho(ctx)
    try:
        config = load_config(config_path, out)
        if seed is not None:
            config = config.model_copy(update={"seeds": [seed]})
        reports = run_experiment(config)
    except Exception as e:
        exit_on_error(echo, e)

    echo.success(f"Finished {len(reports)} seeds; summary in {config.output_dir / 'summary.md'}")
