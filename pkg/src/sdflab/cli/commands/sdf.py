"""Sdf command: signed distance files for every generated case."""

import click

from sdflab.cli.utils import CliEcho, exit_on_error, experiment_options, load_config, resolve_seed
from sdflab.shell.pipeline import layout_for, run_sdf


@click.command()
@experiment_options
@click.option(
    "--clamp-tau",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="Clamp distances to [-tau, tau] world units",
)
@click.pass_context
def sdf(
    ctx: click.Context,
    config_path: str | None,
    seed: int | None,
    out: str | None,
    clamp_tau: float | None,
) -> None:
    """Compute the signed distance field of every case in the manifest."""
    echo = CliEcho(ctx)
    try:
        config = load_config(config_path, out)
        seed = resolve_seed(config, seed)
        paths = run_sdf(config, seed, clamp_tau)
    except Exception as e:
        exit_on_error(echo, e)

    echo.success(f"Wrote {len(paths)} signed distance files to {layout_for(config, seed).sdf_dir}")
