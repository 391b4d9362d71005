"""Generate command: synthetic dataset of voxelized primitives."""

import click

from sdflab.cli.utils import CliEcho, exit_on_error, experiment_options, load_config, resolve_seed
from sdflab.shell.pipeline import layout_for, run_generate


@click.command()
@experiment_options
@click.pass_context
def generate(ctx: click.Context, config_path: str | None, seed: int | None, out: str | None) -> None:
    """Generate the synthetic dataset: one VVOL mask per case plus a manifest."""
    echo = CliEcho(ctx)
    try:
        config = load_config(config_path, out)
        seed = resolve_seed(config, seed)
        echo.verbose(f"Generating {config.dataset.dims} cases with seed {seed}...")
        manifest = run_generate(config, seed)
    except Exception as e:
        exit_on_error(echo, e)

    echo.success(
        f"Generated {len(manifest.split('train'))} train and {len(manifest.split('test'))} "
        f"test cases in {layout_for(config, seed).dataset_dir}"
    )
