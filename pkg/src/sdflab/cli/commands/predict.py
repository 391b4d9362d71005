"""Predict command: full-resolution predictions of one arm."""

import click

from sdflab.cli.utils import (
    CliEcho,
    arm_option,
    exit_on_error,
    experiment_options,
    load_config,
    resolve_seed,
)
from sdflab.core.net import Head
from sdflab.shell.pipeline import run_predict


@click.command()
@experiment_options
@arm_option
@click.option(
    "--split",
    type=click.Choice(["train", "test"]),
    default="test",
    show_default=True,
    help="Manifest split to predict",
)
@click.pass_context
def predict(
    ctx: click.Context,
    config_path: str | None,
    seed: int | None,
    out: str | None,
    arm: str,
    split: str,
) -> None:
    """Write raw fields and thresholded segmentations for every case of a split."""
    echo = CliEcho(ctx)
    head = Head(arm)
    try:
        config = load_config(config_path, out)
        seed = resolve_seed(config, seed)
        ids = run_predict(config, seed, head, "train" if split == "train" else "test")
    except Exception as e:
        exit_on_error(echo, e)

    echo.success(f"Predicted {len(ids)} {split} cases with {head.value}")
