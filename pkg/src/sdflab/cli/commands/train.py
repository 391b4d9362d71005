"""Train command: fit one network arm on the train split."""

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
from sdflab.shell.pipeline import layout_for, run_train


@click.command()
@experiment_options
@arm_option
@click.option(
    "--limit",
    type=click.IntRange(min=1),
    default=None,
    help="Train on only the first N train cases (e.g. 1 to overfit)",
)
@click.pass_context
def train(
    ctx: click.Context,
    config_path: str | None,
    seed: int | None,
    out: str | None,
    arm: str,
    limit: int | None,
) -> None:
    """Train the pwc or pwr network and save parameters and loss history."""
    echo = CliEcho(ctx)
    head = Head(arm)
    try:
        config = load_config(config_path, out)
        seed = resolve_seed(config, seed)
        echo.verbose(f"Training {head.value} for {config.train.epochs} epochs...")
        result = run_train(config, seed, head, limit)
    except Exception as e:
        exit_on_error(echo, e)

    history = result.loss_history
    echo.verbose(f"Loss: {history[0]:.6g} -> {history[-1]:.6g}")
    echo.success(f"Trained {head.value}; parameters in {layout_for(config, seed).params_path(head)}")
