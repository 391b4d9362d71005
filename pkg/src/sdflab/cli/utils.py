"""Common utilities for CLI commands."""

import logging
from collections.abc import Callable
from pathlib import Path
from typing import NoReturn, Optional

import click
from pydantic import ValidationError

from sdflab.core.config import ExperimentConfig
from sdflab.core.exceptions import SdfLabError
from sdflab.core.net import Head


def setup_logging(debug: bool, verbose: bool, quiet: bool) -> None:
    """Configure logging based on CLI flags.

    Args:
        debug: Enable debug logging
        verbose: Enable verbose logging
        quiet: Minimize output
    """
    if quiet:
        level = logging.ERROR
    elif debug:
        level = logging.DEBUG
    elif verbose:
        level = logging.INFO
    else:
        level = logging.WARNING

    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")


def validate_output_path(output_path: Optional[str]) -> Optional[Path]:
    """Validate and prepare an output file path.

    Args:
        output_path: Output file path or None

    Returns:
        Path object or None

    Raises:
        click.ClickException: If the path is a directory or its parent cannot be created
    """
    if output_path is None:
        return None

    path = Path(output_path)
    if path.parent and not path.parent.exists():
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
        except Exception as e:
            raise click.ClickException(f"Cannot create output directory: {e}")

    if path.exists() and not path.is_file():
        raise click.ClickException(f"Output path is not a file: {output_path}")

    return path


def _echo_with_flags(
    message: str,
    *,
    err: bool = False,
    verbose_only: bool = False,
    quiet: bool = False,
    verbose: bool = False,
    **kwargs,
) -> None:
    """Echo that respects quiet/verbose flags; errors always show."""
    if quiet and not err:
        return
    if verbose_only and not verbose:
        return
    click.echo(message, err=err, **kwargs)


class CliEcho:
    """Context-aware echo wrapper for CLI commands."""

    def __init__(self, ctx: click.Context):
        obj = ctx.obj or {}
        self._quiet = obj.get("quiet", False)
        self._verbose = obj.get("verbose", False)

    def echo(
        self, message: str, *, err: bool = False, verbose_only: bool = False, **kwargs
    ) -> None:
        _echo_with_flags(
            message,
            err=err,
            verbose_only=verbose_only,
            quiet=self._quiet,
            verbose=self._verbose,
            **kwargs,
        )

    def error(self, message: str, **kwargs) -> None:
        """Echo error message (shown even in quiet mode)."""
        click.echo(message, err=True, **kwargs)

    def verbose(self, message: str, **kwargs) -> None:
        """Echo verbose message (only shown with --verbose)."""
        self.echo(message, verbose_only=True, **kwargs)

    def success(self, message: str) -> None:
        self.echo(click.style(f"✓ {message}", fg="green"))


def report_error(echo: CliEcho, error_type: str, exception: Exception) -> None:
    """Report an error as ``✗ <kind>: <message>``.

    Args:
        echo: CliEcho instance
        error_type: Kind of error, e.g. "Configuration error"
        exception: The exception to report
    """
    echo.error(click.style(f"✗ {error_type}: {exception}", fg="red", bold=True))


def exit_on_error(echo: CliEcho, exception: Exception) -> NoReturn:
    """Report ``exception`` by kind and exit with status 1."""
    match exception:
        case ValidationError():
            report_error(echo, "Configuration error", exception)
        case SdfLabError():
            report_error(echo, type(exception).__name__, exception)
        case click.ClickException():
            report_error(echo, "Usage error", exception)
        case _:
            report_error(echo, "Unexpected error", exception)
    raise SystemExit(1)


def load_config(config_path: Optional[str], out: Optional[str] = None) -> ExperimentConfig:
    """Experiment config from a JSON file (or defaults), with ``--out`` applied.

    Raises:
        ValidationError: If the file content is not a valid configuration
        click.ClickException: If the file cannot be read
    """
    if config_path is None:
        config = ExperimentConfig()
    else:
        path = Path(config_path)
        if not path.is_file():
            raise click.ClickException(f"Config file not found: {config_path}")
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise click.ClickException(f"Error reading config: {e}")
        config = ExperimentConfig.model_validate_json(text)
    if out is not None:
        config = config.model_copy(update={"output_dir": Path(out)})
    return config


def resolve_seed(config: ExperimentConfig, seed: Optional[int]) -> int:
    """``--seed`` if given, otherwise the first configured seed."""
    return config.seeds[0] if seed is None else seed


def experiment_options(command: Callable) -> Callable:
    """Add the shared ``--config``, ``--seed`` and ``--out`` options."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False),
            default=None,
            help="Experiment config JSON (default: built-in desk-scale settings)",
        ),
        click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed override"),
        click.option(
            "--out", type=click.Path(file_okay=False), default=None, help="Output directory override"
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


arm_option = click.option(
    "--arm",
    type=click.Choice([h.value for h in Head]),
    required=True,
    help="Network arm: pwc (labelmap) or pwr (signed distance)",
)
