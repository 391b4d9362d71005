"""Surface command: OBJ mesh of a mask, probability or distance volume."""

from pathlib import Path
from typing import Optional

import click

from sdflab.cli.utils import CliEcho, exit_on_error, validate_output_path
from sdflab.core.net import Head
from sdflab.shell.pipeline import run_surface


@click.command()
@click.argument("volume", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=str, required=True, help="Output OBJ path")
@click.option(
    "--arm",
    type=click.Choice([h.value for h in Head]),
    default=None,
    help="Surface rule for scalar volumes: pwc (0.5 level) or pwr (zero level)",
)
@click.pass_context
def surface(ctx: click.Context, volume: str, output: str, arm: Optional[str]) -> None:
    """Extract the surface of VOLUME with marching cubes and write it as OBJ.

    VOLUME: Path to a .vvol file (mask, probability or signed distance)
    """
    echo = CliEcho(ctx)
    try:
        validate_output_path(output)
        output_path = Path(output)
        mesh = run_surface(volume, output_path, Head(arm) if arm else None)
    except Exception as e:
        exit_on_error(echo, e)

    if mesh.is_empty:
        echo.echo(click.style(f"! Surface is empty; wrote empty {output_path}", fg="yellow"))
        return
    echo.success(
        f"Wrote {len(mesh.vertices)} vertices and {mesh.triangle_count} triangles to {output_path}"
    )
