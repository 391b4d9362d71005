"""Tests for the surface command."""

from sdflab.cli.lab_cli import cli
from sdflab.core.grid import BinaryVolume
from sdflab.core.sdt import signed_distance
from sdflab.shell.vvol import write_volume


def test_surface_of_mask(runner, tmp_path, cube_16):
    """Test exporting the surface of a binary mask."""
    source = tmp_path / "cube.vvol"
    write_volume(source, cube_16)
    output = tmp_path / "meshes" / "cube.obj"

    result = runner.invoke(cli, ["surface", str(source), "-o", str(output)])

    assert result.exit_code == 0
    assert "✓ Wrote" in result.output
    assert output.read_text().startswith("v ")


def test_surface_of_distance_field(runner, tmp_path, cube_16):
    """Test the zero-level rule for pwr fields."""
    source = tmp_path / "cube.sdf.vvol"
    write_volume(source, signed_distance(cube_16))

    result = runner.invoke(
        cli, ["surface", str(source), "-o", str(tmp_path / "cube.obj"), "--arm", "pwr"]
    )

    assert result.exit_code == 0
    assert "triangles" in result.output


def test_surface_of_scalar_needs_arm(runner, tmp_path, cube_16):
    """Test that scalar volumes require --arm."""
    source = tmp_path / "cube.sdf.vvol"
    write_volume(source, signed_distance(cube_16))

    result = runner.invoke(cli, ["surface", str(source), "-o", str(tmp_path / "cube.obj")])

    assert result.exit_code == 1
    assert "--arm" in result.output


def test_surface_empty(runner, tmp_path, cube_16):
    """Test the warning for an empty surface."""
    source = tmp_path / "empty.vvol"
    write_volume(source, BinaryVolume.zeros(cube_16.meta))

    result = runner.invoke(cli, ["surface", str(source), "-o", str(tmp_path / "empty.obj")])

    assert result.exit_code == 0
    assert "! Surface is empty" in result.output


def test_surface_bad_file(runner, tmp_path):
    """Test decoding errors of the input volume."""
    source = tmp_path / "broken.vvol"
    source.write_bytes(b"not a volume")

    result = runner.invoke(cli, ["surface", str(source), "-o", str(tmp_path / "x.obj")])

    assert result.exit_code == 1
    assert "✗ BadMagicError" in result.output
