"""Tests for the generate and sdf commands."""

from sdflab.cli.lab_cli import cli


def test_generate_writes_manifest(runner, tmp_path, tiny_config_file):
    """Test generating the tiny dataset."""
    result = runner.invoke(cli, ["generate", "--config", str(tiny_config_file)])

    assert result.exit_code == 0
    assert "✓ Generated 4 train and 4 test cases" in result.output
    assert (tmp_path / "runs" / "seed-0" / "dataset" / "manifest.json").exists()


def test_generate_respects_seed_and_out(runner, tmp_path, tiny_config_file):
    """Test that --seed and --out override the config."""
    out = tmp_path / "elsewhere"
    result = runner.invoke(
        cli, ["generate", "--config", str(tiny_config_file), "--seed", "7", "--out", str(out)]
    )

    assert result.exit_code == 0
    assert (out / "seed-7" / "dataset" / "manifest.json").exists()


def test_generate_verbose(runner, tiny_config_file):
    """Test verbose progress output."""
    result = runner.invoke(cli, ["-v", "generate", "--config", str(tiny_config_file)])

    assert result.exit_code == 0
    assert "Generating (16, 16, 16) cases with seed 0" in result.output


def test_sdf_writes_every_case(runner, tmp_path, tiny_config_file):
    """Test signed distances after generation."""
    runner.invoke(cli, ["generate", "--config", str(tiny_config_file)])

    result = runner.invoke(cli, ["sdf", "--config", str(tiny_config_file), "--clamp-tau", "3"])

    assert result.exit_code == 0
    assert "✓ Wrote 8 signed distance files" in result.output
    assert len(list((tmp_path / "runs" / "seed-0" / "sdf").glob("*.vvol"))) == 8


def test_sdf_without_dataset(runner, tiny_config_file):
    """Test the error when no dataset was generated."""
    result = runner.invoke(cli, ["sdf", "--config", str(tiny_config_file)])

    assert result.exit_code == 1
    assert "✗ VolumeIOError" in result.output


def test_sdf_rejects_non_positive_tau(runner, tiny_config_file):
    """Test option validation of --clamp-tau."""
    result = runner.invoke(cli, ["sdf", "--config", str(tiny_config_file), "--clamp-tau", "0"])

    assert result.exit_code == 2
