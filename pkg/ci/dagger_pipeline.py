#!/usr/bin/env python3
"""Dagger CI pipeline for sdflab.

Usage: ``python ci/dagger_pipeline.py [3.13,3.14] [--slow]``
"""

import sys
from typing import Optional

import anyio
import dagger
from dagger import Config, Container, Directory

SOURCE_EXCLUDES = [
    ".venv/",
    "dist/",
    "build/",
    "runs/",
    "*.egg-info/",
    "__pycache__/",
    ".pytest_cache/",
    ".ruff_cache/",
    ".git/",
    "*.pyc",
    ".coverage",
    "coverage.xml",
]


def python_base(
    client: dagger.Client, source_dir: Directory, python_version: str, *, dev: bool = True
) -> Container:
    """Slim Python image with the project synced by uv."""
    sync = ["uv", "sync", "--dev"] if dev else ["uv", "sync"]
    return (
        client.container()
        .from_(f"python:{python_version}-slim")
        .with_mounted_directory("/src", source_dir)
        .with_workdir("/src")
        .with_exec(["pip", "install", "--upgrade", "pip"])
        .with_exec(["pip", "install", "uv", "build"])
        .with_exec(sync)
    )


async def test_pipeline(
    client: dagger.Client,
    source_dir: Directory,
    python_version: str = "3.13",
    run_slow: bool = False,
) -> Container:
    """Run doctests and the test suite with coverage."""
    command = [
        "uv",
        "run",
        "pytest",
        "src/",
        "tests/",
        "--doctest-modules",
        "--cov=sdflab",
        "--cov-report=term-missing",
        "--cov-report=xml",
        "--cov-fail-under=85",
        "-v",
    ]
    if run_slow:
        command.append("--run-slow")
    return python_base(client, source_dir, python_version).with_exec(command)


async def lint_pipeline(
    client: dagger.Client,
    source_dir: Directory,
    python_version: str = "3.13",
) -> Container:
    """Run formatting, linting and type checking."""
    return (
        python_base(client, source_dir, python_version)
        .with_exec(["uv", "run", "ruff", "format", "--check", "src/", "tests/"])
        .with_exec(["uv", "run", "ruff", "check", "src/", "tests/"])
        .with_exec(["uv", "run", "pyright", "src/sdflab"])
    )


async def build_pipeline(
    client: dagger.Client,
    source_dir: Directory,
    python_version: str = "3.13",
) -> Container:
    """Build the sdist and wheel."""
    return python_base(client, source_dir, python_version, dev=False).with_exec(
        ["python", "-m", "build"]
    )


async def main(python_versions: Optional[list[str]] = None, run_slow: bool = False) -> None:
    """Main CI pipeline orchestrator."""
    if python_versions is None:
        python_versions = ["3.13"]

    config = Config(log_output=sys.stdout)

    async with dagger.Connection(config) as client:
        source = client.host().directory(".", exclude=SOURCE_EXCLUDES)
        has_failures = False

        for py_version in python_versions:
            print(f"\n🐍 Running CI for Python {py_version}")

            print("  📋 Running tests...")
            tests = await test_pipeline(client, source, py_version, run_slow)
            try:
                await tests.stdout()
                await tests.file("/src/coverage.xml").export("./coverage.xml")
            except Exception as e:
                print(f"❌ Tests failed for Python {py_version}: {e}")
                has_failures = True

            # lint once, on the first version
            if py_version == python_versions[0]:
                print("  🔍 Running linting...")
                lint = await lint_pipeline(client, source, py_version)
                try:
                    await lint.stdout()
                except Exception as e:
                    print(f"❌ Linting failed: {e}")
                    has_failures = True

            print("  📦 Building package...")
            build = await build_pipeline(client, source, py_version)
            try:
                await build.stdout()
                await build.directory("/src/dist").export(f"./dist-py{py_version}")
            except Exception as e:
                print(f"❌ Build failed for Python {py_version}: {e}")
                has_failures = True

        if has_failures:
            print("\n❌ CI pipeline failed!")
            sys.exit(1)
        print("\n✅ All CI checks passed!")


if __name__ == "__main__":
    args = [a for a in sys.argv[1:] if a != "--slow"]
    versions = args[0].split(",") if args else None
    anyio.run(main, versions, "--slow" in sys.argv[1:])
