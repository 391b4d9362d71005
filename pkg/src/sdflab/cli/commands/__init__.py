"""Subcommands of the sdflab CLI, one per pipeline stage."""
