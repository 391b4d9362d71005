"""Command line interface for sdflab."""
