"""Test utilities for sdflab."""
