"""Tests for shell layer modules."""
