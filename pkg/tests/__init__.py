"""Test suite for the Python CLI monorepo."""

__version__ = "0.1.0"