"""Exact computations on Levi-flat varieties: complexification, Segre varieties and foliations."""

__version__ = "0.1.0"
