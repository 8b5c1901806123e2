"""Shared configuration, logging and JSON helpers."""

__version__ = "0.1.0"
