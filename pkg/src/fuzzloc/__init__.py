"""Fuzzy-logic workbench for subscriber-data management and location management."""

__version__ = "0.1.0"
