"""Executable workbench for presheaf models of higher-order quantum computation."""

__version__ = "0.1.0"
