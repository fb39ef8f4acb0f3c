"""Infer configuration constraints from log messages in C/C++ sources."""

__version__ = "0.1.0"
