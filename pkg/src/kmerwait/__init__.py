"""Waiting times and putative-hit statistics for k-mers under single-step
substitution evolution."""

__version__ = "0.1.0"
