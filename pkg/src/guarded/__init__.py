"""Guarded fixpoint and trace operators over exactly computable models."""

__version__ = "0.1.0"
