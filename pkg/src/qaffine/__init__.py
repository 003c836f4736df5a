"""Exact workbench for loop and vertex presentations of simply-laced quantum affine algebras."""

__version__ = "0.1.0"
