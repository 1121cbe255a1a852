"""Codes on the quadratic forms of a binary symplectic space, with exact checks of their symmetry and distances."""

__version__ = "0.1.0"
