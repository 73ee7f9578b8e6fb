"""Recursive Dirichlet forms on the Sierpinski gasket and its twisted variant."""

__version__ = "0.1.0"
