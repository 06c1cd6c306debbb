"""Topological invariants and constructive homotopies for 1-D lattice models.

The package computes the strong invariants of gapped one-dimensional
tight-binding Hamiltonians in all ten Altland-Zirnbauer symmetry classes on
finite lattice windows, and explicitly constructs and verifies the homotopy
paths that realize the classification.
"""

from . import errors
from .lattice import (
    LatticeOperator,
    Window,
    diagonal_part,
    half_line_projection,
    identity,
    locality_residual,
    make_shift,
    operator_algebra,
    position_modulation,
    standard_window,
    zero,
)

__version__ = "0.1.0"
