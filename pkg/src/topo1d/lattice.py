"""Finite-window operators on a 1-D lattice with an internal fiber.

Everything in this package acts on ``l2({min_site, ..., max_site-1}) (x) C^N``
stored as one dense complex matrix in site-major order: the row/column index
is ``(x - min_site) * N + a`` for site ``x`` and fiber component ``a``.

A cyclic window keeps translations exactly unitary and is the default for
bulk computations; an open window models a truncated (edge) geometry.  On a
cyclic window the half-line projection has *two* boundaries: the cut between
``cut_site - 1`` and ``cut_site``, and the wrap seam between ``max_site - 1``
and ``min_site``.  Index computations isolate the cut; the seam carries the
mirror contribution.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    CutOutsideWindow,
    NonUnitModulus,
    ShapeMismatch,
    WindowTooSmall,
)

__all__ = [
    "Window", "LatticeOperator", "standard_window", "identity", "zero",
    "make_shift", "half_line_projection", "diagonal_part",
    "position_modulation", "locality_residual", "operator_algebra",
    "LocalityReport", "hopping_profile",
]


@dataclass(frozen=True)
class Window:
    """A finite run of lattice sites ``{min_site, ..., max_site - 1}``."""

    min_site: int
    max_site: int
    boundary: str = "cyclic"

    def __post_init__(self):
        if self.boundary not in ("cyclic", "open"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.max_site - self.min_site < 2:
            raise WindowTooSmall(
                f"window [{self.min_site}, {self.max_site}) has fewer than 2 sites")

    @property
    def n_sites(self):
        return self.max_site - self.min_site

    @property
    def sites(self):
        return np.arange(self.min_site, self.max_site)

    def site_index(self, x):
        """Position of site ``x`` inside the window (0-based)."""
        if not (self.min_site <= x < self.max_site):
            raise CutOutsideWindow(f"site {x} outside [{self.min_site}, {self.max_site})")
        return x - self.min_site

    def distance(self, i, j):
        """Distance between window positions ``i, j`` (cyclic if applicable)."""
        d = abs(int(i) - int(j))
        if self.boundary == "cyclic":
            return min(d, self.n_sites - d)
        return d

    def distance_matrix(self):
        idx = np.arange(self.n_sites)
        d = np.abs(idx[:, None] - idx[None, :])
        if self.boundary == "cyclic":
            d = np.minimum(d, self.n_sites - d)
        return d


def _as_matrix(entries, dim):
    m = np.asarray(entries, dtype=complex)
    if m.shape != (dim, dim):
        raise ShapeMismatch(f"expected {(dim, dim)} matrix, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeMismatch("operator entries must be finite")
    return m


@dataclass(frozen=True)
class LatticeOperator:
    """Dense operator on a window with an ``N``-dimensional fiber.

    Instances are immutable value objects; all algebra returns new operators.
    """

    window: Window
    fiber_dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.fiber_dim < 1:
            raise ShapeMismatch("fiber_dim must be >= 1")
        m = _as_matrix(self.matrix, self.dim)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    # -- shape helpers ---------------------------------------------------

    @property
    def dim(self):
        return self.window.n_sites * self.fiber_dim

    def same_space(self, other):
        return self.window == other.window and self.fiber_dim == other.fiber_dim

    def _require_same_space(self, other):
        if not isinstance(other, LatticeOperator) or not self.same_space(other):
            raise ShapeMismatch("operators live on different windows/fibers")

    def like(self, matrix):
        """New operator on the same space with the given matrix."""
        return LatticeOperator(self.window, self.fiber_dim, matrix)

    def block(self, x, y):
        """The ``N x N`` block coupling site ``y`` to site ``x``."""
        N = self.fiber_dim
        i = self.window.site_index(x) * N
        j = self.window.site_index(y) * N
        return self.matrix[i:i + N, j:j + N]

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        self._require_same_space(other)
        return self.like(self.matrix + other.matrix)

    def __sub__(self, other):
        self._require_same_space(other)
        return self.like(self.matrix - other.matrix)

    def __mul__(self, scalar):
        return self.like(self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return self.like(-self.matrix)

    def __matmul__(self, other):
        self._require_same_space(other)
        return self.like(self.matrix @ other.matrix)

    @property
    def H(self):
        """Adjoint."""
        return self.like(self.matrix.conj().T)

    def norm(self):
        """Spectral (largest-singular-value) norm."""
        return float(np.linalg.norm(self.matrix, 2))

    def dist(self, other):
        self._require_same_space(other)
        return float(np.linalg.norm(self.matrix - other.matrix, 2))

    def unitarity_defect(self):
        return float(np.linalg.norm(
            self.matrix.conj().T @ self.matrix - np.eye(self.dim), 2))

    def selfadjointness_defect(self):
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T, 2))

    def is_unitary(self, tol=1e-8):
        return self.unitarity_defect() <= tol

    def is_selfadjoint(self, tol=1e-8):
        return self.selfadjointness_defect() <= tol

    def direct_sum_fiber(self, other):
        """Fiber-wise direct sum: same window, fiber ``N1 + N2``.

        Site blocks are stacked block-diagonally, so the result acts as
        ``self`` on the first ``N1`` fiber components and as ``other`` on the
        rest.
        """
        if self.window != other.window:
            raise ShapeMismatch("direct_sum needs identical windows")
        S = self.window.n_sites
        N1, N2 = self.fiber_dim, other.fiber_dim
        N = N1 + N2
        out = np.zeros((S * N, S * N), dtype=complex)
        for i in range(S):
            for j in range(S):
                out[i * N:i * N + N1, j * N:j * N + N1] = \
                    self.matrix[i * N1:(i + 1) * N1, j * N1:(j + 1) * N1]
                out[i * N + N1:(i + 1) * N, j * N + N1:(j + 1) * N] = \
                    other.matrix[i * N2:(i + 1) * N2, j * N2:(j + 1) * N2]
        return LatticeOperator(self.window, N, out)


def standard_window(n_sites, boundary="cyclic"):
    """Window centered so the default cut at site 1 splits it evenly.

    Sites run from ``1 - n_sites//2`` upward; on a cyclic window the wrap
    seam then sits (anti)podally to the cut.
    """
    lo = 1 - n_sites // 2
    return Window(lo, lo + n_sites, boundary)


def identity(window, fiber_dim):
    return LatticeOperator(window, fiber_dim,
                           np.eye(window.n_sites * fiber_dim, dtype=complex))


def zero(window, fiber_dim):
    return LatticeOperator(window, fiber_dim,
                           np.zeros((window.n_sites * fiber_dim,) * 2, dtype=complex))


def make_shift(window, fiber_dim, power=1):
    """Site translation by ``power``, identity on the fiber.

    Cyclic windows wrap around (the result is an exact permutation unitary);
    open windows truncate, so the shift is a non-unitary partial isometry.
    """
    S = window.n_sites
    if abs(power) >= S:
        raise WindowTooSmall(f"|power|={abs(power)} must be < {S} sites")
    perm = np.zeros((S, S), dtype=complex)
    for i in range(S):
        j = i + power
        if window.boundary == "cyclic":
            perm[j % S, i] = 1.0
        elif 0 <= j < S:
            perm[j, i] = 1.0
    return LatticeOperator(window, fiber_dim,
                           np.kron(perm, np.eye(fiber_dim, dtype=complex)))


def half_line_projection(window, fiber_dim, cut_site=1):
    """Diagonal projection onto sites ``x >= cut_site``."""
    if not (window.min_site < cut_site < window.max_site):
        raise CutOutsideWindow(
            f"cut {cut_site} must lie strictly inside [{window.min_site}, {window.max_site})")
    diag = (window.sites >= cut_site).astype(complex)
    return LatticeOperator(window, fiber_dim,
                           np.diag(np.repeat(diag, fiber_dim)))


def diagonal_part(op):
    """Zero every site-off-diagonal ``N x N`` block, keeping fiber blocks whole."""
    S, N = op.window.n_sites, op.fiber_dim
    out = np.zeros_like(op.matrix)
    for i in range(S):
        out[i * N:(i + 1) * N, i * N:(i + 1) * N] = \
            op.matrix[i * N:(i + 1) * N, i * N:(i + 1) * N]
    return op.like(out)


def position_modulation(window, fiber_dim, lam):
    """Diagonal unitary acting as ``lam**x`` on site ``x``, identity on the fiber.

    Only consistent with cyclic shifts when ``lam**n_sites == 1``; quadrature
    callers must therefore pick window-compatible roots of unity.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise NonUnitModulus(f"|lambda| = {abs(lam)} != 1")
    diag = np.array([lam ** int(x) for x in window.sites])
    return LatticeOperator(window, fiber_dim,
                           np.diag(np.repeat(diag, fiber_dim)))


class LocalityReport(NamedTuple):
    commutator_norm: float
    decay_profile: np.ndarray


def hopping_profile(op):
    """``d -> max_{dist(x,y)=d} ||block(x,y)||`` using the window's metric."""
    S, N = op.window.n_sites, op.fiber_dim
    dmat = op.window.distance_matrix()
    # max block norm per distance bucket
    prof = np.zeros(int(dmat.max()) + 1)
    m = op.matrix
    for i in range(S):
        for j in range(S):
            b = m[i * N:(i + 1) * N, j * N:(j + 1) * N]
            nb = np.linalg.norm(b, 2) if N > 1 else abs(b[0, 0])
            d = dmat[i, j]
            if nb > prof[d]:
                prof[d] = nb
    return prof


def locality_residual(op, lam_proj):
    """Commutator norm with the half-line projection plus the hopping profile."""
    op._require_same_space(lam_proj)
    comm = lam_proj.matrix @ op.matrix - op.matrix @ lam_proj.matrix
    return LocalityReport(float(np.linalg.norm(comm, 2)), hopping_profile(op))


def operator_algebra(a, b=None, op="multiply", scalar=None):
    """Uniform entry point for the basic operator algebra.

    ``op`` is one of ``add, multiply, adjoint, scale, norm, direct_sum``.
    The same functionality is available through operators (``+``, ``@``,
    ``.H``, ``*``, ``.norm()``, ``.direct_sum_fiber``).
    """
    if op == "add":
        return a + b
    if op == "multiply":
        return a @ b
    if op == "adjoint":
        return a.H
    if op == "scale":
        return a * scalar
    if op == "norm":
        return a.norm()
    if op == "direct_sum":
        return a.direct_sum_fiber(b)
    raise ValueError(f"unknown op {op!r}")
