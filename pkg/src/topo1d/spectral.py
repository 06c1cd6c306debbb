"""Spectral primitives: flattening, polar parts, gaps, spectral cuts.

All kernels and gaps in this module use the uniform threshold
``1e-8 * ||A||`` unless stated otherwise; eigendecomposition (not contour
integration) computes ``sgn``, which is exact at finite dimension.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import EigenvalueAtCut, GapClosed, NotSAU, NotSelfAdjoint
from .lattice import LatticeOperator

__all__ = [
    "SpectralData", "spectral_data", "flatten", "polar", "polar_matrix",
    "spectral_gap", "spectral_cut_projection", "flat_retraction",
    "lambda_nontriviality_check", "NontrivialityReport",
]

KERNEL_RTOL = 1e-8


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    gap_at_zero: float


def spectral_data(h, tol=None):
    """Hermitian eigendecomposition with the zero-gap attached."""
    norm = max(h.norm(), 1.0)
    if tol is None:
        tol = 1e-8 * norm
    if h.selfadjointness_defect() > tol:
        raise NotSelfAdjoint(f"||H - H*|| = {h.selfadjointness_defect():.2e}")
    vals, vecs = np.linalg.eigh(h.matrix)
    gap = float(np.min(np.abs(vals))) if len(vals) else np.inf
    return SpectralData(vals, vecs, gap)


def spectral_gap(h):
    """``min |eigenvalue|`` of a self-adjoint operator."""
    return spectral_data(h).gap_at_zero


def flatten(h, gap_tol=1e-8):
    """``sgn(H)``: the flat (self-adjoint unitary) form of a gapped ``H``.

    Being an odd function of ``H``, the output commutes with every symmetry
    ``H`` commutes with and anticommutes with every symmetry ``H``
    anticommutes with.
    """
    sd = spectral_data(h)
    if sd.gap_at_zero <= gap_tol:
        raise GapClosed(f"eigenvalue at {sd.gap_at_zero:.2e} within {gap_tol:.2e} of 0")
    signs = np.where(sd.eigenvalues > 0, 1.0, -1.0)
    flat = (sd.eigenvectors * signs) @ sd.eigenvectors.conj().T
    flat = 0.5 * (flat + flat.conj().T)
    return h.like(flat)


def polar_matrix(a, tol=None):
    """Polar part of a plain matrix with ``ker pol(A) = ker A``."""
    a = np.asarray(a, dtype=complex)
    if not a.size:
        return a.copy()
    u, s, vh = np.linalg.svd(a)
    if tol is None:
        tol = KERNEL_RTOL * max(s[0] if len(s) else 1.0, 1.0)
    r = int(np.sum(s > tol))
    return u[:, :r] @ vh[:r, :]


def polar(a, tol=None):
    """Partial-isometry factor of the polar decomposition ``A = pol(A) |A|``."""
    return a.like(polar_matrix(a.matrix, tol))


def spectral_cut_projection(p_ess, lam0=0.5, delta=1e-6):
    """Exact projection ``chi_(lam0, inf)`` of an essential projection.

    Commutes with any anti-unitary the input commutes with because the cut
    function can be taken real.
    """
    sd = spectral_data(p_ess)
    if np.any(np.abs(sd.eigenvalues - lam0) < delta):
        raise EigenvalueAtCut(f"eigenvalue within {delta:.1e} of cut {lam0}")
    keep = sd.eigenvalues > lam0
    v = sd.eigenvectors[:, keep]
    q = v @ v.conj().T
    q = 0.5 * (q + q.conj().T)
    return p_ess.like(q)


def flat_retraction(h, t):
    """``(1-t) H + t sgn(H)``; the Fermi projection is constant in ``t``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    return (1.0 - t) * h + t * flatten(h)


class NontrivialityReport(NamedTuple):
    left_plus: int
    left_minus: int
    right_plus: int
    right_minus: int
    floor: int
    nontrivial: bool


def _sau_defect(u):
    return max(u.selfadjointness_defect(),
               float(np.linalg.norm(u.matrix @ u.matrix - np.eye(u.dim), 2)))


def lambda_nontriviality_check(u_sau, lam, tol=1e-8, eig_window=0.5, floor=None):
    """Count near-(+1)/near-(-1) eigenvalues of both half compressions.

    A flat Hamiltonian is treated as bulk-like when every one of the four
    counts reaches the floor (default ``n_sites / 8``, a scale-proportional
    stand-in for "extensively many on each half").
    """
    if _sau_defect(u_sau) > tol:
        raise NotSAU(f"SAU defect {_sau_defect(u_sau):.2e} > {tol:.2e}")
    if floor is None:
        floor = max(1, u_sau.window.n_sites // 8)
    diag = np.real(np.diag(lam.matrix)) > 0.5
    idx_r = np.where(diag)[0]
    idx_l = np.where(~diag)[0]
    counts = []
    for idx in (idx_l, idx_r):
        block = u_sau.matrix[np.ix_(idx, idx)]
        vals = np.linalg.eigvalsh(block)
        counts.append(int(np.sum(vals >= 1.0 - eig_window)))
        counts.append(int(np.sum(vals <= -1.0 + eig_window)))
    lp, lm, rp, rm = counts
    ok = all(c >= floor for c in counts)
    return NontrivialityReport(lp, lm, rp, rm, floor, ok)
