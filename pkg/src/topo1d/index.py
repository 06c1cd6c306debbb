"""Topological invariants on finite windows.

The half-line compression of an operator ``A`` is ``LAM A = Lam A Lam + 1 -
Lam``; its kernel/cokernel live inside ``im Lam`` and are computed from the
SVD of the compressed block.  Two finite-size conventions, recorded in every
result, make the infinite-volume index well defined on a window:

* **Trace restriction.** On a cyclic window the full trace of
  ``Lam - U* Lam U`` vanishes identically (the wrap seam cancels the cut), so
  the trace is restricted to sites within ``n_sites/4`` of the cut.

* **Edge filter.** The compression is a square matrix, so raw kernel and
  cokernel counts always agree; near-kernel vectors are therefore weighted
  by their mass on the half of ``im Lam`` adjacent to the cut and the
  weighted counts are rounded.  This discards the spurious modes that the
  far truncation edge (or the seam) contributes, and splits hybridized
  cut/seam pairs correctly.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    NonIntegerTrace,
    NonIntegerWinding,
    NotEssentiallyGapped,
    NotUnitary,
    NotUnitaryOrSAU,
    PerturbationTooLarge,
    ShapeMismatch,
    SingularSymbol,
    SymmetryViolated,
)
from .lattice import LatticeOperator
from .symmetry import check_relation, chiral_blocks

__all__ = [
    "IndexResult", "ArcData", "arc_data", "compression", "index_trace",
    "index_kernel", "index_z2", "winding_symbol", "schur_parity_probe",
    "SchurProbe", "edge_index",
]


@dataclass(frozen=True)
class IndexResult:
    value: int
    route: str                      # "trace" | "kernel" | "winding"
    raw_trace: Optional[float] = None
    ker_dim: Optional[int] = None
    coker_dim: Optional[int] = None
    tolerance_used: Optional[float] = None
    conventions: dict = field(default_factory=dict)

    def __int__(self):
        return int(self.value)


class ArcData(NamedTuple):
    cut_site: int
    slots: np.ndarray        # indices of im(Lam) inside the full space
    near_mask: np.ndarray    # slots on the half of im(Lam) adjacent to the cut
    n_arc_sites: int


def arc_data(lam):
    """Geometry of ``im Lam``: its slots and the near-cut half."""
    w = lam.window
    nfib = lam.fiber_dim
    diag = np.real(np.diag(lam.matrix)) > 0.5
    slots = np.where(diag)[0]
    if not len(slots) or len(slots) == lam.dim:
        raise ShapeMismatch("projection is trivial; no cut to localize at")
    sites = slots // nfib + w.min_site
    cut = int(sites.min())
    arc_pos = sites - cut
    n_arc = int(arc_pos.max()) + 1
    near = arc_pos < n_arc / 2.0
    return ArcData(cut, slots, near, n_arc)


def compression(a, lam):
    """Matrix of ``Lam A Lam`` restricted to ``im Lam``, plus arc geometry."""
    a._require_same_space(lam)
    arc = arc_data(lam)
    t = a.matrix[np.ix_(arc.slots, arc.slots)]
    return t, arc


def _near_mass(vectors, near_mask):
    """Total mass of the given unit column vectors on the near-cut half."""
    if vectors.shape[1] == 0:
        return 0.0
    return float(np.sum(np.abs(vectors[near_mask, :]) ** 2))


def index_trace(u, lam, radius=None, unitary_tol=1e-8, integer_tol=0.1):
    """``round(Tr(Lam - U* Lam U))`` over sites near the cut."""
    u._require_same_space(lam)
    defect = u.unitarity_defect()
    if defect > unitary_tol:
        raise NotUnitary(f"unitarity defect {defect:.2e} > {unitary_tol:.2e}")
    w = u.window
    if radius is None:
        radius = w.n_sites // 4
    arc = arc_data(lam)
    cut_pos = w.site_index(arc.cut_site)
    m = lam.matrix - u.matrix.conj().T @ lam.matrix @ u.matrix
    diag = np.real(np.diag(m))
    raw = 0.0
    nfib = u.fiber_dim
    for i, x in enumerate(w.sites):
        d = min(w.distance(i, cut_pos), w.distance(i, cut_pos - 1))
        if d <= radius:
            raw += diag[i * nfib:(i + 1) * nfib].sum()
    value = int(np.rint(raw))
    if abs(raw - value) >= integer_tol:
        raise NonIntegerTrace(
            f"trace {raw:.6f} is {abs(raw - value):.3f} from an integer; "
            "window too small or operator not local")
    return IndexResult(value, "trace", raw_trace=float(raw),
                       tolerance_used=unitary_tol,
                       conventions={"trace_radius": radius,
                                    "cut_site": arc.cut_site})


def index_kernel(a, lam, tol=1e-6, edge_filter=True):
    """Kernel-counting route: edge-filtered ``dim ker - dim coker``.

    Near-kernel singular vectors are weighted by their near-cut mass and the
    weighted counts rounded, so hybridized cut/seam pairs contribute one.
    """
    t, arc = compression(a, lam)
    u, s, vh = np.linalg.svd(t)
    small = s < tol
    ker_vecs = vh[small, :].conj().T
    cok_vecs = u[:, small]
    total = int(np.sum(small))
    if edge_filter:
        ker_dim = int(np.rint(_near_mass(ker_vecs, arc.near_mask)))
        coker_dim = int(np.rint(_near_mass(cok_vecs, arc.near_mask)))
    else:
        ker_dim = coker_dim = total
    return IndexResult(ker_dim - coker_dim, "kernel",
                       ker_dim=ker_dim, coker_dim=coker_dim,
                       tolerance_used=tol,
                       conventions={"edge_filter": edge_filter,
                                    "total_small_singulars": total,
                                    "cut_site": arc.cut_site})


def index_z2(a, lam, f=None, relation=None, tol=0.2, sym_tol=1e-8):
    """Z2 index: edge-filtered kernel dimension of the compression mod 2.

    ``relation`` should be ``star_quaternionic`` (unitary input, class DIII)
    or ``i_real`` (self-adjoint-unitary input, class D).  The unfiltered
    kernel count over both arc ends is reported as a parity diagnostic: it
    is even exactly when cut and seam carry the same parity.
    """
    if relation == "star_quaternionic" or relation is None:
        if a.unitarity_defect() > sym_tol * 10 + 1e-8:
            raise NotUnitaryOrSAU(
                f"unitarity defect {a.unitarity_defect():.2e}")
    elif relation == "i_real":
        defect = max(a.selfadjointness_defect(),
                     float(np.linalg.norm(a.matrix @ a.matrix - np.eye(a.dim), 2)))
        if defect > sym_tol * 10 + 1e-8:
            raise NotUnitaryOrSAU(f"SAU defect {defect:.2e}")
    else:
        raise ValueError(f"index_z2 undefined for relation {relation!r}")
    if f is not None and relation is not None:
        r = check_relation(a, f, relation)
        if r > sym_tol:
            raise SymmetryViolated(f"{relation} residual {r:.2e} > {sym_tol:.2e}")

    t, arc = compression(a, lam)
    u, s, vh = np.linalg.svd(t)
    small = s < tol
    ker_vecs = vh[small, :].conj().T
    near = int(np.rint(_near_mass(ker_vecs, arc.near_mask)))
    total = int(np.sum(small))
    return IndexResult(near % 2, "kernel",
                       ker_dim=near, coker_dim=None, tolerance_used=tol,
                       conventions={"total_kernel_dim": total,
                                    "both_ends_even": total % 2 == 0,
                                    "cut_site": arc.cut_site})


def winding_symbol(hoppings, resolution=1024, singular_tol=1e-9):
    """Winding of ``det S(k)`` for ``S(k) = sum_l S_l exp(i k l)``.

    The sign convention is fixed so that the lattice operator with these
    hoppings has ``ind = -winding``; the pure right shift has symbol
    ``exp(i k)``, winding ``+1`` and index ``-1``.
    """
    ls = sorted(hoppings)
    mats = [np.atleast_2d(np.asarray(hoppings[l], dtype=complex)) for l in ls]
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise ShapeMismatch("all hopping matrices must share one square shape")
    ks = 2.0 * np.pi * np.arange(resolution) / resolution
    dets = np.empty(resolution, dtype=complex)
    scale = max(np.linalg.norm(m, 2) for m in mats)
    for j, k in enumerate(ks):
        sk = sum(m * np.exp(1j * k * l) for m, l in zip(mats, ls))
        if np.linalg.svd(sk, compute_uv=False)[-1] < singular_tol * max(scale, 1.0):
            raise SingularSymbol(f"symbol singular at k = {k:.4f}")
        dets[j] = np.linalg.det(sk)
    phases = np.angle(dets)
    incr = np.diff(np.concatenate([phases, phases[:1]]))
    incr = (incr + np.pi) % (2.0 * np.pi) - np.pi
    total = float(np.sum(incr)) / (2.0 * np.pi)
    value = int(np.rint(total))
    if abs(total - value) > 0.01:
        raise NonIntegerWinding(f"winding {total:.4f} not close to an integer")
    return value


class SchurProbe(NamedTuple):
    rank_z: int
    parity_ok: bool
    ker_dim_t: int
    ker_dim_s_predicted: int


def schur_parity_probe(t_op, s_op, f=None, relation=None, tol=None):
    """Schur-complement probe of how a perturbation eats a symmetric kernel.

    Computes ``Z = S_CA - S_CB (S_DB)^{-1} S_DA`` on ``ker T -> coker T`` and
    reports its rank; for a symmetry-compatible pair the rank is even and
    ``dim ker S = dim ker T - rank Z``.
    """
    t_op._require_same_space(s_op)
    tm, sm = t_op.matrix, s_op.matrix
    u, s, vh = np.linalg.svd(tm)
    scale = max(s[0] if len(s) else 1.0, 1.0)
    if tol is None:
        tol = 1e-8 * scale
    r = int(np.sum(s > tol))
    ker = vh[r:, :].conj().T
    kperp = vh[:r, :].conj().T
    cok = u[:, r:]
    imt = u[:, :r]
    if ker.shape[1] == 0:
        return SchurProbe(0, True, 0, 0)
    smallest_nonzero = s[r - 1] if r else np.inf
    if np.linalg.norm(sm - tm, 2) >= smallest_nonzero:
        raise PerturbationTooLarge(
            "||S - T|| exceeds the inverse parametrix bound")
    s_ca = cok.conj().T @ sm @ ker
    s_cb = cok.conj().T @ sm @ kperp
    s_da = imt.conj().T @ sm @ ker
    s_db = imt.conj().T @ sm @ kperp
    sv_db = np.linalg.svd(s_db, compute_uv=False)
    if sv_db[-1] < tol:
        raise PerturbationTooLarge("S_DB block is numerically singular")
    z = s_ca - s_cb @ np.linalg.solve(s_db, s_da)
    zs = np.linalg.svd(z, compute_uv=False)
    rank_z = int(np.sum(zs > 1e-8 * max(np.linalg.norm(sm, 2), 1.0)))
    kt = ker.shape[1]
    return SchurProbe(rank_z, rank_z % 2 == 0, kt, kt - rank_z)


def _edge_masses(vectors, n_slots):
    """Mass of each column on the left half of an open window."""
    half = n_slots // 2
    return np.sum(np.abs(vectors[:half, :]) ** 2, axis=0)


def edge_index(h_edge, label, sym=None, zero_tol=0.1, kernel_tol=1e-4,
               mode_cap=None):
    """Index of a truncated (edge) system on an open window.

    Chiral classes: Fredholm index of the chiral block, counting only
    kernel/cokernel vectors localized at the physical (left) edge.  Classes
    D/DIII: parity of the number of left-edge zero modes of ``H`` itself.
    """
    if h_edge.window.boundary != "open":
        raise ShapeMismatch("edge systems live on open windows")
    if mode_cap is None:
        mode_cap = 4 * h_edge.fiber_dim

    if label in ("AIII", "BDI", "CII"):
        s_blk = chiral_blocks(h_edge, sym.pi)
        u, s, vh = np.linalg.svd(s_blk.matrix)
        small = s < kernel_tol
        if int(np.sum(small)) > mode_cap:
            raise NotEssentiallyGapped(
                f"{int(np.sum(small))} near-zero singular values")
        ker_vecs = vh[small, :].conj().T
        cok_vecs = u[:, small]
        kmass = _edge_masses(ker_vecs, s_blk.dim)
        cmass = _edge_masses(cok_vecs, s_blk.dim)
        ker_dim = int(np.rint(np.sum(kmass)))
        coker_dim = int(np.rint(np.sum(cmass)))
        return IndexResult(ker_dim - coker_dim, "kernel",
                           ker_dim=ker_dim, coker_dim=coker_dim,
                           tolerance_used=kernel_tol,
                           conventions={"edge": "left", "class": label})
    if label in ("D", "DIII"):
        vals, vecs = np.linalg.eigh(h_edge.matrix)
        small = np.abs(vals) < zero_tol
        if int(np.sum(small)) > mode_cap:
            raise NotEssentiallyGapped(
                f"{int(np.sum(small))} near-zero eigenvalues")
        modes = vecs[:, small]
        left = int(np.rint(np.sum(_edge_masses(modes, h_edge.dim))))
        return IndexResult(left % 2, "kernel", ker_dim=left,
                           tolerance_used=zero_tol,
                           conventions={"edge": "left", "class": label,
                                        "zero_modes_total": int(np.sum(small))})
    raise ValueError(f"edge index not defined for class {label!r}")
