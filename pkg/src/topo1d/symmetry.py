"""Anti-unitary structures, symmetry relations and tenfold-way detection.

Anti-unitaries are stored as a fiber unitary ``V`` composed with entrywise
complex conjugation and act site-diagonally on the whole window, so every
symmetry check reduces to a finite matrix identity.  For ``F = V o conj``:

* ``F^2 = (V conj(V)) = square_sign * 1``
* ``F A F^{-1} = V conj(A) V^+`` for any linear ``A``.

The five operator relations with respect to ``F`` read, as matrix identities
on the full window (``W = 1_S (x) V``):

=================   =====================
real/quaternionic   ``A W = W conj(A)``
star_*              ``A W = W A^T``
i_*                 ``A W = -W conj(A)``
=================   =====================
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    InconsistentSymmetryData,
    KernelCokernelMismatch,
    NotChiral,
    NotInvariant,
    NotSelfAdjoint,
    OddFiber,
    OddKernelStarH,
    OddQuaternionicDimension,
    ShapeMismatch,
)
from .lattice import LatticeOperator

__all__ = [
    "RELATIONS", "AZ_LABELS", "AZ_TABLE", "AntiUnitary", "SymmetryTriple",
    "check_relation", "relation_residual_matrix", "classify_az",
    "chiral_blocks", "chiral_embed", "chiral_frame", "chiral_block_symmetry",
    "kramers_basis", "KramersBasis", "extend_to_unitary",
    "extend_matrix_to_unitary", "sau_relation", "chiral_relation",
    "az_signs",
]

RELATIONS = ("complex", "real", "quaternionic", "star_real",
             "star_quaternionic", "i_real", "i_quaternionic")

AZ_LABELS = ("A", "AIII", "AI", "BDI", "D", "DIII", "AII", "CII", "C", "CI")

# (theta^2, xi^2, chiral present) -> label
AZ_TABLE = {
    (0, 0, 0): "A", (0, 0, 1): "AIII",
    (1, 0, 0): "AI", (-1, 0, 0): "AII",
    (0, 1, 0): "D", (0, -1, 0): "C",
    (1, 1, 1): "BDI", (-1, -1, 1): "CII",
    (-1, 1, 1): "DIII", (1, -1, 1): "CI",
}

_SIGNS = {v: k for k, v in AZ_TABLE.items()}

# class of the flattened Hamiltonian itself (non-chiral classes)
_SAU_RELATION = {"A": "complex", "AI": "real", "AII": "quaternionic",
                 "D": "i_real", "C": "i_quaternionic"}

# class of the chiral off-diagonal block (chiral classes)
_CHIRAL_RELATION = {"AIII": "complex", "BDI": "real", "CII": "quaternionic",
                    "CI": "star_real", "DIII": "star_quaternionic"}


def az_signs(label):
    """Return ``(theta^2, xi^2, chiral)`` for an AZ label, kwant-style."""
    if label not in _SIGNS:
        raise ValueError(f"unknown AZ class {label!r}")
    return _SIGNS[label]


def sau_relation(label):
    if label not in _SAU_RELATION:
        raise ValueError(f"{label} is a chiral class; no SAU relation")
    return _SAU_RELATION[label]


def chiral_relation(label):
    if label not in _CHIRAL_RELATION:
        raise ValueError(f"{label} is not a chiral class")
    return _CHIRAL_RELATION[label]


def _relation_sign_requirement(relation):
    if relation in ("real", "star_real", "i_real"):
        return +1
    if relation in ("quaternionic", "star_quaternionic", "i_quaternionic"):
        return -1
    return None


@dataclass(frozen=True)
class AntiUnitary:
    """Site-diagonal anti-unitary ``F = (1 (x) V) o conj`` with ``F^2 = s``."""

    unitary_part: np.ndarray
    square_sign: int = +1

    def __post_init__(self):
        v = np.asarray(self.unitary_part, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InconsistentSymmetryData("unitary_part must be square")
        n = v.shape[0]
        if np.linalg.norm(v @ v.conj().T - np.eye(n), 2) > 1e-10:
            raise InconsistentSymmetryData("unitary_part is not unitary")
        sq = v @ v.conj()
        if np.linalg.norm(sq - self.square_sign * np.eye(n), 2) > 1e-10:
            raise InconsistentSymmetryData(
                f"V conj(V) != {self.square_sign:+d} * identity")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "unitary_part", v)

    @property
    def fiber_dim(self):
        return self.unitary_part.shape[0]

    def conj_matrix(self, dim):
        """The unitary ``W = 1 (x) V`` on a space of total dimension ``dim``."""
        n = self.fiber_dim
        if dim % n:
            raise ShapeMismatch(f"dimension {dim} not a multiple of fiber {n}")
        return np.kron(np.eye(dim // n, dtype=complex), self.unitary_part)

    def apply(self, vec):
        """Apply the anti-unitary to a vector (any multiple of the fiber dim)."""
        vec = np.asarray(vec, dtype=complex)
        return self.conj_matrix(vec.shape[0]) @ vec.conj()

    def conjugate_operator(self, a):
        """``F A F^{-1}`` for a matrix ``A``."""
        a = np.asarray(a, dtype=complex)
        w = self.conj_matrix(a.shape[0])
        return w @ a.conj() @ w.conj().T


def relation_residual_matrix(a, f, relation):
    """Residual of the requested relation for a plain matrix ``a``."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    if relation == "complex":
        return 0.0
    req = _relation_sign_requirement(relation)
    if req is not None and f.square_sign != req:
        raise InconsistentSymmetryData(
            f"relation {relation} needs F^2 = {req:+d}, got {f.square_sign:+d}")
    w = f.conj_matrix(a.shape[0])
    if relation in ("real", "quaternionic"):
        lhs, rhs = a @ w, w @ a.conj()
    elif relation in ("star_real", "star_quaternionic"):
        lhs, rhs = a @ w, w @ a.T
    else:  # i_real, i_quaternionic
        lhs, rhs = a @ w, -(w @ a.conj())
    return float(np.linalg.norm(lhs - rhs, 2))


def check_relation(op, f, relation):
    """Residual ``||LHS - RHS||`` of the matrix identity for the relation."""
    return relation_residual_matrix(op.matrix, f, relation)


@dataclass(frozen=True)
class SymmetryTriple:
    """The (time-reversal, particle-hole, chiral) data of a model.

    ``pi`` is an ``N x N`` Hermitian unitary; by convention it is brought to
    the canonical ``diag(+1...,-1...)`` form before chiral blocks are read
    off.
    """

    theta: Optional[AntiUnitary] = None
    xi: Optional[AntiUnitary] = None
    pi: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.pi is not None:
            p = np.asarray(self.pi, dtype=complex)
            n = p.shape[0]
            if (np.linalg.norm(p @ p.conj().T - np.eye(n), 2) > 1e-8
                    or np.linalg.norm(p - p.conj().T, 2) > 1e-8):
                raise InconsistentSymmetryData("pi must be a Hermitian unitary")
            p = p.copy()
            p.setflags(write=False)
            object.__setattr__(self, "pi", p)
        if self.theta is not None and self.xi is not None:
            vt, vx = self.theta.unitary_part, self.xi.unitary_part
            if vt.shape != vx.shape:
                raise InconsistentSymmetryData("theta/xi fiber dims differ")
            # Theta Xi = Xi Theta as anti-unitaries
            if np.linalg.norm(vt @ vx.conj() - vx @ vt.conj(), 2) > 1e-8:
                raise InconsistentSymmetryData("theta and xi do not commute")


def _commute_residual(h, f):
    w = f.conj_matrix(h.shape[0])
    return float(np.linalg.norm(h @ w - w @ h.conj(), 2))


def _anticommute_residual(h, f):
    w = f.conj_matrix(h.shape[0])
    return float(np.linalg.norm(h @ w + w @ h.conj(), 2))


def classify_az(h, sym, tol=None):
    """Determine the AZ label of a self-adjoint ``h`` from its symmetry data.

    Every symmetry supplied in ``sym`` must actually hold for ``h`` within
    ``tol`` (default ``1e-8 * ||h||``); a supplied-but-violated symmetry is
    inconsistent data, not a weaker class.
    """
    hm = h.matrix
    norm = np.linalg.norm(hm, 2)
    if tol is None:
        tol = 1e-8 * max(norm, 1.0)
    if h.selfadjointness_defect() > tol:
        raise NotSelfAdjoint(f"||H - H*|| = {h.selfadjointness_defect():.2e} > {tol:.2e}")

    t_sign = x_sign = 0
    chiral = 0
    if sym.theta is not None:
        r = _commute_residual(hm, sym.theta)
        if r > tol:
            raise InconsistentSymmetryData(f"[H, Theta] residual {r:.2e} > tol")
        t_sign = sym.theta.square_sign
    if sym.xi is not None:
        r = _anticommute_residual(hm, sym.xi)
        if r > tol:
            raise InconsistentSymmetryData(f"{{H, Xi}} residual {r:.2e} > tol")
        x_sign = sym.xi.square_sign
    if sym.pi is not None:
        pf = np.kron(np.eye(h.dim // sym.pi.shape[0], dtype=complex), sym.pi)
        r = float(np.linalg.norm(hm @ pf + pf @ hm, 2))
        if r > tol:
            raise NotChiral(f"{{H, Pi}} residual {r:.2e} > tol")
        chiral = 1

    if t_sign and x_sign and not chiral:
        raise InconsistentSymmetryData("theta and xi given but pi missing")
    if chiral and bool(t_sign) != bool(x_sign):
        raise InconsistentSymmetryData(
            "chiral classes need either both or neither anti-unitary")
    key = (t_sign, x_sign, chiral)
    if key not in AZ_TABLE:
        raise InconsistentSymmetryData(f"no AZ class for signature {key}")
    return AZ_TABLE[key]


def chiral_frame(pi):
    """Fiber unitary ``B`` with ``B^+ pi B = diag(1_W, -1_W)``.

    Deterministic: eigenvectors ordered (+1 block first) with the largest
    entry of each column made real positive.  Returns the identity when
    ``pi`` is already canonical.
    """
    pi = np.asarray(pi, dtype=complex)
    n = pi.shape[0]
    if n % 2:
        raise OddFiber("chiral fiber dimension must be even")
    w = n // 2
    canonical = np.diag(np.concatenate([np.ones(w), -np.ones(w)]))
    if np.linalg.norm(pi - canonical, 2) < 1e-12:
        return np.eye(n, dtype=complex)
    vals, vecs = np.linalg.eigh(pi)
    plus = [i for i in range(n) if vals[i] > 0]
    minus = [i for i in range(n) if vals[i] < 0]
    if len(plus) != w or len(minus) != w:
        raise InconsistentSymmetryData("pi eigenspaces have unequal dimension")
    cols = []
    for i in plus + minus:
        v = vecs[:, i]
        k = int(np.argmax(np.abs(v)))
        phase = v[k] / abs(v[k])
        cols.append(v / phase)
    return np.array(cols).T


def chiral_blocks(h, pi, tol=None):
    """Extract the lower-left block ``S`` of a chiral Hamiltonian.

    In the canonical frame ``H = [[0, S*], [S, 0]]`` per site block; the
    returned operator lives on the same window with half the fiber.
    """
    n = h.fiber_dim
    if n % 2:
        raise OddFiber("chiral extraction needs an even fiber")
    w = n // 2
    norm = max(h.norm(), 1.0)
    if tol is None:
        tol = 1e-8 * norm
    b = chiral_frame(pi)
    bf = np.kron(np.eye(h.window.n_sites, dtype=complex), b)
    hm = bf.conj().T @ h.matrix @ bf
    canonical = np.diag(np.concatenate([np.ones(w), -np.ones(w)]))
    pf = np.kron(np.eye(h.window.n_sites, dtype=complex), canonical)
    if np.linalg.norm(hm @ pf + pf @ hm, 2) > tol:
        raise NotChiral("H does not anticommute with pi within tol")
    s_sites = h.window.n_sites
    sm = np.zeros((s_sites * w, s_sites * w), dtype=complex)
    for i in range(s_sites):
        for j in range(s_sites):
            blk = hm[i * n:(i + 1) * n, j * n:(j + 1) * n]
            sm[i * w:(i + 1) * w, j * w:(j + 1) * w] = blk[w:, :w]
    return LatticeOperator(h.window, w, sm)


def chiral_embed(s):
    """Build ``H = [[0, S*], [S, 0]]`` (canonical chiral frame) from a block."""
    w = s.fiber_dim
    n = 2 * w
    nsites = s.window.n_sites
    hm = np.zeros((nsites * n, nsites * n), dtype=complex)
    sm = s.matrix
    sdag = sm.conj().T
    for i in range(nsites):
        for j in range(nsites):
            hm[i * n:i * n + w, j * n + w:(j + 1) * n] = \
                sdag[i * w:(i + 1) * w, j * w:(j + 1) * w]
            hm[i * n + w:(i + 1) * n, j * n:j * n + w] = \
                sm[i * w:(i + 1) * w, j * w:(j + 1) * w]
    return LatticeOperator(s.window, n, hm)


def chiral_block_symmetry(sym, tol=1e-8):
    """Anti-unitary and relation satisfied by the chiral block ``S``.

    For ``[Pi, Theta] = 0`` the block inherits ``F = Theta_++`` with the
    plain (real/quaternionic) relation; for ``{Pi, Theta} = 0`` it inherits
    ``F = Theta_+-`` with the star relation.  Everything is computed in the
    canonical chiral frame.  Returns ``(AntiUnitary, relation)`` or
    ``(None, "complex")`` when no anti-unitary is present.
    """
    if sym.theta is None:
        return None, "complex"
    if sym.pi is None:
        raise InconsistentSymmetryData("chiral block symmetry needs pi")
    b = chiral_frame(sym.pi)
    n = b.shape[0]
    w = n // 2
    vt = b.conj().T @ sym.theta.unitary_part @ b.conj()
    upper_left = vt[:w, :w]
    off = vt[:w, w:]
    if np.linalg.norm(off, 2) < tol:            # [Pi, Theta] = 0
        f = AntiUnitary(upper_left, sym.theta.square_sign)
        rel = "real" if f.square_sign == 1 else "quaternionic"
        return f, rel
    if np.linalg.norm(upper_left, 2) < tol:     # {Pi, Theta} = 0
        f = AntiUnitary(off, sym.theta.square_sign)
        rel = "star_real" if f.square_sign == 1 else "star_quaternionic"
        return f, rel
    raise InconsistentSymmetryData("theta neither commutes nor anticommutes with pi")


class KramersBasis(NamedTuple):
    vectors: list          # orthonormal basis of the subspace
    pairs: list            # index pairs (i, j) with F v_i = v_j  (J case)
    kind: str              # "fixed" or "kramers"


def _span_projector(vectors):
    if not len(vectors):
        return None
    b = np.array(vectors).T
    q, _ = np.linalg.qr(b)
    return q @ q.conj().T


def _orthonormal_complement(columns, removed):
    """Orthonormal basis of span(columns) minus span(removed)."""
    if columns.shape[1] == 0:
        return columns
    proj = np.eye(columns.shape[0], dtype=complex)
    for r in removed:
        proj = proj - np.outer(r, r.conj())
    reduced = proj @ columns
    q, s, _ = np.linalg.svd(reduced, full_matrices=False)
    keep = s > 1e-10
    return q[:, keep]


def kramers_basis(subspace, f, tol=1e-8):
    """Equivariant orthonormal basis of an F-invariant subspace.

    ``square_sign = +1``: returns a basis fixed entrywise by ``F``.
    ``square_sign = -1``: returns Kramers pairs ``(phi_i, F phi_i)``; the
    dimension must then be even.
    """
    vecs = [np.asarray(v, dtype=complex) for v in subspace]
    if not vecs:
        return KramersBasis([], [], "fixed" if f.square_sign == 1 else "kramers")
    d = vecs[0].shape[0]
    b = np.array(vecs).T
    q, _ = np.linalg.qr(b)
    proj = q @ q.conj().T
    for v in vecs:
        fv = f.apply(v)
        if np.linalg.norm(fv - proj @ fv) > tol * max(1.0, np.linalg.norm(fv)):
            raise NotInvariant("subspace is not invariant under F")

    remaining = q
    out, pairs = [], []
    if f.square_sign == 1:
        while remaining.shape[1] > 0:
            v = remaining[:, 0]
            w = v + f.apply(v)
            if np.linalg.norm(w) < 1e-6:
                iv = 1j * v
                w = iv + f.apply(iv)
            w = w / np.linalg.norm(w)
            out.append(w)
            remaining = _orthonormal_complement(remaining, [w])
        return KramersBasis(out, [], "fixed")

    if len(vecs) and remaining.shape[1] % 2:
        raise OddQuaternionicDimension(
            f"quaternionic subspace has odd dimension {remaining.shape[1]}")
    while remaining.shape[1] > 0:
        v = remaining[:, 0]
        w = f.apply(v)
        # re-orthonormalize w against v inside the span (exact up to tol)
        w = w - np.vdot(v, w) * v
        w = w / np.linalg.norm(w)
        pairs.append((len(out), len(out) + 1))
        out.extend([v, w])
        remaining = _orthonormal_complement(remaining, [v, w])
    return KramersBasis(out, pairs, "kramers")


def extend_matrix_to_unitary(z, f, relation, tol=None):
    """Unitary ``Y`` with ``Y - Z`` supported on ker/coker, class preserved.

    ``z`` is a square matrix which is essentially unitary (singular values
    clustered at 0 and 1); the kernel is filled against the cokernel by the
    class-appropriate finite matching.
    """
    z = np.asarray(z, dtype=complex)
    n = z.shape[0]
    if n == 0:
        return z.copy()
    u, s, vh = np.linalg.svd(z)
    if tol is None:
        tol = 1e-8 * max(s[0] if len(s) else 1.0, 1.0)
    r = int(np.sum(s > tol))
    pol = u[:, :r] @ vh[:r, :]
    ker = vh[r:, :].conj().T        # columns: orthonormal kernel basis
    cok = u[:, r:]                  # columns: orthonormal cokernel basis
    m = ker.shape[1]
    if m != cok.shape[1]:
        raise KernelCokernelMismatch(
            f"dim ker = {m} != dim coker = {cok.shape[1]}")
    if m == 0:
        return pol

    rel = relation or "complex"
    if rel == "complex":
        match = cok @ ker.conj().T
    elif rel in ("real", "quaternionic"):
        kb = kramers_basis(list(ker.T), f)
        cb = kramers_basis(list(cok.T), f)
        match = sum(np.outer(cb.vectors[i], kb.vectors[i].conj())
                    for i in range(m))
    elif rel == "star_real":
        match = sum(np.outer(f.apply(ker[:, i]), ker[:, i].conj())
                    for i in range(m))
    elif rel == "star_quaternionic":
        if m % 2:
            raise OddKernelStarH(
                f"star-quaternionic kernel has odd dimension {m}")
        h = m // 2
        match = np.zeros_like(z)
        for i in range(h):
            match += np.outer(-f.apply(ker[:, i + h]), ker[:, i].conj())
            match += np.outer(f.apply(ker[:, i]), ker[:, i + h].conj())
    else:
        raise ValueError(f"extension not defined for relation {rel!r}")
    return pol + match


def extend_to_unitary(z, f=None, relation="complex", tol=None):
    """LatticeOperator wrapper around :func:`extend_matrix_to_unitary`."""
    y = extend_matrix_to_unitary(z.matrix, f, relation, tol)
    return z.like(y)
