"""Concrete lattice models and generator operators with symmetry data.

Matrix conventions (frozen; sign-sensitive tests reference this table):

* SSH, fiber (A, B): chiral op ``pi = sigma_3`` (A sublattice = +1),
  ``Theta = conj``, ``Xi = sigma_3 o conj``.  Intracell hop ``v`` couples
  A and B on one site, intercell ``w`` couples B_x to A_{x+1}.  The chiral
  block is ``S = v + w R^+`` with symbol ``v + w exp(-ik)``, so the
  topological phase ``|w| > |v|`` carries index ``+1``.
* Kitaev chain, Nambu fiber (particle, hole): on-site ``-mu tau_3``,
  hopping block ``[[-t, delta], [-delta, t]]`` from site x to x+1,
  ``Xi = tau_1 o conj`` with ``Xi^2 = +1``.  ``ind_2 = 1`` iff
  ``|mu| < 2|t|``.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import InconsistentSymmetryData, SymmetryUnpreservable, UnsupportedClass
from .lattice import (
    LatticeOperator,
    half_line_projection,
    identity,
    make_shift,
)
from .symmetry import AntiUnitary, SymmetryTriple, classify_az

__all__ = [
    "PAULI", "ModelInstance", "GeneratorInstance", "build_hopping_operator",
    "ssh", "kitaev_chain", "shift_generator", "pairing_sau", "disordered",
    "mobility_counterexample",
]

PAULI = {
    "1": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class ModelInstance:
    hamiltonian: LatticeOperator
    symmetry: SymmetryTriple
    declared_class: str
    parameters: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        found = classify_az(self.hamiltonian, self.symmetry)
        if found != self.declared_class:
            raise InconsistentSymmetryData(
                f"declared {self.declared_class} but symmetry data gives {found}")


class GeneratorInstance(NamedTuple):
    operator: LatticeOperator
    f: Optional[AntiUnitary]
    relation: str
    invariant: int           # Z value, or Z2 parity for the star/imaginary classes
    kind: str                # "unitary" | "sau"


def build_hopping_operator(window, fiber_dim, hoppings):
    """Translation-covariant operator ``sum_l |x+l><x| (x) T_l``.

    ``hoppings`` maps the hop ``l`` to its fiber block; the window boundary
    decides whether hops wrap or truncate.
    """
    total = np.zeros((window.n_sites * fiber_dim,) * 2, dtype=complex)
    for l, blk in hoppings.items():
        blk = np.atleast_2d(np.asarray(blk, dtype=complex))
        perm = make_shift(window, 1, l).matrix if l else np.eye(window.n_sites)
        total += np.kron(perm, blk)
    return LatticeOperator(window, fiber_dim, total)


def ssh(v, w, window):
    """Su-Schrieffer-Heeger chain; class BDI on a two-site unit cell."""
    onsite = v * PAULI["x"]
    inter = np.array([[0, w], [0, 0]], dtype=complex)
    h = build_hopping_operator(window, 2, {0: onsite, 1: inter, -1: inter.conj().T})
    sym = SymmetryTriple(theta=AntiUnitary(PAULI["1"], +1),
                         xi=AntiUnitary(PAULI["z"], +1),
                         pi=PAULI["z"])
    return ModelInstance(h, sym, "BDI", {"v": float(v), "w": float(w)})


def kitaev_chain(mu, t, delta, window):
    """Kitaev p-wave chain in BdG form; class D."""
    onsite = -mu * PAULI["z"]
    hop = np.array([[-t, delta], [-delta, t]], dtype=complex)
    h = build_hopping_operator(window, 2, {0: onsite, 1: hop, -1: hop.conj().T})
    sym = SymmetryTriple(xi=AntiUnitary(PAULI["x"], +1))
    return ModelInstance(h, sym, "D",
                         {"mu": float(mu), "t": float(t), "delta": float(delta)})


def pairing_sau(window, fiber_dim, pairs):
    """Self-adjoint unitary anticommuting with plain conjugation.

    ``pairs`` is a perfect matching of the slots ``(site, fiber)``; each
    matched pair ``(p, q)`` carries the block ``[[0, -i], [i, 0]]``.  Every
    slot must appear in exactly one pair.
    """
    dim = window.n_sites * fiber_dim

    def slot(site, fib):
        return window.site_index(site) * fiber_dim + fib

    m = np.zeros((dim, dim), dtype=complex)
    used = np.zeros(dim, dtype=bool)
    for (xs, xf), (ys, yf) in pairs:
        p, q = slot(xs, xf), slot(ys, yf)
        if used[p] or used[q]:
            raise ValueError("slot used twice in pairing")
        used[p] = used[q] = True
        m[p, q] = -1j
        m[q, p] = 1j
    if not used.all():
        raise ValueError("pairing must cover every slot")
    return LatticeOperator(window, fiber_dim, m)


def _d_class_sau(window, parity, cut_site=1):
    """Class-D (i_real) SAU generator with the requested cut parity.

    The even generator pairs the two fiber slots on every site (giving
    ``1 (x) sigma_y``).  The odd one couples one slot across the cut and one
    across the seam, which pins a single zero mode of the half-line
    compression at each arc end.
    """
    sites = list(window.sites)
    if parity % 2 == 0:
        pairs = [((x, 0), (x, 1)) for x in sites]
        return pairing_sau(window, 2, pairs)
    lo, hi = window.min_site, window.max_site - 1
    special = {lo, cut_site - 1, cut_site, hi}
    if len(special) != 4:
        raise ValueError("window too small for the odd generator")
    pairs = [((x, 0), (x, 1)) for x in sites if x not in special]
    pairs += [((cut_site - 1, 0), (cut_site, 0)),    # across the cut
              ((hi, 0), (lo, 0)),                    # across the seam
              ((lo, 1), (cut_site - 1, 1)),          # leftovers, intra-half
              ((cut_site, 1), (hi, 1))]
    return pairing_sau(window, 2, pairs)


def shift_generator(label, k_or_parity, window):
    """The proof-generator operator of a symmetry class, invariant attached.

    Integer classes take the shift power ``k``; the Z2 classes take a parity.
    """
    if label == "complex":
        k = int(k_or_parity)
        return GeneratorInstance(make_shift(window, 1, k), None, "complex",
                                 -k, "unitary")
    if label == "real":
        k = int(k_or_parity)
        return GeneratorInstance(make_shift(window, 1, k),
                                 AntiUnitary(np.eye(1), +1), "real", -k, "unitary")
    if label == "quaternionic":
        k = int(k_or_parity)
        op = make_shift(window, 2, k)
        return GeneratorInstance(op, AntiUnitary(1j * PAULI["y"], -1),
                                 "quaternionic", -2 * k, "unitary")
    if label == "star_quaternionic":
        parity = int(k_or_parity) % 2
        r = make_shift(window, 1, 1)
        if parity:
            op = r.direct_sum_fiber(r.H)
        else:
            op = identity(window, 1).direct_sum_fiber(identity(window, 1))
        return GeneratorInstance(op, AntiUnitary(1j * PAULI["y"], -1),
                                 "star_quaternionic", parity, "unitary")
    if label == "i_real":
        parity = int(k_or_parity) % 2
        op = _d_class_sau(window, parity)
        return GeneratorInstance(op, AntiUnitary(np.eye(2), +1),
                                 "i_real", parity, "sau")
    if label == "i_quaternionic":
        op = LatticeOperator(window, 2,
                             np.kron(np.eye(window.n_sites), PAULI["z"]))
        return GeneratorInstance(op, AntiUnitary(1j * PAULI["y"], -1),
                                 "i_quaternionic", 0, "sau")
    if label == "star_real":
        raise UnsupportedClass("the star-real class has a single component; "
                               "no non-trivial generator exists")
    raise ValueError(f"unknown relation label {label!r}")


def _onsite_symmetry_projector(sym):
    """Super-operator projecting a fiber Hermitian onto the class-allowed ones."""
    steps = []
    if sym.theta is not None:
        f = sym.theta
        steps.append(lambda x, f=f: 0.5 * (x + f.conjugate_operator(x)))
    if sym.xi is not None:
        f = sym.xi
        steps.append(lambda x, f=f: 0.5 * (x - f.conjugate_operator(x)))
    if sym.pi is not None:
        p = sym.pi
        steps.append(lambda x, p=p: 0.5 * (x - p @ x @ p.conj().T))

    def project(x):
        for s in steps:
            x = s(x)
        return 0.5 * (x + x.conj().T)
    return project


def disordered(base, strength, seed):
    """Seeded on-site disorder, symmetry-projected so the class survives."""
    if strength < 0:
        raise ValueError("strength must be >= 0")
    h = base.hamiltonian
    nfib = h.fiber_dim
    rng = np.random.default_rng(seed)
    project = _onsite_symmetry_projector(base.symmetry)
    if strength > 0:
        probe = project(np.eye(nfib) + rng.normal(size=(nfib, nfib)))
        if np.linalg.norm(probe, 2) < 1e-12:
            raise SymmetryUnpreservable(
                f"no on-site term is compatible with class {base.declared_class}")
    blocks = []
    for _ in range(h.window.n_sites):
        x = rng.uniform(-strength, strength, size=(nfib, nfib))
        x = x + 1j * rng.uniform(-strength, strength, size=(nfib, nfib))
        blocks.append(project(0.5 * (x + x.conj().T)))
    dis = np.zeros_like(h.matrix)
    for i, blk in enumerate(blocks):
        dis[i * nfib:(i + 1) * nfib, i * nfib:(i + 1) * nfib] = blk
    h2 = h.like(h.matrix + dis)
    vals = np.linalg.eigvalsh(h2.matrix)
    params = dict(base.parameters)
    params.update({"disorder_strength": float(strength),
                   "gap": float(np.min(np.abs(vals)))})
    return ModelInstance(h2, base.symmetry, base.declared_class, params, seed)


def mobility_counterexample(window):
    """The shift and its half-line-decoupled copy on an open window.

    Both carry index -1 at the cut, yet the second has a genuine
    cut-localized kernel dimension of 1, which obstructs flattening-route
    paths between them.
    """
    if window.boundary != "open":
        raise ValueError("the counterexample lives on an open window")
    r_op = make_shift(window, 1, 1)
    lam = half_line_projection(window, 1)
    lperp = identity(window, 1) - lam
    s_op = r_op.like(lperp.matrix @ r_op.matrix @ lperp.matrix
                     + lam.matrix @ r_op.matrix @ lam.matrix)
    return r_op, s_op
