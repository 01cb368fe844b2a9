"""Membership tests for the PPT, CQ, QC and CC classes of bipartite states.

Separability itself is not decided here: ``ppt_check`` is only the necessary
condition, so an NPT verdict certifies entanglement but a PPT verdict does not
certify separability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .linalg import block_family, commutator_norm, local_dim, min_eigenvalue, partial_transpose

__all__ = [
    "DEFAULT_TOL",
    "ClassReport",
    "FamilyCertificate",
    "ppt_check",
    "family_defects",
    "common_eigenbasis",
    "cq_check",
    "qc_check",
    "cc_check",
    "classify",
]

DEFAULT_TOL = 1e-8
CLUSTER_RTOL = 1e-8
_COMBINATION_SEED = 0x5EED


@dataclass
class FamilyCertificate:
    """Evidence for or against a CQ (``side="A"``) or QC (``side="B"``) decomposition.

    On success ``basis`` holds the classical basis as columns and ``parts[i]``
    the (unnormalized) operator paired with ``|basis_i><basis_i|``; ``residual``
    is the Frobenius error of reassembling the state from them.  On failure
    ``pair`` names the offending family members, as ``((k, l), (k2, l2))`` for a
    commutator or ``((k, l), (k, l))`` for a normality defect.
    """

    side: str
    ok: bool
    max_commutator: float
    max_normality: float
    threshold: float
    pair: tuple | None = None
    reason: str = ""
    basis: np.ndarray | None = field(default=None, repr=False)
    parts: np.ndarray | None = field(default=None, repr=False)
    residual: float | None = None


@dataclass
class ClassReport:
    npt: bool
    ppt: bool
    cq: bool
    qc: bool
    cc: bool
    min_pt_eig: float
    max_commutator_A: float
    max_normality_A: float
    max_commutator_B: float
    max_normality_B: float
    tolerance: float

    def as_dict(self) -> dict:
        return {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v)) for k, v in self.__dict__.items()}


def ppt_check(rho, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """PPT verdict and the smallest eigenvalue of the partial transpose."""
    lo = min_eigenvalue(partial_transpose(np.asarray(rho)))
    return lo >= -tol, lo


def family_defects(fam: np.ndarray):
    """Worst normality defect and worst pairwise commutator of a ``(d, d, d, d)`` family.

    Returns ``(max_normality, normality_index, max_commutator, commutator_pair)``.
    """
    d = fam.shape[0]
    idx = [(k, l) for k in range(d) for l in range(d)]
    worst_n, where_n = 0.0, None
    for kl in idx:
        a = fam[kl]
        v = commutator_norm(a, a.conj().T)
        if v > worst_n:
            worst_n, where_n = v, kl
    worst_c, where_c = 0.0, None
    for p, q in combinations(idx, 2):
        v = commutator_norm(fam[p], fam[q])
        if v > worst_c:
            worst_c, where_c = v, (p, q)
    return worst_n, where_n, worst_c, where_c


def _clusters(vals: np.ndarray, gap: float):
    start = 0
    for j in range(1, len(vals) + 1):
        if j == len(vals) or vals[j] - vals[j - 1] >= gap:
            yield slice(start, j)
            start = j


def _refine(q: np.ndarray, ops: list[np.ndarray], scale: float) -> np.ndarray:
    # split a common invariant subspace (columns of q) using the remaining ops in turn
    if q.shape[1] == 1 or not ops:
        return q
    op, rest = ops[0], ops[1:]
    vals, vecs = np.linalg.eigh(q.conj().T @ op @ q)
    q = q @ vecs
    blocks = [_refine(q[:, s], rest, scale) for s in _clusters(vals, CLUSTER_RTOL * scale)]
    return np.concatenate(blocks, axis=1)


def common_eigenbasis(ops) -> np.ndarray:
    """Unitary whose columns diagonalize every member of a commuting normal family.

    A fixed-seed random real combination of the Hermitian and anti-Hermitian
    parts is diagonalized first; eigenvalue clusters closer than 1e-8 (relative)
    are then split by each member in turn.
    """
    herm = []
    for a in ops:
        a = np.asarray(a)
        herm.append((a + a.conj().T) / 2)
        herm.append((a - a.conj().T) / 2j)
    n = herm[0].shape[0]
    scale = max(np.linalg.norm(h) for h in herm)
    if scale == 0:
        return np.eye(n, dtype=complex)
    rng = np.random.default_rng(_COMBINATION_SEED)
    coeffs = rng.standard_normal(len(herm))
    m = np.einsum("a,aij->ij", coeffs, np.array(herm))
    m = (m + m.conj().T) / 2
    vals, vecs = np.linalg.eigh(m)
    gap = CLUSTER_RTOL * max(np.linalg.norm(m), scale)
    blocks = [_refine(vecs[:, s], herm, scale) for s in _clusters(vals, gap)]
    return np.concatenate(blocks, axis=1)


def _family_check(rho: np.ndarray, side: str, tol: float) -> FamilyCertificate:
    d = local_dim(rho)
    fam = block_family(rho, d, side)
    norm = np.linalg.norm(rho)
    threshold = tol * norm**2
    worst_n, where_n, worst_c, where_c = family_defects(fam)
    cert = FamilyCertificate(side=side, ok=False, max_commutator=worst_c, max_normality=worst_n, threshold=threshold)
    if worst_n > threshold:
        cert.pair, cert.reason = (where_n, where_n), "non-normal block"
        return cert
    if worst_c > threshold:
        cert.pair, cert.reason = where_c, "non-commuting blocks"
        return cert

    members = [fam[k, l] for k in range(d) for l in range(d)]
    basis = common_eigenbasis(members)
    # parts[i][k, l] = <phi_i| A_kl |phi_i>
    parts = np.einsum("ai,klab,bi->ikl", basis.conj(), fam, basis)
    rebuilt = np.zeros_like(rho, dtype=complex)
    for i in range(d):
        proj = np.outer(basis[:, i], basis[:, i].conj())
        rebuilt += np.kron(proj, parts[i]) if side == "A" else np.kron(parts[i], proj)
    cert.basis, cert.parts = basis, parts
    cert.residual = float(np.linalg.norm(rho - rebuilt))
    if cert.residual > 10 * tol * max(norm, 1e-300):
        cert.reason = "reassembly residual above tolerance"
        return cert
    cert.ok = True
    return cert


def cq_check(rho, tol: float = DEFAULT_TOL) -> tuple[bool, FamilyCertificate]:
    """Classical-quantum test via normality and commutativity of the ``A_kl`` blocks.

    When the family passes, a decomposition ``sum_i |phi_i><phi_i| (x) eta_i``
    is constructed by simultaneous diagonalization and its reassembly residual
    must also be within tolerance.
    """
    cert = _family_check(np.asarray(rho, dtype=complex), "A", tol)
    return cert.ok, cert


def qc_check(rho, tol: float = DEFAULT_TOL) -> tuple[bool, FamilyCertificate]:
    """Quantum-classical test on the ``B_ij`` blocks (classical basis on the second factor)."""
    cert = _family_check(np.asarray(rho, dtype=complex), "B", tol)
    return cert.ok, cert


def cc_check(rho, tol: float = DEFAULT_TOL) -> tuple[bool, FamilyCertificate]:
    ok, cert = cq_check(rho, tol)
    if not ok:
        return False, cert
    ok, cert_b = qc_check(rho, tol)
    return ok, (cert_b if not ok else cert)


def classify(rho, tol: float = DEFAULT_TOL) -> ClassReport:
    rho = np.asarray(rho, dtype=complex)
    ppt, lo = ppt_check(rho, tol)
    cq, ca = cq_check(rho, tol)
    qc, cb = qc_check(rho, tol)
    return ClassReport(
        npt=not ppt,
        ppt=ppt,
        cq=cq,
        qc=qc,
        cc=cq and qc,
        min_pt_eig=lo,
        max_commutator_A=ca.max_commutator,
        max_normality_A=ca.max_normality,
        max_commutator_B=cb.max_commutator,
        max_normality_B=cb.max_normality,
        tolerance=tol,
    )
