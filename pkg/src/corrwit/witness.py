"""Constructive boundary crossings: for a direction ``delta`` find a state in a
class and a real ``lam`` such that ``state + lam * delta`` is a state outside it.

Entanglement is certified with a negative partial transpose starting from the
boundary isotropic state of a locally rotated maximally entangled vector.
The CQ / QC / CC constructions start from simple full-rank product mixtures and
certify exit with a non-commuting pair of blocks.

All ``lam`` values multiply the unit-norm direction; no rescaling by
``d(d+1)/2`` is applied anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import detect
from .linalg import (
    ReducedBlock,
    block_family,
    commutator_norm,
    hermitian_basis,
    local_dim,
    min_eigenvalue,
    partial_transpose,
)
from .states import (
    PSD_TOL,
    DensityMatrix,
    Direction,
    flip_operator,
    isotropic_boundary_state,
    max_entangled,
)

__all__ = [
    "WitnessConstructionError",
    "InvariantDirectionError",
    "ScalarOperatorError",
    "EntanglementWitnessCertificate",
    "ClassCrossingCertificate",
    "embed_W",
    "w_basis",
    "select_unitaries",
    "reduced_block",
    "choose_lambda",
    "build_entangling_perturbation",
    "flat_direction_counterexample",
    "flat_direction_min_pt_eig",
    "find_noncommuting_state",
    "find_coherent_noncommuting_state",
    "build_noncq_perturbation",
    "build_noncc_perturbation",
    "build_non_cq_or_qc_perturbation",
    "psd_maximal_lambda",
    "cq_invariance_check",
]

LAMBDA_START = 0.1
LAMBDA_FLOOR = 1e-6
NPT_THRESHOLD = 1e-8
COMMUTATOR_THRESHOLD = 1e-8
SCALAR_RTOL = 1e-10


class WitnessConstructionError(RuntimeError):
    """No admissible ``lam`` was found above the search floor."""


class InvariantDirectionError(WitnessConstructionError):
    """The direction has the form ``I (x) Xi``; every CQ state stays CQ along it."""


class ScalarOperatorError(ValueError):
    """Raised when an operator is a multiple of the identity, so everything commutes with it."""


@dataclass
class EntanglementWitnessCertificate:
    """``kappa = isotropic_boundary_state(max_entangled(U, V)) + lam * delta`` with ``kappa`` NPT.

    ``reduced`` is the 4x4 compression of ``(U (x) conj(V))^* delta^tau (U (x) conj(V))``,
    the block whose last row the unitary selection makes nonzero.
    """

    delta: Direction
    U: np.ndarray
    V: np.ndarray
    lam: float
    kappa: DensityMatrix
    min_pt_eig: float
    reduced: ReducedBlock
    branch: str = ""
    base: DensityMatrix | None = field(default=None, repr=False)

    def verify(self, tol: float = 1e-12) -> bool:
        d = self.kappa.d
        base = isotropic_boundary_state(max_entangled(self.U, self.V, d), d)
        rebuilt = base.op + self.lam * self.delta.op
        return (
            np.abs(rebuilt - self.kappa.op).max() <= tol
            and min_eigenvalue(self.kappa.op) >= -PSD_TOL
            and min_eigenvalue(partial_transpose(self.kappa.op, d)) <= -NPT_THRESHOLD
        )


@dataclass
class ClassCrossingCertificate:
    """``kappa = base + lam * delta`` where ``base`` passes the ``base_class``
    detector and ``kappa`` fails every detector in ``exit_classes``.

    ``evidence`` maps detector names to ``(verdict_on_base, verdict_on_kappa,
    certificate_on_kappa)``.
    """

    kind: str
    base: DensityMatrix
    delta: Direction
    lam: float
    kappa: DensityMatrix
    evidence: dict
    base_class: str
    exit_classes: tuple
    branch: str
    indices: dict = field(default_factory=dict)

    def verify(self, tol: float = 1e-12) -> bool:
        if np.abs(self.base.op + self.lam * self.delta.op - self.kappa.op).max() > tol:
            return False
        if not self.evidence[self.base_class][0]:
            return False
        return not any(self.evidence[name][1] for name in self.exit_classes)


def w_basis(d: int) -> np.ndarray:
    """``d^2 x 4`` isometry mapping the basis f1..f4 of C^2 (x) C^2 into C^d (x) C^d.

    f1 = |1,1>, f2 = |2,2>, f3 = (|1,2> + |2,1>)/sqrt2, f4 = (|1,2> - |2,1>)/sqrt2,
    where |1>, |2> are the first two standard basis vectors.
    """
    if d < 2:
        raise ValueError("need local dimension at least 2")
    m = np.zeros((d * d, 4), dtype=complex)
    e11, e12, e21, e22 = 0, 1, d, d + 1
    s = 1 / np.sqrt(2)
    m[e11, 0] = 1
    m[e22, 1] = 1
    m[e12, 2] = m[e21, 2] = s
    m[e12, 3], m[e21, 3] = s, -s
    return m


def embed_W(x, d: int | None = None) -> np.ndarray:
    """Compression of ``x`` to the span of f1..f4, as a 4x4 matrix in that basis."""
    d = local_dim(x, d)
    m = w_basis(d)
    return m.conj().T @ np.asarray(x) @ m


def _completion(first: int, second: int, d: int) -> np.ndarray:
    # permutation unitary whose first two columns span {e_first, e_second}
    if second == first:
        second = next(j for j in range(d) if j != first)
    order = [first, second] + [j for j in range(d) if j not in (first, second)]
    u = np.zeros((d, d), dtype=complex)
    u[order, range(d)] = 1
    return u


def _t_unitary(block: np.ndarray, d: int) -> np.ndarray:
    t = np.eye(d, dtype=complex)
    t[:2, :2] = block
    return t


def _compressed(delta_pt: np.ndarray, U: np.ndarray, V: np.ndarray, d: int) -> np.ndarray:
    uv = np.kron(U, V)
    return embed_W(uv.conj().T @ delta_pt @ uv, d)


def select_unitaries(delta) -> tuple[np.ndarray, np.ndarray, str]:
    """Local unitaries making the last row of the compressed, rotated ``delta^tau`` nonzero.

    Returns ``(U, V, branch)`` where ``branch`` is one of ``"V0"``, ``"T0"``,
    ``"T+"``, ``"T-"``.
    """
    op = np.asarray(delta)
    d = local_dim(op)
    scale = np.linalg.norm(op)
    delta_pt = partial_transpose(op, d)
    row, col = np.unravel_index(np.argmax(np.abs(delta_pt)), delta_pt.shape)
    if abs(delta_pt[row, col]) <= 1e-12 * scale or scale == 0:
        raise ValueError("direction is numerically zero")
    p, q = divmod(int(row), d)
    r, s = divmod(int(col), d)
    U = _completion(p, r, d)
    V0 = _completion(q, s, d)
    thresh = 1e-10 * scale

    tilde = _compressed(delta_pt, U, V0, d)
    if np.abs(tilde[3]).max() > thresh:
        return U, V0, "V0"
    if abs(tilde[2, 2]) > thresh:
        return U, V0 @ _t_unitary(np.diag([1, -1]), d), "T0"
    w = np.exp(1j * np.pi / 4)
    for name, tp in (("T+", np.array([[0, w], [w.conjugate(), 0]])), ("T-", np.array([[0, w.conjugate()], [w, 0]]))):
        V = V0 @ _t_unitary(tp, d)
        if np.abs(_compressed(delta_pt, U, V, d)[3]).max() > thresh:
            return U, V, name
    raise WitnessConstructionError("no branch of the unitary selection produced a nonzero last row")


def reduced_block(delta, U, V) -> ReducedBlock:
    """Partition of ``W^* (U (x) V)^* delta^tau (U (x) V) W`` into ``A``, ``a``, ``alpha``."""
    op = np.asarray(delta)
    d = local_dim(op)
    return ReducedBlock.from_matrix(_compressed(partial_transpose(op, d), np.asarray(U), np.asarray(V), d))


def choose_lambda(block: ReducedBlock, base, delta) -> float:
    """Perturbation strength making ``base + lam * delta`` a state with a negative partial transpose.

    The sign is opposite to ``alpha`` (positive when ``alpha`` vanishes); the
    magnitude halves from 0.1 until the perturbed operator is positive and its
    partial transpose has an eigenvalue at most -1e-8.
    """
    base = np.asarray(base)
    op = np.asarray(delta)
    sign = -1.0 if block.alpha > 0 else 1.0
    lam = LAMBDA_START
    last = None
    while lam >= LAMBDA_FLOOR:
        kappa = base + sign * lam * op
        lo = min_eigenvalue(kappa)
        if lo >= -PSD_TOL:
            last = min_eigenvalue(partial_transpose(kappa))
            if last <= -NPT_THRESHOLD:
                return sign * lam
        lam /= 2
    raise WitnessConstructionError(
        f"no admissible lambda above {LAMBDA_FLOOR:g} (alpha={block.alpha:.3e}, "
        f"|a|={np.linalg.norm(block.a):.3e}, last min_pt_eig={last})"
    )


def build_entangling_perturbation(delta: Direction) -> EntanglementWitnessCertificate:
    d = local_dim(delta.op, delta.d)
    U, V_sel, branch = select_unitaries(delta)
    block = reduced_block(delta, U, V_sel)
    if max(abs(block.alpha), np.linalg.norm(block.a)) < 1e-10 * np.linalg.norm(delta.op):
        raise WitnessConstructionError("reduced block has a = 0 and alpha = 0")
    # the partial transpose conjugates the second unitary, so the state uses conj(V)
    V = V_sel.conj()
    base = isotropic_boundary_state(max_entangled(U, V, d), d)
    lam = choose_lambda(block, base, delta)
    kappa = DensityMatrix(base.op + lam * delta.op, d)
    return EntanglementWitnessCertificate(
        delta=delta,
        U=U,
        V=V,
        lam=lam,
        kappa=kappa,
        min_pt_eig=min_eigenvalue(partial_transpose(kappa.op, d)),
        reduced=block,
        branch=branch,
        base=base,
    )


def _flat_operator(d: int) -> np.ndarray:
    x = np.zeros((d * d, d * d))
    x[0, 0] = 1
    x[-1, -1] = -1
    return x


def flat_direction_counterexample(d: int) -> tuple[Direction, float]:
    """Direction ``|1,1><1,1| - |d,d><d,d|`` and the largest coefficient keeping the partial transpose positive.

    The threshold ``2/(d(d+1))`` refers to the unnormalized operator (Frobenius
    norm sqrt 2), with the isotropic state of the canonical vector as base.
    """
    if d < 2:
        raise ValueError("need local dimension at least 2")
    return Direction(_flat_operator(d), d), 2 / (d * (d + 1))


def flat_direction_min_pt_eig(d: int, lam) -> np.ndarray:
    """Smallest eigenvalue of the partial transpose along the flat direction, for each coefficient in ``lam``."""
    from .states import canonical_max_entangled

    base = isotropic_boundary_state(canonical_max_entangled(d), d).op
    flat = _flat_operator(d)
    return np.array([min_eigenvalue(partial_transpose(base + x * flat, d)) for x in np.atleast_1d(lam)])


def _nonscalar_part(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    return a - np.trace(a) / n * np.eye(n)


def find_noncommuting_state(A) -> np.ndarray:
    """A full-rank state ``(I + mu * H)/n`` that does not commute with ``A``.

    ``H`` is the traceless part of the Hermitian basis element with the largest
    commutator against ``A``.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    norm = np.linalg.norm(A)
    if norm == 0 or np.linalg.norm(_nonscalar_part(A)) <= SCALAR_RTOL * norm:
        raise ScalarOperatorError("operator is a multiple of the identity")
    candidates = [_nonscalar_part(h) for h in hermitian_basis(n)]
    scores = [commutator_norm(A, h) for h in candidates]
    h = candidates[int(np.argmax(scores))]
    mu = 0.5 / np.linalg.norm(h, 2)
    return (np.eye(n) + mu * h) / n


def find_coherent_noncommuting_state(A) -> np.ndarray:
    """Like :func:`find_noncommuting_state`, additionally with ``<1|sigma|2> != 0``."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    sigma0 = find_noncommuting_state(A)
    if abs(sigma0[0, 1]) > 1e-12:
        return sigma0
    mix = np.eye(n, dtype=complex)
    mix[0, 1] += 1
    mix[1, 0] += 1
    mix /= n
    floor = SCALAR_RTOL * np.linalg.norm(A)
    for k in range(1, 13):
        mu = 10.0**-k
        sigma = (1 - mu) * sigma0 + mu * mix
        if commutator_norm(A, sigma) >= floor and min_eigenvalue(sigma) >= 0:
            return sigma
    raise WitnessConstructionError("mixing destroyed the commutator at every tested weight")


def _pick_nonscalar_block(op: np.ndarray, d: int) -> tuple[int, int]:
    fam = block_family(op, d, "A")
    sizes = np.array([[np.linalg.norm(_nonscalar_part(fam[k, l])) for l in range(d)] for k in range(d)])
    p, q = np.unravel_index(np.argmax(sizes), sizes.shape)
    if sizes[p, q] <= SCALAR_RTOL * np.linalg.norm(op):
        raise InvariantDirectionError("invariant direction: delta = I (x) Xi leaves every CQ state CQ")
    return int(p), int(q)


def _halving(base: np.ndarray, op: np.ndarray, accept) -> tuple[float, np.ndarray]:
    lam = LAMBDA_START
    while lam >= LAMBDA_FLOOR:
        kappa = base + lam * op
        if min_eigenvalue(kappa) >= -PSD_TOL and accept(kappa):
            return lam, kappa
        lam /= 2
    raise WitnessConstructionError(f"no admissible lambda above {LAMBDA_FLOOR:g}")


def _noncq_core(op: np.ndarray, d: int, tol: float):
    p, q = _pick_nonscalar_block(op, d)
    a_pq = block_family(op, d, "A")[p, q]
    sigma = find_noncommuting_state(a_pq)
    t = 0 if p != 0 else 1
    proj_t = np.zeros((d, d))
    proj_t[t, t] = 1
    base = np.kron(sigma, proj_t) / 2 + np.eye(d * d) / (2 * d * d)

    def accept(kappa):
        fam = block_family(kappa, d, "A")
        if commutator_norm(fam[p, q], fam[t, t]) < COMMUTATOR_THRESHOLD:
            return False
        return not detect.cq_check(kappa, tol)[0]

    lam, kappa = _halving(base, op, accept)
    return base, lam, kappa, {"p": p, "q": q, "t": t}


def _non_cq_or_qc_core(op: np.ndarray, d: int, tol: float):
    p, q = _pick_nonscalar_block(op, d)
    a_pq = block_family(op, d, "A")[p, q]
    sigma = find_coherent_noncommuting_state(a_pq)
    t = 0 if p != 0 else 1
    proj_t = np.zeros((d, d))
    proj_t[t, t] = 1
    gamma = find_noncommuting_state(proj_t) / 2 + np.eye(d) / (2 * d)
    base = np.kron(sigma, proj_t) / 2 + np.kron(np.eye(d), gamma) / (2 * d)

    def accept(kappa):
        fa = block_family(kappa, d, "A")
        fb = block_family(kappa, d, "B")
        if commutator_norm(fa[p, q], fa[t, t]) < COMMUTATOR_THRESHOLD:
            return False
        if commutator_norm(fb[0, 1], fb[0, 0]) < COMMUTATOR_THRESHOLD:
            return False
        return not detect.cq_check(kappa, tol)[0] and not detect.qc_check(kappa, tol)[0]

    lam, kappa = _halving(base, op, accept)
    return base, lam, kappa, {"p": p, "q": q, "t": t}


def _has_nonscalar_a_block(op: np.ndarray, d: int) -> bool:
    try:
        _pick_nonscalar_block(op, d)
    except InvariantDirectionError:
        return False
    return True


def _evidence(base: np.ndarray, kappa: np.ndarray, names, tol: float) -> dict:
    checks = {"cq": detect.cq_check, "qc": detect.qc_check, "cc": detect.cc_check}
    out = {}
    for name in names:
        ok_base = checks[name](base, tol)[0]
        ok_kappa, cert = checks[name](kappa, tol)
        out[name] = (ok_base, ok_kappa, cert)
    return out


def _finish(kind, base, delta, lam, kappa, base_class, exit_classes, branch, indices, tol) -> ClassCrossingCertificate:
    names = sorted({base_class, *exit_classes})
    cert = ClassCrossingCertificate(
        kind=kind,
        base=DensityMatrix(base, delta.d),
        delta=delta,
        lam=float(lam),
        kappa=DensityMatrix(kappa, delta.d),
        evidence=_evidence(base, kappa, names, tol),
        base_class=base_class,
        exit_classes=tuple(exit_classes),
        branch=branch,
        indices=indices,
    )
    if not cert.verify():
        verdicts = {k: v[:2] for k, v in cert.evidence.items()}
        raise WitnessConstructionError(f"{kind} certificate failed its detector checks: {verdicts}")
    return cert


def build_noncq_perturbation(delta: Direction, tol: float = detect.DEFAULT_TOL) -> ClassCrossingCertificate:
    """A CC (hence CQ) base state that leaves the CQ class along ``delta``.

    Raises :class:`InvariantDirectionError` when ``delta = I (x) Xi``.
    """
    op = np.asarray(delta.op)
    d = local_dim(op, delta.d)
    base, lam, kappa, idx = _noncq_core(op, d, tol)
    return _finish("noncq", base, delta, lam, kappa, "cq", ("cq",), "primary", idx, tol)


def build_noncc_perturbation(delta: Direction, tol: float = detect.DEFAULT_TOL) -> ClassCrossingCertificate:
    """A CC base state that leaves the CC class along ``delta``.

    Directions of the form ``I (x) Xi`` are handled by swapping the two factors
    and exiting the QC class instead.
    """
    op = np.asarray(delta.op)
    d = local_dim(op, delta.d)
    if _has_nonscalar_a_block(op, d):
        base, lam, kappa, idx = _noncq_core(op, d, tol)
        branch = "primary"
    else:
        f = flip_operator(d)
        base, lam, kappa, idx = _noncq_core(f @ op @ f, d, tol)
        base, kappa = f @ base @ f, f @ kappa @ f
        branch = "mirrored"
    return _finish("noncc", base, delta, lam, kappa, "cc", ("cc",), branch, idx, tol)


def build_non_cq_or_qc_perturbation(delta: Direction, tol: float = detect.DEFAULT_TOL) -> ClassCrossingCertificate:
    """A CQ (or, mirrored, QC) base state that leaves both the CQ and the QC class along ``delta``."""
    op = np.asarray(delta.op)
    d = local_dim(op, delta.d)
    if _has_nonscalar_a_block(op, d):
        base, lam, kappa, idx = _non_cq_or_qc_core(op, d, tol)
        branch, base_class = "primary", "cq"
    else:
        f = flip_operator(d)
        base, lam, kappa, idx = _non_cq_or_qc_core(f @ op @ f, d, tol)
        base, kappa = f @ base @ f, f @ kappa @ f
        branch, base_class = "mirrored", "qc"
    return _finish("nonclass", base, delta, lam, kappa, base_class, ("cq", "qc"), branch, idx, tol)


def psd_maximal_lambda(base, op, start: float = LAMBDA_START) -> float:
    """Largest ``start * 2**-k`` keeping ``base + lam * op`` positive semidefinite."""
    base = np.asarray(base)
    op = np.asarray(op)
    lam = start
    while lam >= LAMBDA_FLOOR:
        if min_eigenvalue(base + lam * op) >= -PSD_TOL:
            return lam
        lam /= 2
    raise WitnessConstructionError(f"base state admits no step above {LAMBDA_FLOOR:g}")


def cq_invariance_check(base: DensityMatrix, xi, tol: float = detect.DEFAULT_TOL):
    """Perturb a CQ state along ``I (x) xi`` as far as positivity allows and re-run the CQ test.

    Returns ``(lam, kappa, verdict)``.
    """
    d = local_dim(base.op, base.d)
    xi = np.asarray(xi, dtype=complex)
    op = Direction.from_operator(np.kron(np.eye(d), xi), d).op
    lam = psd_maximal_lambda(base.op, op)
    kappa = DensityMatrix(base.op + lam * op, d)
    return lam, kappa, detect.cq_check(kappa, tol)[0]
