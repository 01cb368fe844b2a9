"""Finite POVMs, their blind subspace and the minimal CQ-deciding measurement.

The blind subspace ``X_E`` of a POVM is the set of Hermitian operators with
zero trace pairing against every element.  For a genuine POVM the elements sum
to the identity, so every member of ``X_E`` is traceless and
``dim E + dim X_E = D^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import as_hermitian, hs_inner, local_dim, orth_complement, real_span_dim
from .states import make_rng

__all__ = [
    "Povm",
    "PovmAnalysis",
    "validate",
    "analyze",
    "local_identity_directions",
    "in_local_identity_span",
    "build_minimal_cq_povm",
    "minimal_cq_outcomes",
    "random_povm",
    "basis_measurement",
    "statistics",
    "distinguishes",
    "blind_dimension",
]

ELEMENT_PSD_TOL = 1e-10
NORMALIZATION_TOL = 1e-10
SUBSPACE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple
    d: int | None = None

    def __post_init__(self):
        elems = tuple(as_hermitian(e) for e in self.elements)
        if not elems:
            raise ValueError("a POVM needs at least one element")
        if len({e.shape for e in elems}) != 1:
            raise ValueError("POVM elements have mismatched shapes")
        if self.d is not None:
            local_dim(elems[0], self.d)
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass
class PovmAnalysis:
    dim_e: int
    dim_xe: int
    xe_basis: list = field(repr=False)
    informationally_complete: bool
    decides_cq: bool


def validate(povm: Povm) -> tuple[bool, dict]:
    """Check positivity of each element and normalization; returns ``(ok, residuals)``."""
    worst_eig = min(float(np.linalg.eigvalsh(e)[0]) for e in povm.elements)
    norm_err = float(np.linalg.norm(sum(povm.elements) - np.eye(povm.dim)))
    ok = worst_eig >= -ELEMENT_PSD_TOL and norm_err <= NORMALIZATION_TOL
    return ok, {"min_element_eigenvalue": worst_eig, "normalization_error": norm_err}


def in_local_identity_span(x, d: int | None = None, tol: float = SUBSPACE_TOL) -> bool:
    """Whether ``x`` lies within ``tol`` (Frobenius) of the operators ``I (x) Xi``."""
    d = local_dim(x, d)
    t = np.asarray(x).reshape(d, d, d, d)
    xi = np.einsum("ikil->kl", t) / d
    return float(np.linalg.norm(np.asarray(x) - np.kron(np.eye(d), xi))) <= tol


def local_identity_directions(d: int) -> list[np.ndarray]:
    """Orthonormal basis of the traceless operators ``I (x) Xi`` (``d^2 - 1`` of them)."""
    xis = orth_complement([np.eye(d)])
    return [np.kron(np.eye(d), xi) / np.sqrt(d) for xi in xis]


def blind_dimension(ops, n: int | None = None) -> int:
    """Dimension of the Hermitian operators orthogonal to all of ``ops`` (no trace restriction)."""
    return len(orth_complement(list(ops), n=n))


def analyze(povm: Povm) -> PovmAnalysis:
    elems = list(povm.elements)
    dim_e = real_span_dim(elems)
    xe = orth_complement(elems, within_traceless=True)
    d = povm.d if povm.d is not None else None
    if d is None:
        try:
            d = local_dim(elems[0])
        except ValueError:
            d = None
    decides = d is not None and all(in_local_identity_span(x, d) for x in xe)
    return PovmAnalysis(
        dim_e=dim_e,
        dim_xe=len(xe),
        xe_basis=xe,
        informationally_complete=len(xe) == 0,
        decides_cq=decides,
    )


def minimal_cq_outcomes(d: int) -> int:
    return d**4 - d**2 + 1


def build_minimal_cq_povm(d: int, epsilon: float = 0.1) -> Povm:
    """POVM with ``d^4 - d^2 + 1`` outcomes whose blind subspace is exactly ``{I (x) Xi}``.

    Elements are ``(I + eps * G_j)/m`` for an orthonormal basis ``G_j`` of the
    traceless operators orthogonal to every ``I (x) Xi``, plus the remainder
    ``I - sum_j E_j``.  ``eps`` is halved until every element is positive.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    n = d * d
    gens = orth_complement(local_identity_directions(d), within_traceless=True)
    m = len(gens) + 1
    eye = np.eye(n)
    total = sum(gens)
    eps = epsilon
    for _ in range(41):
        elems = [(eye + eps * g) / m for g in gens]
        first = (eye - eps * total) / m
        if min(np.linalg.eigvalsh(e)[0] for e in [first, *elems]) >= 0:
            return Povm(tuple([first, *elems]), d)
        eps /= 2
    raise ValueError(f"no positive POVM found after 40 halvings of epsilon={epsilon}")


def basis_measurement(n: int, d: int | None = None) -> Povm:
    return Povm(tuple(np.diag(np.eye(n)[j]) for j in range(n)), d)


def random_povm(n: int, k: int, seed, d: int | None = None) -> Povm:
    """``k`` Gaussian-square positive operators conjugated by the inverse square root of their sum."""
    rng = make_rng(seed)
    raw = []
    for _ in range(k):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        raw.append(g @ g.conj().T)
    vals, vecs = np.linalg.eigh(sum(raw))
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    return Povm(tuple(inv_sqrt @ e @ inv_sqrt for e in raw), d)


def statistics(povm: Povm, rho) -> np.ndarray:
    """Outcome probabilities ``tr(rho E_j)``."""
    rho = np.asarray(rho)
    return np.array([hs_inner(e, rho) for e in povm.elements])


def distinguishes(povm: Povm, rho1, rho2, tol: float = 1e-10) -> bool:
    diff = statistics(povm, rho1) - statistics(povm, rho2)
    return bool(np.abs(diff).max() > tol)
