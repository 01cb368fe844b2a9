"""Dense complex matrix helpers for bipartite operators on C^d (x) C^d.

Operators are plain ``numpy`` arrays. A bipartite index ``(i, k)`` (first
factor ``i``, second factor ``k``) maps to the flat index ``i * d + k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Sequence

import numpy as np

__all__ = [
    "BipartiteDims",
    "ReducedBlock",
    "as_hermitian",
    "local_dim",
    "kron",
    "partial_transpose",
    "block_family",
    "assemble_family",
    "eig_hermitian",
    "min_eigenvalue",
    "hs_inner",
    "hermitian_basis",
    "real_span_dim",
    "orth_complement",
    "commutator_norm",
    "is_normal",
    "RANK_RTOL",
    "HERMITIAN_RTOL",
]

RANK_RTOL = 1e-10
HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class BipartiteDims:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"local dimension must be positive, got {self.d}")

    @property
    def D(self) -> int:
        return self.d * self.d


@dataclass(frozen=True)
class ReducedBlock:
    """Partition of a 4x4 Hermitian matrix as [[A, a], [a^*, alpha]]."""

    A: np.ndarray
    a: np.ndarray
    alpha: float

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "ReducedBlock":
        m = as_hermitian(m)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {m.shape}")
        return cls(A=m[:3, :3].copy(), a=m[:3, 3].copy(), alpha=float(m[3, 3].real))

    def matrix(self) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        out[:3, :3] = self.A
        out[:3, 3] = self.a
        out[3, :3] = self.a.conj()
        out[3, 3] = self.alpha
        return out

    def rotated(self):
        """Return ``(mu, b)``: eigenvalues of ``A`` and ``b = S^* a`` in its eigenbasis."""
        mu, S = np.linalg.eigh(self.A)
        return mu, S.conj().T @ self.a


def as_hermitian(x, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return ``(x + x^*)/2``, or raise if ``x`` is visibly non-Hermitian."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {x.shape}")
    skew = np.linalg.norm(x - x.conj().T)
    if skew > rtol * np.linalg.norm(x):
        raise ValueError(f"matrix is not Hermitian (asymmetry {skew:.3e})")
    return (x + x.conj().T) / 2


def local_dim(x, d: int | None = None) -> int:
    """Local dimension ``d`` of a ``d^2 x d^2`` operator, checked against ``d`` if given."""
    n = np.shape(x)[0]
    if d is None:
        d = isqrt(n)
    if d * d != n or np.shape(x) != (n, n):
        raise ValueError(f"operator of shape {np.shape(x)} is not bipartite with d={d}")
    return d


def kron(x, y) -> np.ndarray:
    return np.kron(np.asarray(x), np.asarray(y))


def partial_transpose(x, d: int | None = None) -> np.ndarray:
    """Transpose on the second tensor factor: ``out[(i,k),(j,l)] = x[(i,l),(j,k)]``."""
    d = local_dim(x, d)
    t = np.asarray(x).reshape(d, d, d, d)
    return t.transpose(0, 3, 2, 1).reshape(d * d, d * d)


def block_family(x, d: int | None = None, side: str = "A") -> np.ndarray:
    """Operator coefficients of ``x`` against matrix units on one factor.

    ``side="A"`` gives ``fam[k, l] = A_kl`` with ``x = sum_kl A_kl (x) |k><l|``;
    ``side="B"`` gives ``fam[i, j] = B_ij`` with ``x = sum_ij |i><j| (x) B_ij``.
    The result has shape ``(d, d, d, d)``.
    """
    d = local_dim(x, d)
    t = np.asarray(x).reshape(d, d, d, d)  # t[i, k, j, l]
    if side == "A":
        return t.transpose(1, 3, 0, 2).copy()
    if side == "B":
        return t.transpose(0, 2, 1, 3).copy()
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def assemble_family(fam: np.ndarray, side: str = "A") -> np.ndarray:
    """Inverse of :func:`block_family`."""
    fam = np.asarray(fam)
    d = fam.shape[0]
    if side == "A":
        t = fam.transpose(2, 0, 3, 1)
    elif side == "B":
        t = fam.transpose(0, 2, 1, 3)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return t.reshape(d * d, d * d)


def eig_hermitian(x) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    x = as_hermitian(x)
    try:
        return np.linalg.eigh(x)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"Hermitian eigensolver did not converge: {exc}") from exc


def min_eigenvalue(x) -> float:
    return float(np.linalg.eigvalsh(as_hermitian(x))[0])


def hs_inner(x, y) -> float:
    """Real part of ``tr(x y)``."""
    x = np.asarray(x)
    y = np.asarray(y)
    return float(np.sum(x * y.T).real)


def hermitian_basis(n: int) -> np.ndarray:
    """Orthonormal basis (trace pairing) of the n x n Hermitian matrices, shape ``(n*n, n, n)``.

    Order: diagonal units first, then for ``j < k`` the symmetric and
    antisymmetric combinations of ``|j><k|`` and ``|k><j|``.
    """
    out = np.zeros((n * n, n, n), dtype=complex)
    for j in range(n):
        out[j, j, j] = 1
    idx = n
    s = 1 / np.sqrt(2)
    for j in range(n):
        for k in range(j + 1, n):
            out[idx, j, k] = out[idx, k, j] = s
            out[idx + 1, j, k] = -1j * s
            out[idx + 1, k, j] = 1j * s
            idx += 2
    return out


def _coords(ops) -> np.ndarray:
    # real coordinates whose Euclidean product equals hs_inner on Hermitian input
    ops = np.asarray(ops, dtype=complex)
    flat = ops.reshape(ops.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def _check_same_dim(ops) -> int:
    shapes = {np.shape(op) for op in ops}
    if len(shapes) != 1:
        raise ValueError(f"operators have mismatched shapes: {sorted(shapes)}")
    (shape,) = shapes
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"operators must be square, got {shape}")
    return shape[0]


def real_span_dim(ops: Sequence[np.ndarray]) -> int:
    """Dimension of the real linear span, from the rank of the trace-pairing Gram matrix."""
    if len(ops) == 0:
        return 0
    _check_same_dim(ops)
    c = _coords(ops)
    ev = np.linalg.eigvalsh(c @ c.T)
    if ev[-1] <= 0:
        return 0
    return int(np.sum(ev > RANK_RTOL * ev[-1]))


def orth_complement(ops: Sequence[np.ndarray], within_traceless: bool = False, n: int | None = None) -> list[np.ndarray]:
    """Orthonormal basis of the Hermitian operators orthogonal to every element of ``ops``.

    With ``within_traceless`` the identity is added to ``ops``, so the result
    spans the traceless operators orthogonal to ``ops``. ``n`` gives the matrix
    size when ``ops`` is empty.
    """
    ops = list(ops)
    if ops:
        size = _check_same_dim(ops)
        if n is not None and n != size:
            raise ValueError(f"operators have size {size}, expected {n}")
        n = size
    elif n is None:
        raise ValueError("matrix size required for an empty operator list")
    if within_traceless:
        ops.append(np.eye(n))
    basis = hermitian_basis(n)
    if not ops:
        return list(basis)
    # coordinates of each op in the Hermitian basis (real because both are Hermitian)
    herm = np.array([as_hermitian(op) for op in ops])
    coeffs = np.einsum("aij,bji->ab", herm, basis).real
    gram = coeffs.T @ coeffs
    ev, vecs = np.linalg.eigh(gram)
    top = ev[-1] if ev.size else 0.0
    null = vecs[:, ev <= RANK_RTOL * top] if top > 0 else vecs
    return [np.einsum("a,aij->ij", null[:, j], basis) for j in range(null.shape[1])]


def commutator_norm(x, y) -> float:
    x = np.asarray(x)
    y = np.asarray(y)
    return float(np.linalg.norm(x @ y - y @ x))


def is_normal(x, tol: float = 1e-10) -> bool:
    x = np.asarray(x)
    scale = np.linalg.norm(x) ** 2
    if scale == 0:
        return True
    return commutator_norm(x, x.conj().T) <= tol * scale
