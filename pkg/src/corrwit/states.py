"""State families and seeded samplers.

Randomness comes from ``numpy.random.default_rng`` (PCG64) seeded with a
64-bit unsigned integer, so a given seed reproduces the same matrices on any
platform running the same numpy build.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .linalg import as_hermitian, local_dim, min_eigenvalue

__all__ = [
    "DensityMatrix",
    "Direction",
    "make_rng",
    "partial_trace",
    "canonical_max_entangled",
    "max_entangled",
    "isotropic_boundary_state",
    "flip_operator",
    "random_unitary",
    "random_direction",
    "random_density_full_rank",
    "random_weights",
    "sample_cq",
    "sample_qc",
    "sample_cc",
    "sample_product",
    "product_state",
    "PSD_TOL",
    "TRACE_TOL",
]

PSD_TOL = 1e-10
TRACE_TOL = 1e-12
MAX_ENT_TOL = 1e-10
UNITARY_TOL = 1e-12
WEIGHT_FLOOR = 1e-3


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive semidefinite unit-trace operator; ``d`` is the local dimension (``None`` for a single system)."""

    op: np.ndarray = field(repr=False)
    d: int | None = None

    def __post_init__(self):
        op = as_hermitian(self.op)
        if self.d is not None:
            local_dim(op, self.d)
        tr = np.trace(op).real
        if abs(tr - 1) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} differs from 1")
        lo = min_eigenvalue(op)
        if lo < -PSD_TOL:
            raise ValueError(f"not positive semidefinite (min eigenvalue {lo:.3e})")
        op.setflags(write=False)
        object.__setattr__(self, "op", op)

    def __array__(self, dtype=None, copy=None):
        return self.op if dtype is None else self.op.astype(dtype)

    @property
    def dim(self) -> int:
        return self.op.shape[0]


@dataclass(frozen=True, eq=False)
class Direction:
    """Nonzero traceless Hermitian operator, stored with unit Frobenius norm."""

    op: np.ndarray = field(repr=False)
    d: int | None = None

    def __post_init__(self):
        op = as_hermitian(self.op)
        if self.d is not None:
            local_dim(op, self.d)
        norm = np.linalg.norm(op)
        if norm == 0:
            raise ValueError("direction must be nonzero")
        if abs(np.trace(op)) > TRACE_TOL * norm:
            raise ValueError(f"direction is not traceless (trace {np.trace(op):.3e})")
        op = op / norm
        op.setflags(write=False)
        object.__setattr__(self, "op", op)

    @classmethod
    def from_operator(cls, x, d: int | None = None) -> "Direction":
        """Project onto the traceless part first, then normalize."""
        x = as_hermitian(x)
        n = x.shape[0]
        return cls(x - np.trace(x).real / n * np.eye(n), d)

    def __array__(self, dtype=None, copy=None):
        return self.op if dtype is None else self.op.astype(dtype)


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def partial_trace(x, d: int | None = None, keep: int = 0) -> np.ndarray:
    """Reduced operator on factor ``keep`` (0 = first, 1 = second)."""
    d = local_dim(x, d)
    t = np.asarray(x).reshape(d, d, d, d)
    if keep == 0:
        return np.einsum("ikjk->ij", t)
    if keep == 1:
        return np.einsum("ikil->kl", t)
    raise ValueError("keep must be 0 or 1")


def canonical_max_entangled(d: int) -> np.ndarray:
    psi = np.zeros(d * d, dtype=complex)
    psi[[j * d + j for j in range(d)]] = 1 / np.sqrt(d)
    return psi


def _check_unitary(u, name: str) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    err = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if err > UNITARY_TOL:
        raise ValueError(f"{name} is not unitary (deviation {err:.3e})")
    return u


def max_entangled(U, V, d: int | None = None) -> np.ndarray:
    """The maximally entangled vector ``(U (x) V)|psi_0>``."""
    U = _check_unitary(U, "U")
    V = _check_unitary(V, "V")
    d = U.shape[0] if d is None else d
    if U.shape != (d, d) or V.shape != (d, d):
        raise ValueError(f"unitaries must be {d}x{d}")
    return np.kron(U, V) @ canonical_max_entangled(d)


def isotropic_boundary_state(psi, d: int | None = None) -> DensityMatrix:
    """Isotropic state with weight ``1/(d+1)`` on ``|psi><psi|``, the edge of the separable ones."""
    psi = np.asarray(psi, dtype=complex)
    if d is None:
        d = isqrt(psi.size)
    proj = np.outer(psi, psi.conj())
    for keep in (0, 1):
        err = np.abs(partial_trace(proj, d, keep) - np.eye(d) / d).max()
        if err > MAX_ENT_TOL:
            raise ValueError(f"vector is not maximally entangled (reduced-state error {err:.3e})")
    return DensityMatrix(proj / (d + 1) + np.eye(d * d) / (d * (d + 1)), d)


def flip_operator(d: int) -> np.ndarray:
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for k in range(d):
            f[k * d + i, i * d + k] = 1
    return f


def random_unitary(d: int, seed) -> np.ndarray:
    """Unitary from the QR decomposition of a complex Gaussian matrix, with phases fixed."""
    rng = make_rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_direction(d: int, seed) -> Direction:
    """Traceless unit-norm Hermitian from the Gaussian unitary ensemble on C^d (x) C^d."""
    rng = make_rng(seed)
    n = d * d
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (g + g.conj().T) / 2
    h -= np.trace(h).real / n * np.eye(n)
    return Direction(h, d)


def random_density_full_rank(dim: int, seed, d: int | None = None) -> DensityMatrix:
    """Ginibre state on ``dim`` levels, mixed with ``I/dim`` when needed so every eigenvalue is >= 1e-3/dim.

    Pass ``d`` to tag the result as bipartite (``dim == d*d``).
    """
    rng = make_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    floor = 1e-3 / dim
    lo = min_eigenvalue(rho)
    if lo < floor:
        p = (floor - lo) / (1 / dim - lo)
        rho = (1 - p) * rho + p * np.eye(dim) / dim
    rho /= np.trace(rho).real
    return DensityMatrix(rho, d)


def random_weights(n: int, seed, floor: float = WEIGHT_FLOOR) -> np.ndarray:
    """Flat-Dirichlet probability vector with every entry at least ``floor``."""
    rng = make_rng(seed)
    w = rng.dirichlet(np.ones(n))
    return floor + (1 - n * floor) * w


def _cq_from_parts(basis, weights, etas) -> np.ndarray:
    d = basis.shape[0]
    rho = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        phi = basis[:, i]
        rho += weights[i] * np.kron(np.outer(phi, phi.conj()), np.asarray(etas[i]))
    return rho


def sample_cq(d: int, seed, etas=None) -> DensityMatrix:
    """``sum_i c_i |phi_i><phi_i| (x) eta_i`` with random basis, weights and full-rank ``eta_i``.

    ``etas`` overrides the second-factor states.
    """
    rng = make_rng(seed)
    basis = random_unitary(d, rng)
    weights = random_weights(d, rng)
    if etas is None:
        etas = [random_density_full_rank(d, rng).op for _ in range(d)]
    return DensityMatrix(_cq_from_parts(basis, weights, etas), d)


def sample_qc(d: int, seed, sigmas=None) -> DensityMatrix:
    """Mirror of :func:`sample_cq` with the classical register on the second factor."""
    f = flip_operator(d)
    cq = sample_cq(d, seed, etas=sigmas)
    return DensityMatrix(f @ cq.op @ f, d)


def sample_cc(d: int, seed) -> DensityMatrix:
    """``sum_ij c_ij |phi_i><phi_i| (x) |chi_j><chi_j|`` for random bases and weights."""
    rng = make_rng(seed)
    u = random_unitary(d, rng)
    v = random_unitary(d, rng)
    weights = random_weights(d * d, rng).reshape(d, d)
    rho = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        p = np.outer(u[:, i], u[:, i].conj())
        for j in range(d):
            rho += weights[i, j] * np.kron(p, np.outer(v[:, j], v[:, j].conj()))
    return DensityMatrix(rho, d)


def product_state(sigma, eta) -> DensityMatrix:
    sigma = np.asarray(sigma)
    return DensityMatrix(np.kron(sigma, np.asarray(eta)), sigma.shape[0])


def sample_product(d: int, seed) -> DensityMatrix:
    rng = make_rng(seed)
    return product_state(random_density_full_rank(d, rng).op, random_density_full_rank(d, rng).op)
