"""Dense complex linear algebra for small bipartite states.

Every rank, kernel and PSD decision goes through a Hermitian eigendecomposition
and a relative threshold ``tol * (1 + ||h||_2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


class DimensionError(ValueError):
    pass


class NumericalError(RuntimeError):
    """Raised when an eigen solve or root extraction cannot be trusted."""


def hermitian(h) -> np.ndarray:
    """Return ``(h + h^*) / 2`` as a complex array."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    return (h + h.conj().T) / 2


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``a``'s indices outer and ``b``'s inner."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def outer(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """A density matrix on C^m (x) C^n."""

    m: int
    n: int
    rho: np.ndarray

    def __post_init__(self):
        rho = hermitian(self.rho)
        if rho.shape != (self.m * self.n, self.m * self.n):
            raise DimensionError(
                f"rho has shape {rho.shape}, expected {self.m * self.n} square"
            )
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.m * self.n

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def normalized(self) -> "BipartiteState":
        return BipartiteState(self.m, self.n, self.rho / self.trace)

    def is_state(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.trace - 1) <= 1e-12 + tol and is_psd(self.rho, tol)


def product_state(x, y) -> BipartiteState:
    """Trace-one projector onto ``x (x) y``."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    v = np.kron(x, y)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("product vector is zero")
    return BipartiteState(len(x), len(y), outer(v / nrm))


def partial_transpose(s: BipartiteState) -> BipartiteState:
    """Transpose on the first tensor factor: block (i, j) <- block (j, i)."""
    blocks = s.rho.reshape(s.m, s.n, s.m, s.n)
    return BipartiteState(s.m, s.n, blocks.transpose(2, 1, 0, 3).reshape(s.dim, s.dim))


def _spectrum(h, tol):
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    h = hermitian(h)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    norm = np.max(np.abs(w)) if w.size else 0.0
    return w, v, tol * (1 + norm)


def threshold(h, tol: float = DEFAULT_TOL) -> float:
    return _spectrum(h, tol)[2]


def min_eigenvalue(h) -> float:
    return float(np.linalg.eigvalsh(hermitian(h))[0])


def is_psd(h, tol: float = DEFAULT_TOL) -> bool:
    w, _, thr = _spectrum(h, tol)
    return bool(w[0] >= -thr)


def numerical_rank(h, tol: float = DEFAULT_TOL) -> int:
    w, _, thr = _spectrum(h, tol)
    return int(np.sum(np.abs(w) > thr))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^d held as an orthonormal basis (columns)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2:
            raise DimensionError("basis must be a 2-d array of columns")
        if b.shape[1] > b.shape[0]:
            raise DimensionError("more basis vectors than the ambient dimension")
        gram = b.conj().T @ b
        if not np.allclose(gram, np.eye(b.shape[1]), atol=1e-10):
            raise ValueError("basis columns are not orthonormal")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, tol: float = 1e-10) -> "Subspace":
        """Orthonormal basis of the span of the given column vectors."""
        a = np.asarray(vectors, dtype=complex)
        if a.ndim == 1:
            a = a[:, None]
        if a.shape[1] == 0:
            return cls(np.zeros((a.shape[0], 0), dtype=complex))
        u, sv, _ = np.linalg.svd(a, full_matrices=False)
        r = int(np.sum(sv > tol * max(1.0, sv[0])))
        return cls(u[:, :r])

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(np.eye(d, dtype=complex))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def orthocomplement(self) -> "Subspace":
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        u, _, _ = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(u[:, self.dim:])

    def __contains__(self, v) -> bool:
        return subspace_contains(self, v)

    def __le__(self, other: "Subspace") -> bool:
        return subspace_leq(self, other)


def kernel(h, tol: float = DEFAULT_TOL) -> Subspace:
    w, v, thr = _spectrum(h, tol)
    return Subspace(v[:, np.abs(w) <= thr])


def range_space(h, tol: float = DEFAULT_TOL) -> Subspace:
    w, v, thr = _spectrum(h, tol)
    return Subspace(v[:, np.abs(w) > thr])


def subspace_contains(big: Subspace, v, tol: float = 1e-8) -> bool:
    """True iff ``||(I - P) v|| <= tol * ||v||`` for the projector P onto ``big``."""
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape[0] != big.ambient_dim:
        raise DimensionError(f"vector of length {v.shape[0]} vs ambient {big.ambient_dim}")
    resid = v - big.basis @ (big.basis.conj().T @ v)
    return bool(np.linalg.norm(resid) <= tol * max(np.linalg.norm(v), 1e-300))


def subspace_leq(a: Subspace, b: Subspace, tol: float = 1e-8) -> bool:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("subspaces live in different ambient spaces")
    if a.dim == 0:
        return True
    resid = a.basis - b.basis @ (b.basis.conj().T @ a.basis)
    return bool(np.linalg.norm(resid, 2) <= tol)
