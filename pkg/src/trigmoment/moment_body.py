"""The convex hull C^{2p} of the trigonometric moment curve as a face of the 2 (x) p PPT set.

A moment vector ``c = (c_1, ..., c_p)`` (with ``c_0 = 1`` and ``c_{-k} = conj(c_k)``)
is sent to

    rho(c) = 1/(2p) [[T, S], [S^*, T]],    T_ij = c_{i-j},  S_ij = c_{i-j+1},

which is linear in ``c`` and takes the curve point ``(w, ..., w^p)`` to the
normalized projector onto ``(1, conj(w)) (x) (1, w, ..., w^{p-1})``.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .faces import FaceDescriptor
from .linalg import (
    DEFAULT_TOL,
    BipartiteState,
    NumericalError,
    Subspace,
    numerical_rank,
    outer,
    partial_transpose,
    product_state,
    _spectrum,
)

UNIT_TOL = 1e-10
ROOT_TOL = 1e-6
MERGE_TOL = 1e-8
WEIGHT_CLIP = 1e-10
FIT_TOL = 1e-10  # moment residual accepted without trying more atoms


class ExteriorPointError(ValueError):
    pass


def as_moments(c, p: int | None = None) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.ndim != 1:
        raise ValueError("moment vector must be one-dimensional")
    if p is not None and len(c) != p:
        raise ValueError(f"expected {p} moments, got {len(c)}")
    if len(c) < 1:
        raise ValueError("need p >= 1")
    if not np.all(np.isfinite(c)):
        raise ValueError("moments must be finite")
    return c


def curve_moments(p: int, omega) -> np.ndarray:
    """``(w, w^2, ..., w^p)``."""
    return complex(omega) ** np.arange(1, p + 1)


def _check_unit(omega) -> complex:
    omega = complex(omega)
    if abs(abs(omega) - 1) > UNIT_TOL:
        raise ValueError(f"|omega| = {abs(omega)} is not 1")
    return omega


def _symbol(c) -> np.ndarray:
    """``(c_0, c_1, ..., c_p)`` with ``c_0 = 1``."""
    return np.concatenate([[1.0], c])


def toeplitz_matrix(c) -> np.ndarray:
    """The (p+1)x(p+1) Hermitian Toeplitz matrix ``T_ij = c_{i-j}``."""
    sym = _symbol(as_moments(c))
    return toeplitz(sym, sym.conj())


# -- canonical constraint pair ----------------------------------------------


@dataclass(frozen=True, eq=False)
class CanonicalPair:
    """``V_i = e_{1,i} - e_{2,i+1}``, ``W_i = e_{1,i+1} - e_{2,i}`` and their orthocomplements."""

    p: int
    Vs: tuple
    Ws: tuple
    D: Subspace
    E: Subspace

    @property
    def face(self) -> FaceDescriptor:
        return FaceDescriptor(self.D, self.E)


def canonical_pair(p: int) -> CanonicalPair:
    if p < 1:
        raise ValueError("p must be >= 1")
    Vs, Ws = [], []
    for i in range(p - 1):
        v = np.zeros((2, p), dtype=complex)
        v[0, i], v[1, i + 1] = 1, -1
        w = np.zeros((2, p), dtype=complex)
        w[0, i + 1], w[1, i] = 1, -1
        Vs.append(v)
        Ws.append(w)
    if p == 1:
        D = E = Subspace.full(2)
    else:
        D = Subspace.span(np.array([v.ravel() for v in Vs]).T).orthocomplement()
        E = Subspace.span(np.array([w.ravel() for w in Ws]).T).orthocomplement()
    return CanonicalPair(p, tuple(Vs), tuple(Ws), D, E)


def product_vector_solutions(p: int, omega) -> tuple[np.ndarray, np.ndarray]:
    """``x = (1, conj(w))`` and ``y = (1, w, ..., w^{p-1})``."""
    omega = _check_unit(omega)
    return np.array([1, np.conj(omega)]), omega ** np.arange(p)


# -- states -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MomentBodyState:
    p: int
    c: np.ndarray
    T: np.ndarray
    S: np.ndarray
    state: BipartiteState

    @property
    def rho(self) -> np.ndarray:
        return self.state.rho

    @property
    def gamma(self) -> BipartiteState:
        return partial_transpose(self.state)


def state_from_moments(c) -> MomentBodyState:
    """``rho(c)``; defined for every ``c``, PSD exactly on the hull."""
    c = as_moments(c)
    p = len(c)
    sym = _symbol(c)
    T = toeplitz(sym[:p], sym[:p].conj())
    # S_ij = c_{i-j+1}: first column c_1..c_p, first row c_1, c_0, c_{-1}, ...
    row = np.concatenate([[sym[1], sym[0]], sym[1:p - 1].conj()])[:p]
    S = toeplitz(sym[1:p + 1], row)
    rho = np.block([[T, S], [S.conj().T, T]]) / (2 * p)
    return MomentBodyState(p, c, T, S, BipartiteState(2, p, rho))


def curve_point(p: int, omega) -> MomentBodyState:
    """``P_w`` built directly as the projector onto ``x_w (x) y_w``."""
    x, y = product_vector_solutions(p, omega)
    s = product_state(x, y)
    mb = state_from_moments(curve_moments(p, omega))
    return MomentBodyState(p, mb.c, mb.T, mb.S, s)


def interior_point(p: int) -> MomentBodyState:
    """``rho_I``, the average of ``P_z`` over the (p+1)-th roots of unity z."""
    zeta = np.exp(2j * np.pi * np.arange(p + 1) / (p + 1))
    rho = sum(curve_point(p, z).rho for z in zeta) / (p + 1)
    mb = state_from_moments(np.zeros(p))
    return MomentBodyState(p, mb.c, mb.T, mb.S, BipartiteState(2, p, rho))


# -- membership -------------------------------------------------------------


class Classification(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class MembershipResult:
    """Eigenvalues and ranks are those of rho compressed to D and rho^Gamma to E."""

    classification: Classification
    min_eig: float
    min_eig_gamma: float
    rank: int
    rank_gamma: int

    @property
    def is_member(self) -> bool:
        return self.classification is not Classification.EXTERIOR


@functools.lru_cache(maxsize=None)
def _face_bases(p: int):
    cp = canonical_pair(p)
    return cp.D.basis, cp.E.basis


def membership(c, tol: float = DEFAULT_TOL) -> MembershipResult:
    mb = state_from_moments(c)
    p = mb.p
    # rho vanishes on span{V_i}; compressing to D (and rho^Gamma to E) keeps
    # PSD-ness and rank but drops the p-1 structural zero eigenvalues
    D, E = _face_bases(p)
    w, _, thr = _spectrum(D.conj().T @ mb.rho @ D, tol)
    wg, _, thrg = _spectrum(E.conj().T @ mb.gamma.rho @ E, tol)
    rank = int(np.sum(np.abs(w) > thr))
    rank_g = int(np.sum(np.abs(wg) > thrg))
    if w[0] < -thr or wg[0] < -thrg:
        cls = Classification.EXTERIOR
    elif rank == p + 1 and rank_g == p + 1:
        cls = Classification.INTERIOR
    else:
        cls = Classification.BOUNDARY
    return MembershipResult(cls, float(w[0]), float(wg[0]), rank, rank_g)


def c4_values(alpha, gamma) -> tuple[float, float, float]:
    """Left sides of ``|a| <= 1``, ``|g| <= 1``, ``2|a|^2 + |g|^2 - a^2 conj(g) - conj(a)^2 g <= 1``."""
    alpha, gamma = complex(alpha), complex(gamma)
    third = (2 * abs(alpha) ** 2 + abs(gamma) ** 2
             - 2 * (alpha ** 2 * gamma.conjugate()).real)
    return abs(alpha), abs(gamma), third


def membership_C4(alpha, gamma, tol: float = 1e-12) -> bool:
    return all(v <= 1 + tol for v in c4_values(alpha, gamma))


def toeplitz_oracle(c, tol: float = DEFAULT_TOL) -> bool:
    """PSD test of the (p+1)x(p+1) Toeplitz matrix of ``(1, c_1, ..., c_p)``."""
    w, _, thr = _spectrum(toeplitz_matrix(c), tol)
    return bool(w[0] >= -thr)


# -- atomic decompositions --------------------------------------------------


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finitely many atoms ``omega_j`` on the unit circle with weights summing to one.

    ``condition`` is the 2-norm condition number of the Vandermonde system used
    to solve for the weights (NaN when not computed).
    """

    omegas: np.ndarray
    weights: np.ndarray
    condition: float = float("nan")

    def __post_init__(self):
        om = np.atleast_1d(np.asarray(self.omegas, dtype=complex))
        wt = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if om.shape != wt.shape:
            raise ValueError("omegas and weights differ in length")
        if np.any(np.abs(np.abs(om) - 1) > UNIT_TOL):
            raise ValueError("atoms must lie on the unit circle")
        if np.any(wt < -1e-12):
            raise ValueError("negative weight")
        wt = np.clip(wt, 0, None)
        if abs(wt.sum() - 1) > 1e-10:
            raise ValueError(f"weights sum to {wt.sum()}")
        ang = np.sort(np.angle(om))
        if len(ang) > 1:
            gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
            if np.min(gaps) <= 1e-8:
                raise ValueError("atoms are not distinct")
        om.setflags(write=False)
        wt.setflags(write=False)
        object.__setattr__(self, "omegas", om)
        object.__setattr__(self, "weights", wt)

    def __len__(self):
        return len(self.omegas)

    def moments(self, p: int) -> np.ndarray:
        k = np.arange(1, p + 1)
        return (self.weights[None, :] * self.omegas[None, :] ** k[:, None]).sum(axis=1)

    def residual(self, c) -> float:
        c = as_moments(c)
        return float(np.max(np.abs(self.moments(len(c)) - c)))

    def weight_of(self, omega, tol: float = 1e-8) -> float:
        hits = np.abs(self.omegas - omega) <= tol
        return float(self.weights[hits].sum())


def _polish_roots(coef, roots):
    """Project roots to the unit circle, take one Newton step, project again."""
    poly = np.poly1d(coef)
    dpoly = poly.deriv()
    out = []
    for z in roots:
        if abs(abs(z) - 1) > ROOT_TOL:
            raise NumericalError(f"kernel polynomial root off the unit circle: |z| = {abs(z)}")
        z = z / abs(z)
        dz = dpoly(z)
        if dz != 0:
            z = z - poly(z) / dz
        out.append(z / abs(z))
    return np.array(out)


def _merge(roots):
    if len(roots) == 0:
        return roots
    ang = np.sort(np.mod(np.angle(roots), 2 * np.pi))
    keep = [ang[0]]
    for a in ang[1:]:
        if a - keep[-1] > MERGE_TOL:
            keep.append(a)
    if len(keep) > 1 and keep[0] + 2 * np.pi - keep[-1] <= MERGE_TOL:
        keep.pop()
    return np.exp(1j * np.array(keep))


def _roots_from_kernel(v) -> np.ndarray:
    # T v = 0 with T = sum w u u^*, u = (1, z, ..., z^k) gives sum conj(v_k) z^k = 0
    coef = np.conj(v)[::-1]
    nz = np.flatnonzero(np.abs(coef) > 1e-14 * np.max(np.abs(coef)))
    coef = coef[nz[0]:]
    if len(coef) < 2:
        raise NumericalError("kernel polynomial is constant")
    roots = np.roots(coef)
    return _merge(_polish_roots(coef, roots))


def _weights(omegas, c):
    """Nonnegative real weights fitting ``sum w_j omega_j^k = c_k`` for k = 0..p."""
    p = len(c)
    vand = omegas[None, :] ** np.arange(p + 1)[:, None]
    rhs = _symbol(c)
    a = np.vstack([vand.real, vand.imag])
    b = np.concatenate([rhs.real, rhs.imag])
    w, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.any(w < -WEIGHT_CLIP):
        raise NumericalError(f"negative weight {w.min():.3g} in atomic fit")
    w = np.clip(w, 0, None)
    w = w / w.sum()
    keep = w > 0
    return omegas[keep], w[keep], float(np.linalg.cond(a))


def _boundary_atoms(c, rank) -> AtomicMeasure:
    """Atoms of a point whose Toeplitz matrix has the given rank (< p+1)."""
    sym = _symbol(c)
    lead = toeplitz(sym[:rank + 1], sym[:rank + 1].conj())
    _, vecs = np.linalg.eigh(lead)
    omegas = _roots_from_kernel(vecs[:, 0])
    om, w, cond = _weights(omegas, c)
    return AtomicMeasure(om, w, cond)


def decompose(c, tol: float = DEFAULT_TOL, anchor=1.0) -> AtomicMeasure:
    """Write ``c`` as moments of at most p+1 atoms (at most p on the boundary).

    Boundary points have a unique decomposition. Interior points are decomposed
    through ``anchor``; see :func:`decompose_through`.
    """
    c = as_moments(c)
    p = len(c)
    res = membership(c, tol)
    if not res.is_member:
        raise ExteriorPointError("moment vector lies outside the moment body")
    if res.classification is Classification.INTERIOR:
        return decompose_through(c, anchor, tol)
    # near the band a truncated rank can lose up to ~tol in the moments; allow
    # more atoms (still at most p) when they fit markedly better
    best = None
    for r in range(max(res.rank, 1), p + 1):
        try:
            mu = _boundary_atoms(c, r)
        except NumericalError:
            if best is None and r == p:
                raise
            continue
        if best is None or mu.residual(c) < best.residual(c):
            best = mu
        if best.residual(c) <= FIT_TOL:
            break
    if best is None:
        raise NumericalError("no boundary decomposition found")
    return best


def anchor_weight(c, omega0) -> float:
    """``1 / (u^* T^-1 u)`` with ``u = (1, w0, ..., w0^p)``."""
    c = as_moments(c)
    u = complex(omega0) ** np.arange(len(c) + 1)
    return float(1 / np.vdot(u, np.linalg.solve(toeplitz_matrix(c), u)).real)


def decompose_through(c, omega0=1.0, tol: float = DEFAULT_TOL) -> AtomicMeasure:
    """The decomposition of an interior point that contains the atom ``omega0``.

    The anchor gets the largest weight that keeps the remainder in the body;
    the remainder is a boundary point with p atoms.
    """
    c = as_moments(c)
    p = len(c)
    omega0 = _check_unit(omega0)
    cls = membership(c, tol).classification
    if cls is Classification.EXTERIOR:
        raise ExteriorPointError("moment vector lies outside the moment body")
    if cls is not Classification.INTERIOR:
        raise ValueError("decompose_through needs an interior point")
    T = toeplitz_matrix(c)
    u = omega0 ** np.arange(p + 1)
    Tinv_u = np.linalg.solve(T, u)
    t = 1 / np.vdot(u, Tinv_u).real
    rest = (c - t * u[1:]) / (1 - t)
    # T - t u u^* annihilates T^-1 u
    omegas = _roots_from_kernel(Tinv_u)
    om, w, cond = _weights(omegas, rest)
    return AtomicMeasure(np.concatenate([[omega0], om]),
                         np.concatenate([[t], (1 - t) * w]), cond)


# -- faces of C^{2p} --------------------------------------------------------


def _check_atoms(atoms):
    atoms = np.array([_check_unit(z) for z in np.atleast_1d(atoms)])
    for i in range(len(atoms)):
        for j in range(i):
            if abs(atoms[i] - atoms[j]) <= MERGE_TOL:
                raise ValueError("duplicate atoms")
    return atoms


def face_from_atoms(p: int, atoms) -> FaceDescriptor | None:
    """``tau(D1, E1)`` spanned by the curve points at ``atoms``; None for more than p atoms."""
    atoms = _check_atoms(atoms)
    if len(atoms) > p:
        return None
    xs = [product_vector_solutions(p, z) for z in atoms]
    D1 = Subspace.span(np.array([np.kron(x, y) for x, y in xs]).T)
    E1 = Subspace.span(np.array([np.kron(x.conj(), y) for x, y in xs]).T)
    return FaceDescriptor(D1, E1)


def is_simplex(p: int, atoms, tol: float = DEFAULT_TOL) -> bool:
    """Linear independence of the ``P_w`` as matrices (real Gram matrix rank)."""
    atoms = _check_atoms(atoms)
    mats = np.array([curve_point(p, z).rho.ravel() for z in atoms])
    gram = (mats.conj() @ mats.T).real
    return numerical_rank(gram, tol) == len(atoms)


# -- real moment curve and moment surface -----------------------------------


def real_moment_curve_point(t: float) -> np.ndarray:
    """``R_{(1,-t) (x) (t,1)}``, the outer product of ``(t, 1, -t^2, -t)``."""
    t = float(t)
    return outer(np.kron([1, -t], [t, 1])).real


def _unit2(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex).ravel()
    if x.shape != (2,):
        raise ValueError("x must be a vector in C^2")
    n = np.linalg.norm(x)
    if n == 0:
        raise ValueError("zero vector")
    if abs(n - 1) > 1e-10:
        raise ValueError("x must be a unit vector")
    return x


def surface_coordinates(x) -> np.ndarray:
    """``S(x)`` flattened to R^8 as (s1, s2, Re s3, Im s3, Re s4, Im s4, Re s5, Im s5)."""
    x1, x2 = _unit2(x)
    vals = [abs(x1) ** 4, abs(x2) ** 4,
            abs(x1) ** 2 * x1 * np.conj(x2),
            abs(x2) ** 2 * np.conj(x1) * x2,
            x1 ** 2 * np.conj(x2) ** 2]
    return np.array([vals[0].real, vals[1].real,
                     vals[2].real, vals[2].imag,
                     vals[3].real, vals[3].imag,
                     vals[4].real, vals[4].imag])


def surface_coordinates_spherical(phi: float, theta: float) -> np.ndarray:
    """``S(x)`` at ``x = (cos phi, e^{-i theta} sin phi)``."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([c ** 4, s ** 4,
                     c ** 3 * s * np.cos(theta), c ** 3 * s * np.sin(theta),
                     c * s ** 3 * np.cos(theta), -c * s ** 3 * np.sin(theta),
                     c ** 2 * s ** 2 * np.cos(2 * theta), c ** 2 * s ** 2 * np.sin(2 * theta)])


def surface_state(x) -> np.ndarray:
    """``rho_x``, the projector onto ``(x1, x2) (x) (x2, x1)``."""
    x1, x2 = _unit2(x)
    return outer(np.kron([x1, x2], [x2, x1]))


def state_from_surface_point(s) -> np.ndarray:
    """The affine map ``S(x) -> rho_x`` extended to all of R^8."""
    s = np.asarray(s, dtype=float)
    a, b = s[0], s[1]
    z3, z4, z5 = s[2] + 1j * s[3], s[4] + 1j * s[5], s[6] + 1j * s[7]
    m = (1 - a - b) / 2  # |x1 x2|^2 on the unit sphere
    return np.array([
        [m, np.conj(z3), np.conj(z4), m],
        [z3, a, z5, z3],
        [z4, np.conj(z5), b, z4],
        [m, np.conj(z3), np.conj(z4), m],
    ])


def moment_surface(x) -> tuple[np.ndarray, BipartiteState]:
    return surface_coordinates(x), BipartiteState(2, 2, surface_state(x))


# -- m x n curve ------------------------------------------------------------


def curve_point_mn(m: int, n: int, omega) -> BipartiteState:
    """Projector onto ``(1, conj(w), ..., conj(w)^{m-1}) (x) (1, w, ..., w^{n-1})``."""
    if m < 2 or n < 2:
        raise ValueError("need m, n >= 2")
    omega = _check_unit(omega)
    x = np.conj(omega) ** np.arange(m)
    y = omega ** np.arange(n)
    return product_state(x, y)


def moments_from_state_mn(s: BipartiteState) -> np.ndarray:
    """Read ``(c_1, ..., c_{m+n-2})`` off the entries of a state on the m x n curve hull.

    The entry at row (0, j), column (i, 0) of ``m n rho`` carries ``c_{i+j}``.
    """
    rho = s.rho.reshape(s.m, s.n, s.m, s.n) * s.m * s.n
    out = []
    for k in range(1, s.m + s.n - 1):
        j = min(k, s.n - 1)
        out.append(rho[0, j, k - j, 0])
    return np.array(out)
