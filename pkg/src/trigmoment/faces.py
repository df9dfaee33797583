"""Faces of the two-qubit separable body.

A vector ``(a, b, c, d)`` of C^2 (x) C^2 is read as the matrix ``[[a, b], [c, d]]``,
so that ``<x (x) y, V> = <x, V conj(y)>``. The faces used here are

* ``G34(V) = tau(V^perp, C^4)`` and ``G43(W) = tau(C^4, W^perp)`` for rank-two V, W,
* ``H33(z, w) = tau((z (x) w)^perp, (conj(z) (x) w)^perp)``,
* ``G33(V, W) = G34(V) & G43(W)`` when that intersection is infinite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    BipartiteState,
    DimensionError,
    Subspace,
    partial_transpose,
    product_state,
    range_space,
    subspace_leq,
)
from .mobius import (
    DEGENERATE_TOL,
    CP1Point,
    Circle,
    Empty,
    Line,
    SinglePoint,
    _check_nonsingular,
    canonical,
    mobius_solution_set,
    perp,
    proportional,
)

ORTH_TOL = 1e-10


def vector_as_matrix(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape != (4,):
        raise DimensionError("expected a vector of C^2 (x) C^2")
    if not np.any(v):
        raise ValueError("zero vector")
    return v.reshape(2, 2)


def rank_of_vector(v, tol: float = 1e-12) -> int:
    """1 for product vectors, 2 otherwise."""
    sv = np.linalg.svd(vector_as_matrix(v), compute_uv=False)
    return 1 + int(sv[1] > tol * sv[0])


def _as_matrix(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return vector_as_matrix(v) if v.ndim == 1 else v


def _vec(p) -> np.ndarray:
    return p.v if isinstance(p, CP1Point) else canonical(p)


def _orthogonal(a, b, tol=ORTH_TOL) -> bool:
    return abs(np.vdot(canonical(a), canonical(b))) <= tol


def pure_product_state(x, y) -> BipartiteState:
    return product_state(_vec(x), _vec(y))


# -- maximal faces ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class G34:
    V: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "V", _check_nonsingular(_as_matrix(self.V), "V"))

    def descriptor(self) -> "FaceDescriptor":
        return FaceDescriptor(Subspace.span(self.V.reshape(4)).orthocomplement(),
                              Subspace.full(4))


@dataclass(frozen=True, eq=False)
class G43:
    W: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "W", _check_nonsingular(_as_matrix(self.W), "W"))

    def descriptor(self) -> "FaceDescriptor":
        return FaceDescriptor(Subspace.full(4),
                              Subspace.span(self.W.reshape(4)).orthocomplement())


@dataclass(frozen=True, eq=False)
class H33:
    z: CP1Point
    w: CP1Point

    def descriptor(self) -> "FaceDescriptor":
        z, w = _vec(self.z), _vec(self.w)
        return FaceDescriptor(Subspace.span(np.kron(z, w)).orthocomplement(),
                              Subspace.span(np.kron(z.conj(), w)).orthocomplement())


MaxFace = G34 | G43 | H33


def extreme_in_max_face(x, y, face: MaxFace, tol: float = ORTH_TOL) -> bool:
    """Whether ``P_{x (x) y}`` lies in the maximal face."""
    x, y = _vec(x), _vec(y)
    if isinstance(face, G34):
        return bool(abs(np.vdot(x, face.V @ y.conj())) <= tol)
    if isinstance(face, G43):
        return bool(abs(np.vdot(x.conj(), face.W @ y.conj())) <= tol)
    if isinstance(face, H33):
        return _orthogonal(x, _vec(face.z), tol) or _orthogonal(y, _vec(face.w), tol)
    raise TypeError(f"not a maximal face: {face!r}")


def unique_partner(V, z) -> CP1Point:
    """The ``w`` with ``z perp V conj(w)``; ``P_{z (x) w}`` is then in ``G34(V)``."""
    V = _check_nonsingular(_as_matrix(V), "V")
    return CP1Point(perp(V.conj().T @ _vec(z)).conj())


def _partner_of_y(V, ybar) -> CP1Point:
    # x perp V conj(y)
    return CP1Point(perp(V @ ybar))


# -- tau(D, E) --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FaceDescriptor:
    """The face ``tau(D, E)`` of states with range in D and partial-transpose range in E."""

    D: Subspace
    E: Subspace

    def __post_init__(self):
        if self.D.ambient_dim != self.E.ambient_dim:
            raise DimensionError("D and E must share the ambient space")

    @property
    def dims(self) -> tuple[int, int]:
        return self.D.dim, self.E.dim

    def contains(self, s: BipartiteState, tol: float = DEFAULT_TOL) -> bool:
        return face_membership(s, self, tol)

    def __le__(self, other: "FaceDescriptor") -> bool:
        return subspace_leq(self.D, other.D) and subspace_leq(self.E, other.E)

    def __eq__(self, other):
        if not isinstance(other, FaceDescriptor):
            return NotImplemented
        return self <= other and other <= self

    __hash__ = None


def face_membership(s: BipartiteState, f: FaceDescriptor, tol: float = DEFAULT_TOL) -> bool:
    if s.dim != f.D.ambient_dim:
        raise DimensionError(f"state of dim {s.dim} vs face in C^{f.D.ambient_dim}")
    return (subspace_leq(range_space(s.rho, tol), f.D)
            and subspace_leq(range_space(partial_transpose(s).rho, tol), f.E))


def conjugate_map(s: BipartiteState, V, W) -> BipartiteState:
    """``rho -> (V^* (x) W^*) rho (V (x) W)``, renormalized to trace one."""
    V = _check_nonsingular(V, "V")
    W = _check_nonsingular(W, "W")
    k = np.kron(V, W)
    return BipartiteState(s.m, s.n, k.conj().T @ s.rho @ k).normalized()


# -- intersections of maximal faces ----------------------------------------


@dataclass(frozen=True, eq=False)
class ExtremePoint:
    x: CP1Point
    y: CP1Point

    @property
    def state(self) -> BipartiteState:
        return pure_product_state(self.x, self.y)


@dataclass(frozen=True, eq=False)
class G33Face:
    """The face ``G34(V) & G43(W)`` keyed by ``A = conj(W)^-1 V`` up to scalar.

    Two such faces compare equal when their keys agree. Extreme points are
    ``P_{x (x) y}`` with ``A conj(y) || y`` and ``x perp V conj(y)``; the
    congruence ``x -> W^T x`` carries them onto the extreme points of
    ``G33(A, I)``.
    """

    A: np.ndarray
    circle: Circle | Line
    V: np.ndarray | None = None
    W: np.ndarray | None = None

    def __post_init__(self):
        a = np.asarray(self.A, dtype=complex)
        if self.V is None:
            object.__setattr__(self, "V", a.copy())
            object.__setattr__(self, "W", np.eye(2, dtype=complex))
        a = a / np.linalg.norm(a)
        k = int(np.argmax(np.abs(a.ravel()) > 1e-8))
        a = a * np.exp(-1j * np.angle(a.ravel()[k]))
        a.setflags(write=False)
        object.__setattr__(self, "A", a)

    def __eq__(self, other):
        if not isinstance(other, G33Face):
            return NotImplemented
        return proportional(self.A, other.A)

    __hash__ = None

    def canonical(self) -> "G33Face":
        """``G33(A, I)``."""
        return G33Face(self.A, self.circle)

    def extreme_point(self, xi) -> ExtremePoint:
        """Extreme point over the solution ``y = (xi, 1)`` of ``A conj(y) || y``."""
        y = CP1Point.from_xi(xi)
        return ExtremePoint(_partner_of_y(self.V, y.v.conj()), y)

    def descriptor(self) -> FaceDescriptor:
        return FaceDescriptor(Subspace.span(self.V.reshape(4)).orthocomplement(),
                              Subspace.span(self.W.reshape(4)).orthocomplement())


@dataclass(frozen=True, eq=False)
class Intersection:
    """Result of intersecting two maximal faces.

    ``kind`` is one of ``"empty"``, ``"point"``, ``"segment"``, ``"pair"`` or
    ``"face"``. A segment and a pair both carry two extreme points; a segment is
    the full edge between them.
    """

    kind: str
    points: tuple = ()
    face: G33Face | None = None
    degenerate: bool = False


def _distinct_nonsingular(V, W):
    V = _check_nonsingular(_as_matrix(V), "V")
    W = _check_nonsingular(_as_matrix(W), "W")
    if proportional(V, W):
        raise ValueError("V and W are proportional")
    return V, W


def intersect_G34_G34(V, W, tol: float = DEGENERATE_TOL) -> Intersection:
    """``G34(V) & G34(W)``: one extreme point or an edge.

    Uses ``M = W^-1 V = [[a, b], [c, d]]``; extreme points ``P_{x (x) y}`` have
    ``M conj(y) || conj(y)`` and ``x perp V conj(y)``. The intersection is a
    single point iff ``(b, c) != 0`` and ``(a - d)^2 + 4 b c = 0``.
    """
    V, W = _distinct_nonsingular(V, W)
    M = np.linalg.solve(W, V)
    M = M / np.linalg.norm(M)
    (a, b), (c, d) = M
    disc = (a - d) ** 2 + 4 * b * c
    small = lambda z: abs(z) <= tol

    if small(b) and small(c):
        ybars = [np.array([1, 0]), np.array([0, 1])]
        single = False
    elif small(b):
        ybars = [np.array([0, 1])]
        if not small(a - d):
            # M (1, xi) || (1, xi) gives c + d xi = a xi
            ybars.append(np.array([1, c / (a - d)]))
        single = len(ybars) == 1
    elif small(c):
        ybars = [np.array([1, 0])]
        if not small(a - d):
            ybars.append(np.array([b / (d - a), 1]))
        single = len(ybars) == 1
    else:
        # ybar = (1, xi) with b xi^2 + (a - d) xi - c = 0
        if small(disc):
            roots = [-(a - d) / (2 * b)]
        else:
            sq = np.sqrt(disc)
            roots = [(-(a - d) - sq) / (2 * b), (-(a - d) + sq) / (2 * b)]
        ybars = [np.array([1, xi]) for xi in roots]
        single = len(ybars) == 1

    points = tuple(ExtremePoint(_partner_of_y(V, yb), CP1Point(np.conj(yb)))
                   for yb in ybars)
    if single:
        return Intersection("point", points, degenerate=bool(disc != 0))
    return Intersection("segment", points)


def intersect_G34_G43(V, W, tol: float = DEGENERATE_TOL) -> Intersection:
    """``G34(V) & G43(W)``, driven by ``A = conj(W)^-1 V`` and ``A conj(y) || y``."""
    V, W = _distinct_nonsingular(V, W)
    A = np.linalg.solve(W.conj(), V)
    sol = mobius_solution_set(A, tol)
    if isinstance(sol, (Circle, Line)):
        return Intersection("face", face=G33Face(A, sol, V, W))
    points = tuple(ExtremePoint(_partner_of_y(V, y.v.conj()), y) for y in sol.points)
    if isinstance(sol, Empty):
        return Intersection("empty")
    if isinstance(sol, SinglePoint):
        return Intersection("point", points, degenerate=sol.degenerate)
    return Intersection("pair", points)
