"""Solutions of ``A conj(y) || y`` on the projective line CP^1.

Points of CP^1 are written ``y = (xi, 1)`` with ``xi`` in the plane, plus the
point at infinity ``(1, 0)``. For nonsingular ``A`` the finite solutions are the
common zeros of the real and imaginary parts of

    a21 |xi|^2 + a22 xi - a11 conj(xi) - a12 = 0,

each of which is a circle or a line in the ``xi``-plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CP1_TOL = 1e-10
DEGENERATE_TOL = 1e-9
PROPORTIONAL_TOL = 1e-9

J = np.array([[0, 1], [1, 0]], dtype=complex)


class SingularMatrixError(ValueError):
    pass


def canonical(v) -> np.ndarray:
    """Unit representative of ``v`` with first nonzero coordinate real >= 0."""
    v = np.asarray(v, dtype=complex).ravel()
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("zero vector has no projective class")
    v = v / nrm
    k = int(np.argmax(np.abs(v) > CP1_TOL))
    return v * np.exp(-1j * np.angle(v[k]))


@dataclass(frozen=True, eq=False)
class CP1Point:
    """A point of CP^1 stored by its canonical representative."""

    v: np.ndarray

    def __post_init__(self):
        v = canonical(self.v)
        if v.shape != (2,):
            raise ValueError("CP1 points are vectors in C^2")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_xi(cls, xi) -> "CP1Point":
        if xi is None or np.isinf(xi):
            return cls(np.array([1, 0]))
        return cls(np.array([xi, 1]))

    @property
    def xi(self) -> complex:
        """Affine coordinate ``v1 / v2``; ``inf`` for the point at infinity."""
        if abs(self.v[1]) <= CP1_TOL:
            return complex(np.inf)
        return complex(self.v[0] / self.v[1])

    @property
    def is_infinity(self) -> bool:
        return abs(self.v[1]) <= CP1_TOL

    def distance(self, other) -> float:
        """``min_phi ||a - e^{i phi} b||`` over unit representatives."""
        w = other.v if isinstance(other, CP1Point) else canonical(other)
        return projective_distance(self.v, w)

    def __eq__(self, other):
        if not isinstance(other, CP1Point):
            return NotImplemented
        return self.distance(other) <= CP1_TOL

    __hash__ = None

    def __repr__(self):
        return f"CP1Point({self.v[0]:.6g}, {self.v[1]:.6g})"


def perp(v) -> np.ndarray:
    """A vector orthogonal to ``v`` in C^2."""
    v = np.asarray(v, dtype=complex).ravel()
    return np.array([np.conj(v[1]), -np.conj(v[0])])


def projective_distance(a, b) -> float:
    """Distance between matrices up to a nonzero complex scalar."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    ip = np.vdot(b, a)
    phase = ip / abs(ip) if ip != 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def proportional(a, b, tol: float = PROPORTIONAL_TOL) -> bool:
    return projective_distance(a, b) < tol


def _check_nonsingular(a, name="A"):
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"{name} must be 2x2")
    if abs(np.linalg.det(a)) <= 1e-12 * max(np.linalg.norm(a), 1e-300) ** 2:
        raise SingularMatrixError(f"{name} is singular")
    return a


# -- solution sets ----------------------------------------------------------


@dataclass(frozen=True)
class Empty:
    count = 0
    points: tuple = ()


@dataclass(frozen=True)
class SinglePoint:
    point: CP1Point
    degenerate: bool = False
    count = 1

    @property
    def points(self):
        return (self.point,)


@dataclass(frozen=True)
class PointPair:
    points: tuple
    count = 2


@dataclass(frozen=True)
class Circle:
    """The circle ``|xi - center| = radius``."""

    center: complex
    radius: float
    count = "inf"

    def sample(self, k: int) -> np.ndarray:
        t = 2 * np.pi * np.arange(k) / k
        return self.center + self.radius * np.exp(1j * t)

    def residual(self, xi) -> np.ndarray:
        return np.abs(np.abs(np.asarray(xi) - self.center) - self.radius)


@dataclass(frozen=True)
class Line:
    """The line ``2 Re(conj(coeff) xi) + offset = 0`` (through infinity)."""

    coeff: complex
    offset: float
    count = "inf"

    def sample(self, k: int, spread: float = 3.0) -> np.ndarray:
        base = -self.offset * self.coeff / (2 * abs(self.coeff) ** 2)
        direction = 1j * self.coeff / abs(self.coeff)
        return base + direction * np.linspace(-spread, spread, k)

    def residual(self, xi) -> np.ndarray:
        xi = np.asarray(xi)
        return np.abs(2 * np.real(np.conj(self.coeff) * xi) + self.offset) / abs(self.coeff)


MobiusCircle = Circle | Line


def parallel_residual(a, y) -> float:
    """``|det [A conj(y), y]|`` normalized; zero iff ``A conj(y) || y``."""
    a = np.asarray(a, dtype=complex)
    y = canonical(y)
    z = a @ y.conj()
    return float(abs(z[0] * y[1] - z[1] * y[0]) / np.linalg.norm(a))


def _conic_rows(a) -> np.ndarray:
    """Real coefficients (|xi|^2, u, v, 1) of the real and imaginary parts."""
    a11, a12, a21, a22 = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    row = np.array([a21, a22 - a11, 1j * (a22 + a11), -a12])
    return np.vstack([row.real, row.imag])


def _generalized_circle(g, tol):
    """Zero set of ``g0 |xi|^2 + g1 u + g2 v + g3`` (g normalized)."""
    g = g / np.linalg.norm(g)
    q, b, c, d = g
    if abs(q) > tol:
        center = -(b + 1j * c) / (2 * q)
        rad2 = abs(center) ** 2 - d / q
        scale = 1 + abs(center) ** 2
        if rad2 > tol * scale:
            return Circle(complex(center), float(np.sqrt(rad2)))
        if rad2 >= -tol * scale:
            return SinglePoint(CP1Point.from_xi(center), degenerate=True)
        return Empty()
    if np.hypot(b, c) > tol:
        return Line(complex(b + 1j * c) / 2, float(d))
    return Empty()


def _circle_line_intersection(circ, line, tol):
    """Real points on ``circ`` (a conic row with nonzero |xi|^2 term) and ``line``."""
    q, b, c, d = circ / circ[0]
    lb, lc, ld = line
    nrm = np.hypot(lb, lc)
    n = np.array([lb, lc]) / nrm
    p0 = -ld / nrm * n
    t_dir = np.array([-n[1], n[0]])
    # |p0 + t dir|^2 + b (.)_u + c (.)_v + d = 0 with |dir| = 1, p0 . dir = 0
    qb = b * t_dir[0] + c * t_dir[1]
    qc = p0 @ p0 + b * p0[0] + c * p0[1] + d
    disc = qb * qb - 4 * qc
    scale = 1 + qb * qb + 4 * abs(qc)
    if disc < -tol * scale:
        return [], False
    if disc <= tol * scale:
        t = -qb / 2
        pt = p0 + t * t_dir
        return [complex(pt[0], pt[1])], True
    ts = [(-qb - np.sqrt(disc)) / 2, (-qb + np.sqrt(disc)) / 2]
    return [complex(*(p0 + t * t_dir)) for t in ts], False


def mobius_solution_set(a, tol: float = DEGENERATE_TOL):
    """Classify the solutions of ``A conj(y) || y`` in CP^1.

    Returns one of :class:`Empty`, :class:`SinglePoint`, :class:`PointPair`,
    :class:`Circle` or :class:`Line`. A tangency within ``tol`` is reported as
    a :class:`SinglePoint` with ``degenerate=True``.
    """
    a = _check_nonsingular(a)
    a = a / np.linalg.norm(a)
    rows = _conic_rows(a)
    at_infinity = abs(a[1, 0]) <= tol

    sv = np.linalg.svd(rows, compute_uv=False)
    if sv[1] <= tol * sv[0]:
        k = int(np.argmax(np.linalg.norm(rows, axis=1)))
        locus = _generalized_circle(rows[k], tol)
        if isinstance(locus, (Circle, Line)):
            return locus
        finite = list(locus.points)
        degenerate = getattr(locus, "degenerate", False)
    else:
        rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
        degenerate = False
        if np.all(np.abs(rows[:, 0]) <= tol):
            m = rows[:, 1:3]
            if abs(np.linalg.det(m)) <= tol:
                finite = []
            else:
                u, v = np.linalg.solve(m, -rows[:, 3])
                finite = [CP1Point.from_xi(complex(u, v))]
        else:
            k = int(np.argmax(np.abs(rows[:, 0])))
            circ, other = rows[k], rows[1 - k]
            line = (circ[0] * other - other[0] * circ)[1:]
            if np.linalg.norm(line[:2]) <= tol:
                finite = []
            else:
                pts, degenerate = _circle_line_intersection(circ, line, tol)
                finite = [CP1Point.from_xi(z) for z in pts]

    points = finite + ([CP1Point.from_xi(None)] if at_infinity else [])
    if len(points) == 0:
        return Empty()
    if len(points) == 1:
        return SinglePoint(points[0], degenerate=degenerate)
    if len(points) == 2:
        return PointPair(tuple(points))
    raise AssertionError(f"{len(points)} isolated solutions for a 2x2 system")


# -- the circle form [[alpha, r], [s, -conj(alpha)]] -------------------------


def _sigma(a) -> np.ndarray:
    # antilinear involution whose fixed points are the matrices [[al, r], [s, -conj(al)]]
    return np.array([[-np.conj(a[1, 1]), np.conj(a[0, 1])],
                     [np.conj(a[1, 0]), -np.conj(a[0, 0])]])


def circle_form(a, tol: float = PROPORTIONAL_TOL):
    """Return ``(alpha, r, s)`` with ``A ~ [[alpha, r], [s, -conj(alpha)]]``, or None.

    The scalar is chosen so that the matrix has unit Frobenius norm. None is
    returned when no phase puts ``A`` in that form or ``|alpha|^2 + r s <= 0``.
    """
    a = np.asarray(a, dtype=complex)
    a = a / np.linalg.norm(a)
    sa = _sigma(a)
    mu = np.vdot(a, sa)
    if np.linalg.norm(sa - mu * a) > tol or abs(abs(mu) - 1) > tol:
        return None
    b = np.sqrt(mu) * a
    alpha = complex(b[0, 0])
    r, s = float(b[0, 1].real), float(b[1, 0].real)
    if abs(alpha) ** 2 + r * s <= tol:
        return None
    # sign is free; fix it so the result is deterministic
    if s < 0 or (s == 0 and (r < 0 or (r == 0 and alpha.real < 0))):
        alpha, r, s = -alpha, -r, -s
    return alpha, r, s


def is_circle_form(a, tol: float = PROPORTIONAL_TOL) -> bool:
    return circle_form(a, tol) is not None


def circle_from_matrix(a, tol: float = PROPORTIONAL_TOL):
    """The circle or line of solutions of ``A conj(y) || y``.

    From ``s |xi|^2 - conj(alpha) xi - alpha conj(xi) - r = 0``: for ``s != 0``
    the circle about ``alpha / s`` of radius ``sqrt(|alpha|^2 + r s) / |s|``,
    otherwise the line ``2 Re(conj(alpha) xi) + r = 0``.
    """
    form = circle_form(a, tol)
    if form is None:
        raise ValueError("matrix is not of circle form")
    alpha, r, s = form
    if abs(s) > tol:
        return Circle(alpha / s, float(np.sqrt(abs(alpha) ** 2 + r * s) / abs(s)))
    return Line(alpha, r)


def matrix_from_circle(xi1, xi2, xi3) -> np.ndarray:
    """The matrix, unique up to scalar, whose solution circle passes the three points."""
    pts = [complex(x) for x in (xi1, xi2, xi3)]
    for i in range(3):
        for j in range(i):
            if abs(pts[i] - pts[j]) <= CP1_TOL * (1 + abs(pts[i])):
                raise ValueError("points must be mutually distinct")
    # unknowns (a21, a22, a11, a12)
    rows = np.array([[abs(z) ** 2, z, -np.conj(z), -1] for z in pts])
    _, sv, vh = np.linalg.svd(rows)
    null = vh[-1].conj()
    a21, a22, a11, a12 = null
    a = np.array([[a11, a12], [a21, a22]])
    form = circle_form(a, tol=1e-7)
    if form is None:
        raise ValueError("three points did not determine a circle form")
    alpha, r, s = form
    return np.array([[alpha, r], [s, -np.conj(alpha)]])
