import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from trigmoment.faces import face_membership
from trigmoment.linalg import (
    BipartiteState,
    NumericalError,
    numerical_rank,
    partial_transpose,
)
from trigmoment.moment_body import (
    AtomicMeasure,
    Classification,
    ExteriorPointError,
    anchor_weight,
    c4_values,
    canonical_pair,
    curve_moments,
    curve_point,
    curve_point_mn,
    decompose,
    decompose_through,
    face_from_atoms,
    interior_point,
    is_simplex,
    membership,
    membership_C4,
    moment_surface,
    moments_from_state_mn,
    product_vector_solutions,
    real_moment_curve_point,
    state_from_moments,
    state_from_surface_point,
    surface_coordinates,
    surface_coordinates_spherical,
    toeplitz_oracle,
)

from conftest import random_complex, random_measure, random_unit


def displayed_blocks(p, w):
    """A_ij = w^(i-j), B_ij = w^(i-j+1), negative powers read as conjugates."""
    k = np.arange(p)[:, None] - np.arange(p)[None, :]
    power = lambda e: np.where(e >= 0, w ** np.abs(e), np.conj(w) ** np.abs(e))
    return power(k), power(k + 1)


def rho_4x4(a, g):
    ac, gc = np.conj(a), np.conj(g)
    rho = np.array([[1, ac, a, 1], [a, 1, g, a], [ac, gc, 1, ac], [1, ac, a, 1]]) / 4
    gam = np.array([[1, ac, ac, gc], [a, 1, 1, ac], [a, 1, 1, ac], [g, a, a, 1]]) / 4
    return rho, gam


# -- canonical pair and curve ------------------------------------------------


def test_canonical_pair_p2():
    cp = canonical_pair(2)
    assert np.array_equal(cp.Vs[0].ravel(), [1, 0, 0, -1])
    assert np.array_equal(cp.Ws[0].ravel(), [0, 1, -1, 0])


def test_canonical_pair_p1_and_dims():
    cp = canonical_pair(1)
    assert cp.Vs == () and cp.D.dim == cp.E.dim == 2
    for p in range(2, 7):
        cp = canonical_pair(p)
        stacked = np.array([v.ravel() for v in cp.Vs])
        assert 2 * p - np.linalg.matrix_rank(stacked) == p + 1
        assert cp.D.dim == cp.E.dim == p + 1
    with pytest.raises(ValueError):
        canonical_pair(0)


def test_product_vector_solutions(rng):
    x, y = product_vector_solutions(4, 1)
    assert np.array_equal(x, [1, 1]) and np.array_equal(y, np.ones(4))
    x, y = product_vector_solutions(3, 1j)
    assert np.allclose(y, [1, 1j, -1])
    for p in (2, 3, 5):
        cp = canonical_pair(p)
        for w in np.exp(2j * np.pi * rng.random(50)):
            x, y = product_vector_solutions(p, w)
            for V, W in zip(cp.Vs, cp.Ws):
                assert abs(np.vdot(V.conj().T @ x, y.conj())) <= 1e-12  # V^* x perp conj(y)
                assert abs(np.vdot(x, W.conj() @ y)) <= 1e-12  # x perp conj(W) y
    with pytest.raises(ValueError):
        product_vector_solutions(2, 1.1)


def test_curve_point_blocks(rng):
    for p in range(1, 6):
        for w in np.exp(2j * np.pi * rng.random(20)):
            A, B = displayed_blocks(p, w)
            want = np.block([[A, B], [B.conj().T, A]]) / (2 * p)
            P = curve_point(p, w)
            assert np.max(np.abs(P.rho - want)) <= 1e-12
            assert np.max(np.abs(state_from_moments(curve_moments(p, w)).rho - want)) <= 1e-12
            assert numerical_rank(P.rho) == numerical_rank(P.gamma.rho) == 1


def test_curve_point_p2_is_rho_alpha_gamma(rng):
    for w in np.exp(2j * np.pi * rng.random(10)):
        assert np.allclose(curve_point(2, w).rho, rho_4x4(w, w * w)[0], atol=1e-14)


def test_averaging_over_roots_of_unity(rng):
    for p in range(1, 6):
        zeta = np.exp(2j * np.pi * np.arange(p + 1) / (p + 1))
        base = sum(curve_point(p, z).rho for z in zeta)
        for w in np.exp(2j * np.pi * rng.random(5)):
            rot = sum(curve_point(p, w * z).rho for z in zeta)
            assert np.max(np.abs(rot - base)) <= 1e-12


def test_interior_point_normalization():
    # the average of the P_zeta is trace one and equals state_from_moments(0)
    for p in (2, 3, 4):
        Jm = np.diag(np.ones(p - 1), 1)
        want = np.block([[np.eye(p), Jm], [Jm.T, np.eye(p)]]) / (2 * p)
        got = interior_point(p).rho
        assert np.max(np.abs(got - want)) <= 1e-12
        assert np.max(np.abs(state_from_moments(np.zeros(p)).rho - want)) <= 1e-12
        assert np.trace(got).real == pytest.approx(1)


def test_state_from_moments_p2_matches_4x4(rng):
    for _ in range(20):
        a, g = random_complex(rng, 2)
        rho, gam = rho_4x4(a, g)
        mb = state_from_moments([a, g])
        assert np.allclose(mb.rho, rho, atol=1e-15)
        assert np.allclose(mb.gamma.rho, gam, atol=1e-15)


def test_state_from_moments_linear_and_injective(rng):
    p = 4
    c1, c2 = random_complex(rng, p), random_complex(rng, p)
    r0 = state_from_moments(np.zeros(p)).rho
    lhs = state_from_moments(0.3 * c1 + 0.7 * c2).rho
    assert np.allclose(lhs, 0.3 * state_from_moments(c1).rho + 0.7 * state_from_moments(c2).rho)
    # injective: the affine part has full rank 2p over the reals
    cols = []
    for k in range(p):
        for unit in (1, 1j):
            e = np.zeros(p, complex)
            e[k] = unit
            d = state_from_moments(e).rho - r0
            cols.append(np.concatenate([d.real.ravel(), d.imag.ravel()]))
    assert np.linalg.matrix_rank(np.array(cols)) == 2 * p


def test_kernel_containment(rng):
    for p in range(2, 6):
        cp = canonical_pair(p)
        for _ in range(10):
            mb = state_from_moments(random_complex(rng, p))
            for V, W in zip(cp.Vs, cp.Ws):
                assert np.linalg.norm(mb.rho @ V.ravel()) <= 1e-14
                assert np.linalg.norm(mb.gamma.rho @ W.ravel()) <= 1e-14


def test_hull_states_lie_in_face(rng):
    for p in (2, 3, 4):
        face = canonical_pair(p).face
        for k in (1, p, 2 * p + 1):
            _, _, c = random_measure(rng, p, k)
            assert face_membership(state_from_moments(c).state, face, tol=1e-8)


# -- membership --------------------------------------------------------------


def test_membership_examples(rng):
    for p in range(1, 6):
        r = membership(np.zeros(p))
        assert r.classification is Classification.INTERIOR
        assert r.rank == r.rank_gamma == p + 1
        w = np.exp(2j * np.pi * rng.random())
        r = membership(curve_moments(p, w))
        assert r.classification is Classification.BOUNDARY and r.rank == r.rank_gamma == 1
        r = membership(1.05 ** np.arange(1, p + 1))
        assert r.classification is Classification.EXTERIOR and r.min_eig < 0
        assert not r.is_member


def test_c4_examples():
    assert membership_C4(0, 0)
    assert c4_values(0, 1)[2] == 1 and membership_C4(0, 1)
    assert c4_values(1, -1)[2] == 5 and not membership_C4(1, -1)
    assert membership((1, -1)).classification is Classification.EXTERIOR


def test_c4_agrees_with_eigenvalues(rng):
    n, bad = 0, 0
    for _ in range(3000):
        a, g = np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2))
        r = membership((a, g))
        if abs(min(r.min_eig, r.min_eig_gamma)) <= 1e-8:
            continue
        n += 1
        bad += membership_C4(a, g) != r.is_member
    assert bad == 0 and n > 2500


def test_toeplitz_oracle_examples(rng):
    assert toeplitz_oracle(np.zeros(3))
    w = np.exp(1j * rng.random())
    assert toeplitz_oracle(curve_moments(4, w))
    from trigmoment.moment_body import toeplitz_matrix
    assert numerical_rank(toeplitz_matrix(curve_moments(4, w))) == 1
    assert not toeplitz_oracle(1.05 * curve_moments(4, w))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.floats(0.5, 1.3))
def test_toeplitz_oracle_equivalence(seed, p, scale):
    rng = np.random.default_rng(seed)
    _, _, c = random_measure(rng, p, int(rng.integers(1, 2 * p + 2)))
    c = scale * c
    r = membership(c)
    if abs(min(r.min_eig, r.min_eig_gamma)) <= 1e-8:
        return
    assert r.is_member == toeplitz_oracle(c)


def test_hull_closure(rng):
    for p in range(2, 6):
        for _ in range(20):
            for k in (p, p + 1, 2 * p + 1):
                _, _, c = random_measure(rng, p, k)
                r = membership(c)
                assert r.is_member
                if k <= p:
                    assert r.classification is Classification.BOUNDARY
        # generic: well-separated atoms, weights bounded away from zero
        om = np.exp(2j * np.pi * (np.arange(p + 1) + 0.3 * rng.random(p + 1)) / (p + 1))
        w = 0.5 / (p + 1) + 0.5 * rng.dirichlet(np.ones(p + 1))
        r = membership(AtomicMeasure(om, w).moments(p))
        assert r.classification is Classification.INTERIOR


def test_edge_property_p2(rng):
    for _ in range(20):
        w1, w2 = np.exp(2j * np.pi * rng.random(2))
        for t in (0.1, 0.5, 0.9):
            c = t * curve_moments(2, w1) + (1 - t) * curve_moments(2, w2)
            assert membership(c).classification is Classification.BOUNDARY


def test_curve_points_are_extreme(rng):
    # LP: is c(w) a convex combination of other curve points?
    for p in (2, 3, 4):
        for _ in range(10):
            w0 = np.exp(2j * np.pi * rng.random())
            others = np.exp(2j * np.pi * rng.random(2 * p + 1))
            cols = np.array([curve_moments(p, z) for z in others]).T
            A = np.vstack([cols.real, cols.imag, np.ones(len(others))])
            target = curve_moments(p, w0)
            b = np.concatenate([target.real, target.imag, [1]])
            res = linprog(np.zeros(len(others)), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
            assert res.status == 2


# -- decomposition -----------------------------------------------------------


def test_decompose_examples(rng):
    w = np.exp(1j * rng.random())
    mu = decompose(curve_moments(3, w))
    assert len(mu) == 1 and mu.omegas[0] == pytest.approx(w) and mu.weights[0] == pytest.approx(1)

    mu = decompose([0, 1])
    order = np.argsort(mu.omegas.real)
    assert np.allclose(mu.omegas[order], [-1, 1], atol=1e-12)
    assert np.allclose(mu.weights, 0.5, atol=1e-12)

    for p in range(1, 6):
        mu = decompose(np.zeros(p))
        assert len(mu) == p + 1
        assert np.allclose(np.sort(np.mod(np.angle(mu.omegas), 2 * np.pi)),
                           2 * np.pi * np.arange(p + 1) / (p + 1), atol=1e-10)
        assert np.allclose(mu.weights, 1 / (p + 1), atol=1e-12)


def test_decompose_rejects_exterior():
    with pytest.raises(ExteriorPointError):
        decompose(1.05 ** np.arange(1, 3))


def test_decompose_round_trip(rng):
    for p in range(2, 6):
        for k in range(1, 2 * p + 2):
            om, w, c = random_measure(rng, p, k)
            try:
                mu = decompose(c)
            except NumericalError:
                pytest.fail("decomposition failed")
            assert mu.residual(c) <= 1e-8
            assert len(mu) <= (p if k <= p else p + 1)
            assert np.isfinite(mu.condition)
            if k <= p:  # boundary decomposition is unique
                assert len(mu) == k
                for z, wt in zip(om, w):
                    assert mu.weight_of(z, tol=1e-6) == pytest.approx(wt, abs=1e-6)


def test_decompose_through_examples(rng):
    for p in (2, 3):
        mu = decompose_through(np.zeros(p), 1.0)
        assert mu.weight_of(1.0) == pytest.approx(1 / (p + 1), abs=1e-12)
        zeta = np.exp(2j * np.pi * np.arange(1, p + 1) / (p + 1))
        for z in zeta:
            assert mu.weight_of(z) == pytest.approx(1 / (p + 1), abs=1e-10)
    for p in (2, 3, 4):
        w0 = np.exp(2j * np.pi * rng.random())
        mu = decompose_through(np.zeros(p), w0)
        for z in w0 * np.exp(2j * np.pi * np.arange(p + 1) / (p + 1)):
            assert mu.weight_of(z) == pytest.approx(1 / (p + 1), abs=1e-10)


def test_decompose_through_anchor_weight_and_determinism(rng):
    for p in range(2, 6):
        _, _, c = random_measure(rng, p, p + 1)
        for w0 in np.exp(2j * np.pi * rng.random(3)):
            mu = decompose_through(c, w0)
            assert len(mu) <= p + 1
            assert mu.residual(c) <= 1e-8
            assert mu.omegas[0] == w0
            assert abs(mu.weights[0] - anchor_weight(c, w0)) <= 1e-10
            again = decompose_through(c, w0)
            assert np.allclose(mu.omegas, again.omegas, atol=1e-8)
            assert np.allclose(mu.weights, again.weights, atol=1e-8)


def test_decompose_through_rejects_boundary():
    with pytest.raises(ValueError):
        decompose_through([0, 1], 1.0)


def test_atomic_measure_validation():
    with pytest.raises(ValueError):
        AtomicMeasure([1.1], [1.0])
    with pytest.raises(ValueError):
        AtomicMeasure([1, 1j], [0.7, 0.7])
    with pytest.raises(ValueError):
        AtomicMeasure([1, 1], [0.5, 0.5])
    mu = AtomicMeasure([1, -1], [0.5, 0.5])
    assert np.allclose(mu.moments(2), [0, 1])


# -- faces -------------------------------------------------------------------


def test_face_from_atoms_examples(rng):
    f = face_from_atoms(3, [1j])
    assert f.dims == (1, 1)
    atoms = np.exp(2j * np.pi * np.array([0.1, 0.4, 0.8]))
    f = face_from_atoms(3, atoms)
    assert f.dims == (3, 3)
    for _ in range(10):
        w = rng.dirichlet(np.ones(3))
        rho = sum(wi * curve_point(3, z).rho for wi, z in zip(w, atoms))
        assert face_membership(BipartiteState(2, 3, rho), f)
    assert not face_membership(curve_point(3, np.exp(0.3j)).state, f)
    assert face_from_atoms(2, [1, 1j, -1]) is None
    with pytest.raises(ValueError):
        face_from_atoms(3, [1, 1])


def test_face_lattice_ordering(rng):
    p = 3
    pool = np.exp(2j * np.pi * rng.random(6))
    for _ in range(40):
        a = set(rng.choice(6, size=rng.integers(1, p + 1), replace=False).tolist())
        b = set(rng.choice(6, size=rng.integers(1, p + 1), replace=False).tolist())
        if rng.random() < 0.5:
            b = a | set(list(b)[: p - len(a)])
        fa, fb = face_from_atoms(p, pool[sorted(a)]), face_from_atoms(p, pool[sorted(b)])
        assert (fa <= fb) == (a <= b)


def test_is_simplex_examples(rng):
    for p in (1, 2, 4):
        assert is_simplex(p, np.exp(2j * np.pi * rng.random(2)))
    assert is_simplex(2, np.exp(2j * np.pi * np.array([0.0, 0.15, 0.4, 0.6, 0.85])))
    assert not is_simplex(2, np.exp(2j * np.pi * rng.random(6)))


# -- real moment curve and moment surface -----------------------------------


def test_real_moment_curve_point():
    r = real_moment_curve_point(0)
    want = np.zeros((4, 4))
    want[1, 1] = 1
    assert np.array_equal(r, want)
    r = real_moment_curve_point(1)
    v = np.array([1, 1, -1, -1])
    assert np.array_equal(r, np.outer(v, v))
    for t in (-2.0, 0.3, 1.7):
        v = np.array([t, 1, -t ** 2, -t])
        assert np.allclose(real_moment_curve_point(t), np.outer(v, v))
        assert numerical_rank(real_moment_curve_point(t)) == 1


def test_real_moment_curve_lies_in_face_of_identity_pair():
    from trigmoment.faces import G34, G43, extreme_in_max_face
    for t in np.linspace(-3, 3, 13):
        x, y = np.array([1, -t]), np.array([t, 1])
        assert extreme_in_max_face(x, y, G34(np.eye(2)))
        assert extreme_in_max_face(x, y, G43(np.eye(2)))


def test_moment_surface_examples():
    S, s = moment_surface([1, 0])
    assert np.array_equal(S, [1, 0, 0, 0, 0, 0, 0, 0])
    want = np.zeros((4, 4))
    want[1, 1] = 1  # e1 (x) e2
    assert np.allclose(s.rho, want)
    h = np.array([1, 1]) / np.sqrt(2)
    want = [0.25, 0.25, 0.25, 0, 0.25, 0, 0.25, 0]
    assert np.allclose(surface_coordinates(h), want)
    assert np.allclose(surface_coordinates_spherical(np.pi / 4, 0), want)
    with pytest.raises(ValueError):
        moment_surface([0, 0])


def test_moment_surface_spherical_and_phase(rng):
    for _ in range(100):
        phi, theta = rng.random() * np.pi / 2, rng.random() * 2 * np.pi
        x = np.array([np.cos(phi), np.exp(-1j * theta) * np.sin(phi)])
        assert np.allclose(surface_coordinates(x), surface_coordinates_spherical(phi, theta), atol=1e-14)
        assert np.allclose(surface_coordinates(np.exp(1j * rng.random() * 7) * x), surface_coordinates(x))
        S, s = moment_surface(x)
        assert np.trace(s.rho).real == pytest.approx(1) and numerical_rank(s.rho) == 1
        assert np.allclose(state_from_surface_point(S), s.rho, atol=1e-14)


def test_surface_map_is_affine(rng):
    xs = [random_unit(rng, 2) for _ in range(3)]
    S = [surface_coordinates(x) for x in xs]
    w = rng.dirichlet(np.ones(3))
    mix = sum(wi * si for wi, si in zip(w, S))
    assert np.allclose(state_from_surface_point(mix),
                       sum(wi * state_from_surface_point(si) for wi, si in zip(w, S)))


def test_surface_circles_are_four_dimensional(rng):
    for _ in range(5):
        M = random_complex(rng, 2, 2)
        pts = []
        for t in np.linspace(0, 2 * np.pi, 30, endpoint=False):
            x = M @ np.array([1, np.exp(1j * t)])
            pts.append(surface_coordinates(x / np.linalg.norm(x)))
        pts = np.array(pts)
        assert np.linalg.matrix_rank(pts - pts.mean(axis=0), tol=1e-9) == 4


# -- m x n curve -------------------------------------------------------------


def test_curve_point_mn_examples(rng):
    for w in np.exp(2j * np.pi * rng.random(5)):
        for p in (2, 3, 5):
            assert np.allclose(curve_point_mn(2, p, w).rho, curve_point(p, w).rho, atol=1e-14)
        assert np.allclose(curve_point_mn(2, 2, w).rho, rho_4x4(w, w * w)[0], atol=1e-14)
        for m, n in [(2, 3), (3, 3), (3, 4)]:
            s = curve_point_mn(m, n, w)
            assert np.trace(s.rho).real == pytest.approx(1) and numerical_rank(s.rho) == 1
            assert np.allclose(moments_from_state_mn(s), w ** np.arange(1, m + n - 1))
    with pytest.raises(ValueError):
        curve_point_mn(1, 3, 1)


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 3), (3, 4)])
def test_curve_mn_interior_rank(m, n):
    k = m + n - 1
    zeta = np.exp(2j * np.pi * np.arange(k) / k)
    rho = sum(curve_point_mn(m, n, z).rho for z in zeta) / k
    s = BipartiteState(m, n, rho)
    assert numerical_rank(rho) == numerical_rank(partial_transpose(s).rho) == k
