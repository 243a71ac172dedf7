"""Smoothness indicators, candidate weights, characteristic limiting."""

import numpy as np
import pytest

from wccs import limiter as lim
from wccs import tables
from wccs.euler import Euler1D, Euler2D
from wccs.jets import jet_spec
from wccs.limiter import LimiterParams


def quadrature_beta_1d(dofs, p, nq=64):
    """Gauss-quadrature oracle for the 1D smoothness indicator."""
    import math

    import numpy.polynomial.legendre as leg

    xg, wg = leg.leggauss(nq)
    xg = 0.5 * xg
    wg = 0.5 * wg
    total = 0.0
    for d in range(1, p + 1):
        vals = np.zeros_like(xg)
        for k in range(d, p + 1):
            # derivative of xi^k/k! of order d is xi^(k-d)/(k-d)!
            vals += dofs[k] * xg ** (k - d) / math.factorial(k - d)
        total += np.sum(wg * vals**2)
    return total


def test_smoothness_constant_zero():
    assert lim.smoothness_indicator_1d(np.array([3.0, 0.0, 0.0]), 2) == 0.0


def test_smoothness_linear():
    # u = c0 + c1 xi: beta = c1^2
    assert lim.smoothness_indicator_1d(np.array([1.0, 0.7]), 1) == pytest.approx(0.49)


def test_smoothness_p2_closed_form():
    # beta = ux^2 + 13/12 u2x^2 for scaled DOFs
    d = np.array([0.3, 1.2, -0.8])
    want = 1.2**2 + 13.0 / 12.0 * 0.8**2
    assert lim.smoothness_indicator_1d(d, 2) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_smoothness_matches_quadrature(p):
    rng = np.random.default_rng(0)
    for _ in range(10):
        d = rng.normal(size=p + 1)
        got = lim.smoothness_indicator_1d(d, p)
        want = quadrature_beta_1d(d, p)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def quadrature_beta_2d(dofs, p, nq=24):
    import math

    import numpy.polynomial.legendre as leg

    spec = jet_spec(2, p)
    xg, wg = leg.leggauss(nq)
    xg = 0.5 * xg
    wg = 0.5 * wg
    X, Y = np.meshgrid(xg, xg, indexing="ij")
    W = np.outer(wg, wg)
    total = 0.0
    for dk, dl in spec.spatial_indices:
        if dk + dl == 0:
            continue
        vals = np.zeros_like(X)
        for q, (k, l) in enumerate(spec.spatial_indices):
            if k < dk or l < dl:
                continue
            vals += (
                dofs[q]
                * X ** (k - dk)
                / math.factorial(k - dk)
                * Y ** (l - dl)
                / math.factorial(l - dl)
            )
        total += np.sum(W * vals**2)
    return total


def test_smoothness_2d_plane():
    spec = jet_spec(2, 1)
    d = np.zeros(spec.ndof)
    d[spec.dof_slot[(1, 0)]] = 0.6
    d[spec.dof_slot[(0, 1)]] = -0.4
    assert lim.smoothness_indicator_2d(d, 1) == pytest.approx(0.6**2 + 0.4**2)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_smoothness_2d_matches_quadrature(p):
    rng = np.random.default_rng(1)
    spec = jet_spec(2, p)
    for _ in range(6):
        d = rng.normal(size=spec.ndof)
        got = lim.smoothness_indicator_2d(d, p)
        want = quadrature_beta_2d(d, p)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_candidate_slopes_symmetric_linear_data():
    s1, s2 = lim.candidate_slopes_1d(np.array(1.0), np.array(0.5), np.array(1.5))
    assert s1 == pytest.approx(1.0)
    assert s2 == pytest.approx(1.0)


def test_candidate_slopes_step_data():
    s1, s2 = lim.candidate_slopes_1d(np.array(1.0), np.array(1.0), np.array(0.0))
    assert s1 == pytest.approx(0.0)
    assert s2 == pytest.approx(-2.0)


def test_candidate_planes_2d():
    # bilinear data u = xi + eta: vertex values at the four corners
    ubar = np.array(0.0)
    vmm, vpm, vpp, vmp = map(np.array, (-1.0, 0.0, 1.0, 0.0))
    ux, uy = lim.candidate_planes_2d(ubar, vmm, vpm, vpp, vmp)
    np.testing.assert_allclose(ux, 1.0)
    np.testing.assert_allclose(uy, 1.0)


def test_weights_no_op_on_polynomial_data():
    # zero highest DOF and zero vertex residuals: tau = 0 gives w0 = 1
    p = 2
    dofs = np.array([[[0.9, 0.5, 0.0]]])
    er = dofs @ tables.edge_eval_1d(p, +1)
    el = dofs @ tables.edge_eval_1d(p, -1)
    ubar = dofs @ tables.avg_weights_1d(p)
    s1, s2 = lim.candidate_slopes_1d(ubar, el, er)
    w = lim.compute_weights_1d(dofs, ubar, el, er, s1, s2, p, LimiterParams())
    assert w[0][0, 0] == pytest.approx(1.0)
    assert w[1][0, 0] == 0.0
    out = lim.limit_cells_1d(dofs, ubar, el, er, p)
    np.testing.assert_array_equal(out, dofs)


def test_weights_equal_betas_second_order():
    # three equal-smoothness candidates share the weight
    dofs = np.array([[[0.0, 1.0]]])
    ubar = np.array([[0.0]])
    vl = np.array([[-0.5]])
    vr = np.array([[0.5]])
    s1, s2 = lim.candidate_slopes_1d(ubar, vl, vr)
    w = lim.compute_weights_1d(dofs, ubar, vl, vr, s1, s2, 1, LimiterParams())
    for wi in w:
        assert wi[0, 0] == pytest.approx(1.0 / 3.0)


def test_weights_step_discontinuity_prefers_smooth_side():
    # cell just left of a jump: the right vertex took the post-jump value,
    # the interior polynomial oscillates; candidate 1 (left, smooth) wins
    p = 2
    dofs = np.array([[[1.0, -1.5, 6.0]]])  # wiggly full-degree polynomial
    ubar = np.array([[1.0]])
    vl = np.array([[1.0]])   # smooth side
    vr = np.array([[0.0]])   # across the jump
    s1, s2 = lim.candidate_slopes_1d(ubar, vl, vr)
    w = lim.compute_weights_1d(dofs, ubar, vl, vr, s1, s2, p, LimiterParams())
    assert w[0][0, 0] < 1e-6
    assert w[1][0, 0] > 0.99


def test_weights_convex():
    rng = np.random.default_rng(2)
    p = 2
    dofs = rng.normal(size=(1, 50, p + 1))
    ubar = rng.normal(size=(1, 50))
    vl = rng.normal(size=(1, 50))
    vr = rng.normal(size=(1, 50))
    s1, s2 = lim.candidate_slopes_1d(ubar, vl, vr)
    w = lim.compute_weights_1d(dofs, ubar, vl, vr, s1, s2, p, LimiterParams())
    total = w[0] + w[1] + w[2]
    np.testing.assert_allclose(total, 1.0, rtol=1e-15)
    for wi in w:
        assert (wi >= 0).all()


@pytest.mark.parametrize("p", [1, 2, 3])
def test_limited_average_preserved_1d(p):
    rng = np.random.default_rng(3)
    n = 40
    dofs = rng.normal(size=(1, n, p + 1))
    aw = tables.avg_weights_1d(p)
    ubar = dofs @ aw
    vl = rng.normal(size=(1, n))
    vr = rng.normal(size=(1, n))
    out = lim.limit_cells_1d(dofs, ubar, vl, vr, p)
    np.testing.assert_allclose(out @ aw, ubar, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_limited_average_preserved_2d(p):
    rng = np.random.default_rng(4)
    spec = jet_spec(2, p)
    dofs = rng.normal(size=(1, 6, 7, spec.ndof))
    aw = tables.avg_weights_2d(p)
    ubar = dofs @ aw
    verts = tuple(rng.normal(size=(1, 6, 7)) for _ in range(4))
    out = lim.limit_cells_2d(dofs, ubar, verts, p)
    np.testing.assert_allclose(out @ aw, ubar, rtol=1e-13, atol=1e-14)


def test_w0_one_returns_original_2d():
    # smooth polynomial data with vanishing highest order and exact
    # vertex values: the limited polynomial is the original
    p = 2
    spec = jet_spec(2, p)
    dofs = np.zeros((1, 1, 1, spec.ndof))
    dofs[0, 0, 0, spec.dof_slot[(0, 0)]] = 1.0
    dofs[0, 0, 0, spec.dof_slot[(1, 0)]] = 0.5
    dofs[0, 0, 0, spec.dof_slot[(0, 1)]] = -0.2
    ubar = dofs @ tables.avg_weights_2d(p)
    verts = tuple(
        dofs @ tables.corner_eval_2d(p, sx, sy)
        for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1))
    )
    out = lim.limit_cells_2d(dofs, ubar, verts, p)
    np.testing.assert_array_equal(out, dofs)


def test_characteristic_round_trip_identity_1d():
    # with w0 = 1 in every field, projecting there and back is exact
    rng = np.random.default_rng(5)
    gas = Euler1D()
    n = 30
    rho = rng.uniform(0.5, 2.0, n)
    u = rng.uniform(-0.5, 0.5, n)
    pp = rng.uniform(0.5, 2.0, n)
    U = gas.conserved(rho, u, pp)
    p = 2
    dofs = np.zeros((3, n, p + 1))
    dofs[:, :, 0] = U
    dofs[:, :, 1] = 0.01 * rng.normal(size=(3, n))  # smooth, tau ~ 0 exactly? no
    dofs[:, :, 2] = 0.0  # zero highest order => tau = 0 => w0 = 1
    aw = tables.avg_weights_1d(p)
    ubar = dofs @ aw
    # vertex values consistent with the polynomial (zero residuals)
    vl = dofs @ tables.edge_eval_1d(p, -1)
    vr = dofs @ tables.edge_eval_1d(p, +1)
    _, L, R = gas.eigensystem(ubar)
    out = lim.limit_cells_1d(dofs, ubar, vl, vr, p, eig=(L, R))
    np.testing.assert_allclose(out, dofs, rtol=1e-13, atol=1e-13)


def test_rotation_angle_cases():
    assert lim.rotation_angle(np.array(1.0), np.array(0.0), np.array(5.0)) == 0.0
    assert lim.rotation_angle(np.array(1.0), np.array(1.0), np.array(5.0)) == pytest.approx(np.pi / 4)
    # degenerate gradient falls back to theta = 0
    assert lim.rotation_angle(np.array(1e-15), np.array(0.0), np.array(5.0)) == 0.0
    assert lim.rotation_angle(np.array(0.0), np.array(0.0), np.array(0.0)) == 0.0


def test_rotated_limiter_uniform_flow_is_identity():
    gas = Euler2D()
    p = 2
    spec = jet_spec(2, p)
    U = gas.conserved(1.0, 0.7, -0.3, 2.0)
    dofs = np.zeros((4, 3, 3, spec.ndof))
    dofs[:, :, :, 0] = U[:, None, None]
    ubar = dofs @ tables.avg_weights_2d(p)
    verts = tuple(dofs[..., 0].copy() for _ in range(4))
    theta = lim.rotation_angle(np.zeros((3, 3)), np.zeros((3, 3)), ubar[3])
    np.testing.assert_array_equal(theta, 0.0)
    _, L, R = gas.eigensystem(ubar, theta)
    out = lim.limit_cells_2d(dofs, ubar, verts, p, eig=(L, R))
    np.testing.assert_allclose(out, dofs, atol=1e-13)


def test_fused_limiter_matches_generic_1d():
    rng = np.random.default_rng(6)
    gas = Euler1D()
    from wccs import limfast

    for p in (1, 2, 3):
        n = 60
        dofs = 0.3 * rng.normal(size=(3, n, p + 1))
        dofs[:, :, 0] = np.stack([
            rng.uniform(0.5, 2.0, n), rng.uniform(-0.5, 0.5, n),
            rng.uniform(2.0, 4.0, n),
        ])
        ubar = dofs @ tables.avg_weights_1d(p)
        vl = ubar + 0.1 * rng.normal(size=(3, n))
        vr = ubar + 0.1 * rng.normal(size=(3, n))
        got = limfast.limit_euler_1d(dofs, ubar, vl, vr, gas.gamma, LimiterParams(), p)
        if got is None:
            pytest.skip("compiled kernels unavailable")
        _, L, R = gas.eigensystem(ubar)
        want = lim.limit_cells_1d(dofs, ubar, vl, vr, p, eig=(L, R))
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-13)


def test_fused_limiter_matches_generic_2d():
    rng = np.random.default_rng(7)
    gas = Euler2D()
    from wccs import limfast

    for p in (1, 2, 3):
        spec = jet_spec(2, p)
        n = 50
        dofs = 0.3 * rng.normal(size=(4, n, spec.ndof))
        dofs[:, :, 0] = np.stack([
            rng.uniform(0.5, 2.0, n), rng.uniform(-0.5, 0.5, n),
            rng.uniform(-0.5, 0.5, n), rng.uniform(2.0, 5.0, n),
        ])
        ubar = dofs @ tables.avg_weights_2d(p)
        verts = tuple(ubar + 0.1 * rng.normal(size=(4, n)) for _ in range(4))
        theta = rng.uniform(0, 2 * np.pi, n)
        got = limfast.limit_euler_2d(dofs, ubar, verts, theta, gas.gamma,
                                     LimiterParams(), p)
        if got is None:
            pytest.skip("compiled kernels unavailable")
        _, L, R = gas.eigensystem(ubar, theta)
        want = lim.limit_cells_2d(dofs, ubar, verts, p, eig=(L, R))
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-13)
