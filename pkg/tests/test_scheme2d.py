"""2D half-step: quarter averages, derivative updates, exactness, conservation."""

import numpy as np
import pytest

from util import poly_dofs_2d, random_poly_2d

from wccs import scheme2d as s2
from wccs import tables
from wccs.config import SchemeConfig
from wccs.euler import Euler2D
from wccs.jets import jet_spec
from wccs.mesh import (
    BoundaryConditions2D,
    Mesh2D,
    Parity,
    Periodic,
    State2D,
    fill_ghosts,
)
from wccs.physics import LinearAdvection2D


def make_state_2d(mesh, parity, p, interior, t=0.0):
    m, nx, ny, nd = interior.shape
    dofs = np.zeros((m, nx + 2, ny + 2, nd))
    dofs[:, 1:-1, 1:-1] = interior
    return State2D(mesh, parity, t, p, dofs)


def test_quarter_average_example():
    # all DOFs 1 at p=2: RU quarter average = 1.645833...
    spec = jet_spec(2, 2)
    dofs = np.ones((1, 1, 1, spec.ndof))
    ru, rd, lu, ld = s2.quarter_averages(dofs, 2)
    assert ru[0, 0, 0] == pytest.approx(1.6458333333333333, rel=1e-12)


def test_quarter_averages_compose_full_average():
    rng = np.random.default_rng(0)
    spec = jet_spec(2, 3)
    dofs = rng.normal(size=(2, 4, 5, spec.ndof))
    ru, rd, lu, ld = s2.quarter_averages(dofs, 3)
    full = dofs @ tables.avg_weights_2d(3)
    np.testing.assert_allclose(0.25 * (ru + rd + lu + ld), full, rtol=1e-13, atol=1e-14)


def test_first_order_x_derivative_formula():
    # u_x = 0.5 [ (u)_(i+1,j) + (u)_(i+1,j+1) - (u)_(i,j) - (u)_(i,j+1) ]
    spec = jet_spec(2, 1)
    shape = (1, 1, 1, spec.ndof)
    v00, v01 = np.zeros(shape), np.zeros(shape)
    v10, v11 = np.zeros(shape), np.zeros(shape)
    v10[..., 0] = 1.0
    v11[..., 0] = 1.0
    out = s2.derivative_update_2d(v00, v10, v01, v11, 1)
    assert out[0, 0, 0, spec.dof_slot[(1, 0)]] == pytest.approx(1.0)
    assert out[0, 0, 0, spec.dof_slot[(0, 1)]] == pytest.approx(0.0)


def test_equal_vertices_zero_derivatives():
    spec = jet_spec(2, 3)
    v = np.tile(np.arange(1.0, 1.0 + spec.ndof), (1, 2, 2, 1))
    out = s2.derivative_update_2d(v, v.copy(), v.copy(), v.copy(), 3)
    np.testing.assert_allclose(out[..., 1:], 0.0, atol=1e-14)


def test_recover_point_value_2d():
    spec = jet_spec(2, 1)
    assert s2.recover_point_value_2d(np.array(2.5), np.zeros(spec.ndof), 1) == pytest.approx(2.5)
    spec2 = jet_spec(2, 2)
    d = np.zeros(spec2.ndof)
    d[spec2.dof_slot[(2, 0)]] = 12.0
    d[spec2.dof_slot[(0, 2)]] = 12.0
    assert s2.recover_point_value_2d(np.array(1.0), d, 2) == pytest.approx(0.0)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_recover_round_trip_2d(p):
    rng = np.random.default_rng(1)
    spec = jet_spec(2, p)
    dofs = rng.normal(size=(7, spec.ndof))
    ubar = dofs @ tables.avg_weights_2d(p)
    got = s2.recover_point_value_2d(ubar, dofs, p)
    np.testing.assert_allclose(got, dofs[:, 0], rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_half_step_exact_on_polynomial_data_2d(p):
    # includes a 2:1 aspect ratio; degree-<=p data advects exactly
    rng = np.random.default_rng(2 + p)
    coeffs = random_poly_2d(rng, p)
    a, b = 0.6, -0.45
    mesh = Mesh2D(0.0, 1.0, 0.0, 1.0, 5, 10)  # dx = 2 dy
    phys = LinearAdvection2D(a, b)
    cx, cy = mesh.centers(Parity.ORIGINAL)
    interior = poly_dofs_2d(coeffs, cx, cy, mesh.dx, mesh.dy, p)
    st = make_state_2d(mesh, Parity.ORIGINAL, p, interior)
    dt = 0.2 * mesh.dy / max(abs(a), abs(b))
    cfg = SchemeConfig(order=p + 1, weighted=False)
    new, _ = s2.advance_half_step_2d(st, phys, None, cfg, dt)
    dx_, dy_ = mesh.centers(Parity.STAGGERED)
    want = poly_dofs_2d(coeffs, dx_ - a * dt, dy_ - b * dt, mesh.dx, mesh.dy, p)
    np.testing.assert_allclose(new.interior(), want, rtol=1e-12, atol=1e-12)


def test_derivative_update_matches_global_polynomial_oracle():
    # p=3: run one half-step on polynomial data and compare every DOF of
    # the destination cells with the shifted polynomial's Taylor table
    rng = np.random.default_rng(9)
    p = 3
    coeffs = random_poly_2d(rng, p)
    mesh = Mesh2D(-1.0, 1.0, 0.0, 1.0, 6, 4)
    phys = LinearAdvection2D(1.0, 1.0)
    cx, cy = mesh.centers(Parity.ORIGINAL)
    interior = poly_dofs_2d(coeffs, cx, cy, mesh.dx, mesh.dy, p)
    st = make_state_2d(mesh, Parity.ORIGINAL, p, interior)
    dt = 0.15 * min(mesh.dx, mesh.dy)
    cfg = SchemeConfig(order=4, weighted=False)
    new, _ = s2.advance_half_step_2d(st, phys, None, cfg, dt)
    sx, sy = mesh.centers(Parity.STAGGERED)
    want = poly_dofs_2d(coeffs, sx - dt, sy - dt, mesh.dx, mesh.dy, p)
    np.testing.assert_allclose(new.interior(), want, rtol=1e-12, atol=1e-12)


def _smooth_euler_state(mesh, parity, p, gas):
    spec = jet_spec(2, p)
    nx, ny = mesh.ncells(parity)
    cx, cy = mesh.centers(parity)
    X, Y = np.meshgrid(cx, cy, indexing="ij")
    rho = 1.0 + 0.2 * np.sin(np.pi * X) * np.cos(np.pi * Y)
    u = 0.3 * np.cos(np.pi * X)
    v = -0.2 * np.sin(np.pi * Y)
    pp = 1.0 + 0.1 * np.cos(np.pi * X) * np.cos(np.pi * Y)
    interior = np.zeros((4, nx, ny, spec.ndof))
    interior[:, :, :, 0] = gas.conserved(rho, u, v, pp)
    rng = np.random.default_rng(5)
    interior[:, :, :, 1:] = 0.02 * rng.normal(size=(4, nx, ny, spec.ndof - 1))
    if parity is Parity.ORIGINAL:
        # the straddling end cells describe the same physical cell under
        # periodic wrap and must agree
        interior[:, -1] = interior[:, 0]
        interior[:, :, -1] = interior[:, :, 0]
    return make_state_2d(mesh, parity, p, interior)


@pytest.mark.parametrize("parity", [Parity.STAGGERED, Parity.ORIGINAL])
@pytest.mark.parametrize("weighted", [False, True])
def test_conservation_periodic_half_step_2d(parity, weighted):
    gas = Euler2D()
    mesh = Mesh2D(-1.0, 1.0, -1.0, 1.0, 8, 8)
    p = 2
    st = _smooth_euler_state(mesh, parity, p, gas)
    bcs = BoundaryConditions2D(Periodic(), Periodic(), Periodic(), Periodic())
    fill_ghosts(st, bcs)
    cfg = SchemeConfig(order=3, weighted=weighted, characteristic=True)
    dt = 0.2 * mesh.dx
    new, diag = s2.advance_half_step_2d(st, gas, bcs, cfg, dt, monitor=True)
    m0, m1 = s2.totals(st), s2.totals(new)
    np.testing.assert_allclose(m1, m0, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(m1, diag["expected_totals"], rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("parity", [Parity.STAGGERED, Parity.ORIGINAL])
def test_budget_identity_arbitrary_ghosts_2d(parity):
    # expected totals must match for any ghost content (open boundaries)
    gas = Euler2D()
    mesh = Mesh2D(0.0, 1.0, 0.0, 2.0, 6, 9)
    p = 1
    st = _smooth_euler_state(mesh, parity, p, gas)
    # fill ghosts with copies (non-reflective-like), leave corners as copies
    st.dofs[:, 0] = st.dofs[:, 1]
    st.dofs[:, -1] = st.dofs[:, -2]
    st.dofs[:, :, 0] = st.dofs[:, :, 1]
    st.dofs[:, :, -1] = st.dofs[:, :, -2]
    cfg = SchemeConfig(order=2, weighted=False)
    dt = 0.15 * min(mesh.dx, mesh.dy)
    new, diag = s2.advance_half_step_2d(st, gas, None, cfg, dt, monitor=True)
    np.testing.assert_allclose(s2.totals(new), diag["expected_totals"], rtol=1e-13, atol=1e-13)


def test_constant_euler_state_fixed_point_2d():
    gas = Euler2D()
    mesh = Mesh2D(0.0, 1.0, 0.0, 1.0, 5, 5)
    p = 2
    spec = jet_spec(2, p)
    U = gas.conserved(1.0, 0.4, -0.3, 2.0)
    interior = np.zeros((4, 5, 5, spec.ndof))
    interior[:, :, :, 0] = U[:, None, None]
    st = make_state_2d(mesh, Parity.STAGGERED, p, interior)
    bcs = BoundaryConditions2D(Periodic(), Periodic(), Periodic(), Periodic())
    fill_ghosts(st, bcs)
    cfg = SchemeConfig(order=3, weighted=True, characteristic=True)
    new, _ = s2.advance_half_step_2d(st, gas, bcs, cfg, 0.1 * mesh.dx)
    np.testing.assert_allclose(
        new.interior()[:, :, :, 0],
        np.broadcast_to(U[:, None, None], (4, 6, 6)),
        atol=1e-14,
    )
    np.testing.assert_allclose(new.interior()[:, :, :, 1:], 0.0, atol=1e-14)
