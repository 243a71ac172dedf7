"""Jet arithmetic against brute-force polynomial oracles."""

import itertools
import math

import numpy as np
import pytest

from wccs import jets as J
from wccs.errors import JetDivisionError, ShapeError
from wccs.euler import Euler1D
from wccs.jets import Jet, jet_spec


def poly_mul_oracle(spec, a, b):
    """Multiply as plain Taylor polynomials, then truncate to order <= p.

    Scaled derivatives relate to Taylor coefficients by psi_g / g!, so the
    oracle converts, convolves without truncation, and converts back.
    """
    naxes = spec.sdim + 1
    fact = {g: math.prod(math.factorial(x) for x in g) for g in spec.indices}
    ca = {g: a[spec.slot[g]] / fact[g] for g in spec.indices}
    cb = {g: b[spec.slot[g]] / fact[g] for g in spec.indices}
    out = np.zeros(spec.nslots)
    for g1, g2 in itertools.product(spec.indices, repeat=2):
        g = tuple(x + y for x, y in zip(g1, g2))
        if sum(g) <= spec.p:
            out[spec.slot[g]] += ca[g1] * cb[g2] * fact[g]
    return out


def make_jet(spec, coeffs):
    """Jet from {multi-index: scaled derivative}."""
    c = np.zeros(spec.nslots)
    for g, v in coeffs.items():
        c[spec.slot[g]] = v
    return Jet(spec, c)


@pytest.mark.parametrize("sdim,p", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_add_matches_coefficientwise_sum(sdim, p):
    rng = np.random.default_rng(7)
    spec = jet_spec(sdim, p)
    a = Jet(spec, rng.normal(size=(5, spec.nslots)))
    b = Jet(spec, rng.normal(size=(5, spec.nslots)))
    np.testing.assert_array_equal((a + b).c, a.c + b.c)
    zero = Jet.zeros(spec, (5,))
    np.testing.assert_array_equal((a + zero).c, a.c)


def test_add_cancellation():
    spec = jet_spec(1, 2)
    a = make_jet(spec, {(0, 0): 1.0, (1, 0): 1.0})
    b = make_jet(spec, {(0, 0): 2.0, (1, 0): -1.0})
    c = (a + b).c
    expect = np.zeros(spec.nslots)
    expect[spec.slot[(0, 0)]] = 3.0
    np.testing.assert_array_equal(c, expect)


def test_add_shape_mismatch():
    a = Jet.zeros(jet_spec(1, 2))
    b = Jet.zeros(jet_spec(1, 3))
    with pytest.raises(ShapeError):
        a + b


def test_mul_exact_square_below_truncation():
    # (1 + xi)^2 = 1 + 2 xi + xi^2 for p = 2
    spec = jet_spec(1, 2)
    a = make_jet(spec, {(0, 0): 1.0, (1, 0): 1.0})
    sq = (a * a).c
    assert sq[spec.slot[(0, 0)]] == 1.0
    assert sq[spec.slot[(1, 0)]] == 2.0
    assert sq[spec.slot[(2, 0)]] == 2.0  # scaled derivative of xi^2 is 2
    assert abs(sq).sum() == 5.0


def test_mul_truncation_drops_high_order():
    # xi * xi^2 vanishes at p = 2
    spec = jet_spec(1, 2)
    a = make_jet(spec, {(1, 0): 1.0})
    b = make_jet(spec, {(2, 0): 2.0})
    np.testing.assert_array_equal((a * b).c, np.zeros(spec.nslots))


@pytest.mark.parametrize("sdim,p", [(1, 1), (1, 3), (2, 2), (2, 3)])
def test_mul_matches_polynomial_oracle(sdim, p):
    rng = np.random.default_rng(42)
    spec = jet_spec(sdim, p)
    for _ in range(20):
        a = rng.normal(size=spec.nslots)
        b = rng.normal(size=spec.nslots)
        got = (Jet(spec, a) * Jet(spec, b)).c
        want = poly_mul_oracle(spec, a, b)
        np.testing.assert_allclose(got, want, atol=1e-14, rtol=1e-14)


@pytest.mark.parametrize("sdim,p", [(1, 2), (2, 3)])
def test_mul_commutative_associative(sdim, p):
    rng = np.random.default_rng(3)
    spec = jet_spec(sdim, p)
    a = Jet(spec, rng.normal(size=(8, spec.nslots)))
    b = Jet(spec, rng.normal(size=(8, spec.nslots)))
    c = Jet(spec, rng.normal(size=(8, spec.nslots)))
    np.testing.assert_allclose((a * b).c, (b * a).c, atol=1e-14)
    np.testing.assert_allclose(((a * b) * c).c, (a * (b * c)).c, atol=1e-14)


def test_recip_constant():
    spec = jet_spec(1, 2)
    a = Jet.constant(spec, np.array(2.0))
    r = a.reciprocal().c
    assert r[0] == 0.5
    assert abs(r).sum() == 0.5


def test_recip_geometric_series():
    # 1 / (1 + xi) = 1 - xi + xi^2 - ... : scaled derivatives (1, -1, 2)
    spec = jet_spec(1, 2)
    a = make_jet(spec, {(0, 0): 1.0, (1, 0): 1.0})
    r = a.reciprocal().c
    assert r[spec.slot[(0, 0)]] == pytest.approx(1.0)
    assert r[spec.slot[(1, 0)]] == pytest.approx(-1.0)
    assert r[spec.slot[(2, 0)]] == pytest.approx(2.0)


@pytest.mark.parametrize("sdim,p", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_recip_identity_property(sdim, p):
    rng = np.random.default_rng(11)
    spec = jet_spec(sdim, p)
    unit = np.zeros(spec.nslots)
    unit[0] = 1.0
    for _ in range(20):
        c = rng.uniform(-1.0, 1.0, size=spec.nslots)
        c[0] = 1.0
        a = Jet(spec, c)
        prod = (a * a.reciprocal()).c
        np.testing.assert_allclose(prod, unit, atol=1e-12)


def test_recip_zero_constant_raises():
    spec = jet_spec(1, 2)
    a = make_jet(spec, {(1, 0): 1.0})
    with pytest.raises(JetDivisionError):
        a.reciprocal()


def test_numba_and_numpy_paths_agree():
    rng = np.random.default_rng(5)
    spec = jet_spec(2, 3)
    a = rng.normal(size=(4, spec.nslots))
    b = rng.normal(size=(4, spec.nslots))
    out1 = np.zeros_like(a)
    J._mul_numpy(a, b, *spec._mul, out1)
    got = (Jet(spec, a) * Jet(spec, b)).c
    np.testing.assert_allclose(got, out1, atol=1e-14)
    a[:, 0] = 1.5
    r1 = np.zeros_like(a)
    J._recip_numpy(a, *spec._recip, r1)
    np.testing.assert_allclose(Jet(spec, a).reciprocal().c, r1, atol=1e-14)


# --- Cauchy-Kovalewski ----------------------------------------------------

def test_ck_constant_state_has_zero_time_derivatives():
    spec = jet_spec(1, 2)
    dofs = np.zeros((3, 4, 3))
    dofs[:, :, 0] = np.array([1.0, 0.3, 2.5])[:, None]
    gas = Euler1D()
    full = J.cauchy_kovalewski_1d(dofs, gas.flux_jets, 0.4, spec)
    for g in spec.indices:
        if g[-1] > 0:
            np.testing.assert_allclose(full[..., spec.slot[g]], 0.0, atol=1e-15)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_ck_linear_advection_closed_form(p):
    # f = a u gives u_(k)x,(b)t = (-a nu)^b u_(k+b)x
    rng = np.random.default_rng(2)
    spec = jet_spec(1, p)
    a = 0.7
    nu = 0.35
    dofs = rng.normal(size=(1, 6, p + 1))
    full = J.cauchy_kovalewski_1d(dofs, lambda U: [a * U[0]], nu, spec)
    for k, b in spec.indices:
        if b == 0:
            continue
        want = (-a * nu) ** b * dofs[0, :, k + b]
        got = full[0, :, spec.slot[(k, b)]]
        np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-15)


def test_ck_burgers_first_order():
    # f = u^2/2, u = 1 + xi, p = 1, nu = 0.4: u_t = -nu * u * u_x = -0.4
    spec = jet_spec(1, 1)
    dofs = np.array([[[1.0, 1.0]]])
    full = J.cauchy_kovalewski_1d(dofs, lambda U: [0.5 * (U[0] * U[0])], 0.4, spec)
    assert full[0, 0, spec.slot[(0, 1)]] == pytest.approx(-0.4)


def test_ck_2d_linear_advection_trivial():
    # f = a u, g = b u, nu_x = nu_y = 0.25, u_x = u_y = 1 -> u_t = -0.5
    spec = jet_spec(2, 1)
    dofs = np.zeros((1, 1, 1, 3))
    dofs[0, 0, 0, :] = [2.0, 1.0, 1.0]
    full = J.cauchy_kovalewski_2d(
        dofs, lambda U: ([1.0 * U[0]], [1.0 * U[0]]), 0.25, 0.25, spec
    )
    assert full[0, 0, 0, spec.slot[(0, 0, 1)]] == pytest.approx(-0.5)


@pytest.mark.parametrize("p", [2, 3])
def test_ck_2d_linear_advection_closed_form(p):
    # u_(k)x,(l)y,(b)t = sum_(s+t=b) binom(b,s) (-a nux)^s (-c nuy)^t u_(k+s)x,(l+t)y
    rng = np.random.default_rng(9)
    spec = jet_spec(2, p)
    a, c = 0.8, -0.6
    nux, nuy = 0.3, 0.2
    dofs = rng.normal(size=(1, 5, spec.ndof))
    full = J.cauchy_kovalewski_2d(
        dofs, lambda U: ([a * U[0]], [c * U[0]]), nux, nuy, spec
    )
    for k, l, b in spec.indices:
        if b == 0:
            continue
        want = np.zeros(5)
        for s in range(b + 1):
            t = b - s
            want += (
                math.comb(b, s)
                * (-a * nux) ** s
                * (-c * nuy) ** t
                * dofs[0, :, spec.dof_slot[(k + s, l + t)]]
            )
        got = full[0, :, spec.slot[(k, l, b)]]
        np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-13)


def test_ck_euler_first_level_matches_quasilinear_oracle():
    # level b=1: U_t = -nu * A(U) U_x with the analytic Jacobian
    rng = np.random.default_rng(21)
    gas = Euler1D()
    spec = jet_spec(1, 3)
    n = 50
    rho = rng.uniform(0.5, 2.0, n)
    u = rng.uniform(-1.0, 1.0, n)
    pp = rng.uniform(0.5, 2.0, n)
    U0 = gas.conserved(rho, u, pp)
    dofs = rng.normal(size=(3, n, 4)) * 0.1
    dofs[:, :, 0] = U0
    nu = 0.3
    full = J.cauchy_kovalewski_1d(dofs, gas.flux_jets, nu, spec)
    A = gas.jacobian(U0)
    want = -nu * np.einsum("abn,bn->an", A, dofs[:, :, 1])
    got = full[:, :, spec.slot[(0, 1)]]
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_fused_euler_ck_matches_generic_1d(p):
    rng = np.random.default_rng(31)
    gas = Euler1D()
    spec = jet_spec(1, p)
    n = 40
    dofs = 0.1 * rng.normal(size=(3, n, p + 1))
    dofs[:, :, 0] = gas.conserved(
        rng.uniform(0.5, 2.0, n), rng.uniform(-1, 1, n), rng.uniform(0.5, 2.0, n)
    )
    from wccs.ckfast import ck_euler_1d

    got = ck_euler_1d(dofs, gas.gamma, 0.3, spec)
    if got is None:
        pytest.skip("compiled kernels unavailable")
    ju, jf = got
    ju2, jf2 = J.ck_1d(dofs, gas.flux_jets, 0.3, spec)
    np.testing.assert_allclose(ju, ju2, rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(jf, jf2, rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_fused_euler_ck_matches_generic_2d(p):
    rng = np.random.default_rng(32)
    from wccs.euler import Euler2D

    gas = Euler2D()
    spec = jet_spec(2, p)
    shape = (6, 5)
    dofs = 0.1 * rng.normal(size=(4, *shape, spec.ndof))
    dofs[:, :, :, 0] = gas.conserved(
        rng.uniform(0.5, 2.0, shape), rng.uniform(-1, 1, shape),
        rng.uniform(-1, 1, shape), rng.uniform(0.5, 2.0, shape),
    )
    from wccs.ckfast import ck_euler_2d

    got = ck_euler_2d(dofs, gas.gamma, 0.3, 0.2, spec)
    if got is None:
        pytest.skip("compiled kernels unavailable")
    ju, jf, jg = got
    ju2, jf2, jg2 = J.ck_2d(dofs, gas.flux_jets, 0.3, 0.2, spec)
    np.testing.assert_allclose(ju, ju2, rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(jf, jf2, rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(jg, jg2, rtol=1e-14, atol=1e-14)
