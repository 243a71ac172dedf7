"""Shared helpers for the test suite."""

import math

import numpy as np

from wccs.mesh import Mesh1D, Parity, State1D


def make_state_1d(mesh, parity, p, interior, t=0.0):
    """State from an interior DOF array (m, ncells, p+1); ghosts zeroed."""
    m, n, nd = interior.shape
    assert n == mesh.ncells(parity) and nd == p + 1
    dofs = np.zeros((m, n + 2, p + 1))
    dofs[:, 1:-1] = interior
    return State1D(mesh, parity, t, p, dofs)


def poly_dofs(coeffs, centers, dx, p):
    """Scaled derivative DOFs of the global polynomial sum(a_j x^j).

    Returns (1, n, p+1).
    """
    n = len(centers)
    out = np.zeros((1, n, p + 1))
    deg = len(coeffs) - 1
    for k in range(p + 1):
        val = np.zeros(n)
        for j in range(k, deg + 1):
            fall = math.factorial(j) / math.factorial(j - k)
            val += coeffs[j] * fall * centers ** (j - k)
        out[0, :, k] = val * dx**k
    return out


def random_euler_interior(rng, gas, n, p, amp=0.05):
    """Admissible random Euler DOFs (3, n, p+1) with smooth-ish wiggles."""
    rho = rng.uniform(0.5, 2.0, n)
    u = rng.uniform(-0.5, 0.5, n)
    pp = rng.uniform(0.5, 2.0, n)
    dofs = amp * rng.normal(size=(3, n, p + 1))
    dofs[:, :, 0] = gas.conserved(rho, u, pp)
    return dofs


def poly_dofs_2d(coeffs, cx, cy, dx, dy, p):
    """Scaled DOFs of the global polynomial sum(a_jk x^j y^k) on a grid.

    ``coeffs``: dict {(j, k): a}.  Returns (1, nx, ny, ndof).
    """
    from wccs.jets import jet_spec

    spec = jet_spec(2, p)
    X, Y = np.meshgrid(cx, cy, indexing="ij")
    out = np.zeros((1, len(cx), len(cy), spec.ndof))
    for q, (k, l) in enumerate(spec.spatial_indices):
        val = np.zeros_like(X)
        for (j1, j2), a in coeffs.items():
            if j1 < k or j2 < l:
                continue
            f1 = math.factorial(j1) / math.factorial(j1 - k)
            f2 = math.factorial(j2) / math.factorial(j2 - l)
            val += a * f1 * f2 * X ** (j1 - k) * Y ** (j2 - l)
        out[0, :, :, q] = val * dx**k * dy**l
    return out


def random_poly_2d(rng, p):
    """Random total-degree-<=p polynomial coefficient dict."""
    return {
        (j, k): rng.normal()
        for j in range(p + 1)
        for k in range(p + 1 - j)
    }
