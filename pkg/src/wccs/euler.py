"""Perfect-gas Euler equations: fluxes, eigensystems, shock relations.

Conserved variables are (rho, rho*u, rho*e) in 1D and
(rho, rho*u, rho*v, rho*e) in 2D with e the specific total energy,
p = (gamma - 1) * (rho*e - rho*(u^2 + v^2)/2).  Component axis first.

Eigenvectors are the standard conservative-variable set; the 2D versions
are built for an arbitrary unit normal (cos(theta), sin(theta)) so one
decomposition serves the rotated characteristic limiter.  They satisfy
L @ R = I and R @ diag(lam) @ L = dF/dU cos(theta) + dG/dU sin(theta),
which the test suite checks directly.
"""

from __future__ import annotations

import numpy as np

from .errors import PhysicsError


def _bad_state_msg(mask, what):
    flat = int(np.argmax(mask.reshape(-1)))
    idx = np.unravel_index(flat, mask.shape)
    return f"nonpositive {what}", idx


class Euler1D:
    ncomp = 3
    names = ("rho", "rhou", "rhoe")

    def __init__(self, gamma=1.4):
        self.gamma = float(gamma)

    # --- pointwise -------------------------------------------------------
    def pressure(self, U):
        rho, m, E = U[0], U[1], U[2]
        return (self.gamma - 1.0) * (E - 0.5 * m * m / rho)

    def primitive(self, U):
        """(rho, u, p) from conserved."""
        rho, m = U[0], U[1]
        return rho, m / rho, self.pressure(U)

    def conserved(self, rho, u, p):
        rho = np.asarray(rho, dtype=np.float64)
        E = p / (self.gamma - 1.0) + 0.5 * rho * u * u
        return np.stack(np.broadcast_arrays(rho, rho * u, E))

    def flux(self, U):
        rho, m, E = U[0], U[1], U[2]
        u = m / rho
        p = self.pressure(U)
        return np.stack([m, m * u + p, (E + p) * u])

    def flux_jets(self, U):
        rho, m, E = U
        u = m * rho.reciprocal()
        mu = m * u
        p = (self.gamma - 1.0) * (E - 0.5 * mu)
        return [m, mu + p, (E + p) * u]

    def ck_fused_1d(self, dofs, nu, spec):
        from .ckfast import ck_euler_1d

        return ck_euler_1d(dofs, self.gamma, nu, spec)

    def sound_speed(self, U, t=None):
        rho = U[0]
        p = self.pressure(U)
        bad = (rho <= 0.0) | (p <= 0.0)
        if np.any(bad):
            msg, idx = _bad_state_msg(bad, "density or pressure")
            raise PhysicsError(msg, cell=idx, time=t)
        return np.sqrt(self.gamma * p / rho)

    def max_wave_speed(self, U, t=None):
        c = self.sound_speed(U, t=t)
        return np.abs(U[1] / U[0]) + c

    def jacobian(self, U):
        """dF/dU, shape (3, 3, ...)."""
        g = self.gamma
        rho, m, E = U[0], U[1], U[2]
        u = m / rho
        H = (E + self.pressure(U)) / rho
        A = np.zeros((3, 3, *np.shape(u)))
        A[0, 1] = 1.0
        A[1, 0] = 0.5 * (g - 3.0) * u * u
        A[1, 1] = (3.0 - g) * u
        A[1, 2] = g - 1.0
        A[2, 0] = u * (0.5 * (g - 1.0) * u * u - H)
        A[2, 1] = H - (g - 1.0) * u * u
        A[2, 2] = g * u
        return A

    def eigensystem(self, U, t=None):
        """Eigenvalues (u-c, u, u+c) and left/right eigenvector matrices."""
        g = self.gamma
        rho, m, E = U[0], U[1], U[2]
        u = m / rho
        c = self.sound_speed(U, t=t)
        H = (E + self.pressure(U)) / rho
        b1 = (g - 1.0) / (c * c)
        b2 = 0.5 * b1 * u * u
        shape = np.shape(u)
        lam = np.stack([u - c, u, u + c])
        R = np.empty((3, 3, *shape))
        R[0, 0] = 1.0
        R[1, 0] = u - c
        R[2, 0] = H - u * c
        R[0, 1] = 1.0
        R[1, 1] = u
        R[2, 1] = 0.5 * u * u
        R[0, 2] = 1.0
        R[1, 2] = u + c
        R[2, 2] = H + u * c
        L = np.empty((3, 3, *shape))
        L[0, 0] = 0.5 * (b2 + u / c)
        L[0, 1] = -0.5 * (b1 * u + 1.0 / c)
        L[0, 2] = 0.5 * b1
        L[1, 0] = 1.0 - b2
        L[1, 1] = b1 * u
        L[1, 2] = -b1
        L[2, 0] = 0.5 * (b2 - u / c)
        L[2, 1] = -0.5 * (b1 * u - 1.0 / c)
        L[2, 2] = 0.5 * b1
        return lam, L, R


class Euler2D:
    ncomp = 4
    names = ("rho", "rhou", "rhov", "rhoe")
    # conserved component whose gradient steers the rotated characteristic
    # decomposition (total energy density)
    phi_component = 3

    def __init__(self, gamma=1.4):
        self.gamma = float(gamma)

    def pressure(self, U):
        rho, mx, my, E = U[0], U[1], U[2], U[3]
        return (self.gamma - 1.0) * (E - 0.5 * (mx * mx + my * my) / rho)

    def primitive(self, U):
        rho = U[0]
        return rho, U[1] / rho, U[2] / rho, self.pressure(U)

    def conserved(self, rho, u, v, p):
        rho = np.asarray(rho, dtype=np.float64)
        E = p / (self.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
        return np.stack(np.broadcast_arrays(rho, rho * u, rho * v, E))

    def flux_x(self, U):
        rho, mx, my, E = U[0], U[1], U[2], U[3]
        u = mx / rho
        p = self.pressure(U)
        return np.stack([mx, mx * u + p, my * u, (E + p) * u])

    def flux_y(self, U):
        rho, mx, my, E = U[0], U[1], U[2], U[3]
        v = my / rho
        p = self.pressure(U)
        return np.stack([my, mx * v, my * v + p, (E + p) * v])

    def flux_jets(self, U):
        rho, mx, my, E = U
        inv = rho.reciprocal()
        u = mx * inv
        v = my * inv
        mxu = mx * u
        myv = my * v
        p = (self.gamma - 1.0) * (E - 0.5 * (mxu + myv))
        Ep = E + p
        f = [mx, mxu + p, my * u, Ep * u]
        g = [my, mx * v, myv + p, Ep * v]
        return f, g

    def ck_fused_2d(self, dofs, nux, nuy, spec):
        from .ckfast import ck_euler_2d

        return ck_euler_2d(dofs, self.gamma, nux, nuy, spec)

    def sound_speed(self, U, t=None):
        rho = U[0]
        p = self.pressure(U)
        bad = (rho <= 0.0) | (p <= 0.0)
        if np.any(bad):
            msg, idx = _bad_state_msg(bad, "density or pressure")
            raise PhysicsError(msg, cell=idx, time=t)
        return np.sqrt(self.gamma * p / rho)

    def max_wave_speed(self, U, t=None):
        c = self.sound_speed(U, t=t)
        rho = U[0]
        return np.abs(U[1] / rho) + c, np.abs(U[2] / rho) + c

    def jacobian(self, U, theta):
        """Directional Jacobian dF/dU cos(theta) + dG/dU sin(theta)."""
        g = self.gamma
        rho, mx, my, E = U[0], U[1], U[2], U[3]
        u, v = mx / rho, my / rho
        nx, ny = np.cos(theta), np.sin(theta)
        un = u * nx + v * ny
        q2 = u * u + v * v
        H = (E + self.pressure(U)) / rho
        phi = 0.5 * (g - 1.0) * q2
        A = np.zeros((4, 4, *np.shape(un)))
        A[0, 1] = nx * np.ones_like(un)
        A[0, 2] = ny * np.ones_like(un)
        A[1, 0] = phi * nx - u * un
        A[1, 1] = un - (g - 2.0) * u * nx
        A[1, 2] = u * ny - (g - 1.0) * v * nx
        A[1, 3] = (g - 1.0) * nx * np.ones_like(un)
        A[2, 0] = phi * ny - v * un
        A[2, 1] = v * nx - (g - 1.0) * u * ny
        A[2, 2] = un - (g - 2.0) * v * ny
        A[2, 3] = (g - 1.0) * ny * np.ones_like(un)
        A[3, 0] = un * (phi - H)
        A[3, 1] = H * nx - (g - 1.0) * u * un
        A[3, 2] = H * ny - (g - 1.0) * v * un
        A[3, 3] = g * un
        return A

    def eigensystem(self, U, theta, t=None):
        """Eigendecomposition of the Jacobian normal to (cos, sin)(theta).

        Eigenvalues are (un - c, un, un, un + c) with un the normal
        velocity; the repeated field carries the tangential velocity.
        """
        g = self.gamma
        rho, mx, my, E = U[0], U[1], U[2], U[3]
        u, v = mx / rho, my / rho
        c = self.sound_speed(U, t=t)
        H = (E + self.pressure(U)) / rho
        nx, ny = np.cos(theta), np.sin(theta)
        nx, ny = np.broadcast_arrays(
            np.asarray(nx, dtype=np.float64), np.asarray(ny, dtype=np.float64)
        )
        nx = np.broadcast_to(nx, np.shape(u))
        ny = np.broadcast_to(ny, np.shape(u))
        un = u * nx + v * ny
        ut = -u * ny + v * nx
        q2 = u * u + v * v
        b1 = (g - 1.0) / (c * c)
        b2 = 0.5 * b1 * q2
        shape = np.shape(u)
        lam = np.stack([un - c, un, un, un + c])
        R = np.empty((4, 4, *shape))
        R[0, 0] = 1.0
        R[1, 0] = u - c * nx
        R[2, 0] = v - c * ny
        R[3, 0] = H - c * un
        R[0, 1] = 1.0
        R[1, 1] = u
        R[2, 1] = v
        R[3, 1] = 0.5 * q2
        R[0, 2] = 0.0
        R[1, 2] = -ny
        R[2, 2] = nx
        R[3, 2] = ut
        R[0, 3] = 1.0
        R[1, 3] = u + c * nx
        R[2, 3] = v + c * ny
        R[3, 3] = H + c * un
        L = np.empty((4, 4, *shape))
        L[0, 0] = 0.5 * (b2 + un / c)
        L[0, 1] = -0.5 * (b1 * u + nx / c)
        L[0, 2] = -0.5 * (b1 * v + ny / c)
        L[0, 3] = 0.5 * b1
        L[1, 0] = 1.0 - b2
        L[1, 1] = b1 * u
        L[1, 2] = b1 * v
        L[1, 3] = -b1
        L[2, 0] = -ut
        L[2, 1] = -ny
        L[2, 2] = nx
        L[2, 3] = 0.0
        L[3, 0] = 0.5 * (b2 - un / c)
        L[3, 1] = -0.5 * (b1 * u - nx / c)
        L[3, 2] = -0.5 * (b1 * v - ny / c)
        L[3, 3] = 0.5 * b1
        return lam, L, R


def normal_shock_state(mach, rho2, p2, gamma=1.4):
    """Post-shock primitive state for a normal shock running into gas at rest.

    The pre-shock gas (rho2, p2) is quiescent; the shock moves at Mach
    ``mach`` relative to it.  Returns (rho_s, v_s, p_s): the post-shock
    density, speed in the propagation direction, and pressure.
    """
    if mach <= 1.0:
        raise ValueError(f"shock Mach number must exceed 1, got {mach}")
    m2 = mach * mach
    a2 = np.sqrt(gamma * p2 / rho2)
    rho_s = rho2 * 0.5 * (gamma + 1.0) * m2 / (1.0 + 0.5 * (gamma - 1.0) * m2)
    v_s = a2 * 2.0 * (m2 - 1.0) / ((gamma + 1.0) * mach)
    p_s = p2 * (2.0 * gamma * m2 - gamma + 1.0) / (gamma + 1.0)
    return rho_s, v_s, p_s
