"""One half-step of the 1D compact central scheme.

Every destination cell sits between two source cells whose centers are its
vertices.  The update is: (i) expand both source cells in space-time via
the Cauchy-Kovalewski recursion, (ii) new cell average = mean of the two
facing half-cell averages plus the difference of time-averaged vertex
fluxes, (iii) new derivatives by central differences of the time-expanded
vertex derivatives, from the highest order down, (iv) recover the center
point value from the average, (v) optionally limit.  Fluxes are evaluated
where the solution is continuous, so no Riemann problem is solved.

All functions are vectorized over a trailing/leading cell axis; the
``advance_half_step_1d`` driver runs the whole interior in a handful of
array operations.
"""

from __future__ import annotations

import numpy as np

from . import limfast
from . import limiter as lim
from . import tables
from .errors import PhysicsError
from .euler import Euler1D
from .jets import JetDivisionError, ck_1d, jet_spec
from .mesh import Parity, State1D, cell_weights_1d, other_parity, source_offset


def half_cell_averages(dofs, p):
    """(right-half, left-half) averages of the cell polynomial.

    ``dofs``: (..., p+1) scaled spatial derivatives at the cell center.
    """
    wr, wl = tables.half_weights_1d(p)
    return dofs @ wr, dofs @ wl


def time_averaged_flux(flux_jets, p):
    """Mean flux over the half-step at the cell center, from the flux jet."""
    return flux_jets @ tables.flux_time_avg_1d(p)


def cell_average_update(left_dofs, right_dofs, fbar_left, fbar_right, nu):
    """New average on the cell spanning the two source centers."""
    wr, wl = tables.half_weights_1d(left_dofs.shape[-1] - 1)
    return 0.5 * (left_dofs @ wr + right_dofs @ wl) + nu * (fbar_left - fbar_right)


def vertex_values(jets, p):
    """Time-expanded derivative values at the source center, per order k."""
    return jets @ tables.vertex_matrix_1d(p).T


def derivative_update(vl, vr, p):
    """New scaled derivatives from the two vertices, high order to low.

    ``vl``/``vr``: (..., p+1) vertex values of the derivatives of order k.
    Returns (..., p+1) with slot 0 zeroed (the point value comes from the
    average); slot k+1 is the central difference of the order-k vertex
    values minus the odd-order Taylor remainder carried by already-updated
    higher derivatives.
    """
    corr = tables.deriv_corrections_1d(p)
    out = np.zeros_like(vl)
    for k in range(p - 1, -1, -1):
        val = vr[..., k] - vl[..., k]
        for src, coef in corr[k]:
            val = val - coef * out[..., src]
        out[..., k + 1] = val
    return out


def recover_point_value(ubar, derivs, p):
    """Center point value from the cell average and even derivatives."""
    return ubar - derivs @ tables.recover_weights_1d(p)


def _role_weights(ndest, n_src, off, w_dest):
    """Per-source weights of the conservation budget.

    For source array cell s, its right-half average feeds destination
    s - off (where it acts as left source) and its left-half average feeds
    destination s - off - 1; its vertex flux enters those two destinations
    with opposite signs.  Returns (w_left_role, w_right_role) arrays over
    source array cells, zero where the destination does not exist.
    """
    big = np.zeros(ndest + 4)
    big[2 : 2 + ndest] = w_dest
    s = np.arange(n_src)
    return big[s - off + 2], big[s - off + 1]


def expected_totals(dofs, fbar, mesh, parity, dt):
    """Conserved totals the destination parity must show after the step.

    Computed from source-side data only (half-cell averages and
    time-averaged vertex fluxes, ghosts included): interior flux terms
    telescope away analytically, so comparing against the actual new
    totals verifies conservation with boundary transport accounted for.
    """
    p = dofs.shape[-1] - 1
    nu = dt / mesh.dx
    off = source_offset(parity)
    dest = other_parity(parity)
    ndest = mesh.ncells(dest)
    w_dest = cell_weights_1d(mesh, dest)
    wl_role, wr_role = _role_weights(ndest, dofs.shape[1], off, w_dest)
    ur, ul = half_cell_averages(dofs, p)
    acc = (
        0.5 * (wl_role * ur + wr_role * ul) + nu * (wl_role - wr_role) * fbar
    )
    return mesh.dx * acc.sum(axis=1)


def totals(state):
    """Conserved totals over [x_l, x_r] (straddling end cells count half)."""
    ubar = state.interior() @ tables.avg_weights_1d(state.p)
    w = cell_weights_1d(state.mesh, state.parity)
    return state.mesh.dx * (ubar * w).sum(axis=1)


def _limit(dofs, ubar, vl0, vr0, physics, cfg, p, t_new):
    """Weighted limiting pass, characteristic for gas dynamics."""
    params = cfg.limiter_params
    try:
        if cfg.characteristic and isinstance(physics, Euler1D):
            got = limfast.limit_euler_1d(dofs, ubar, vl0, vr0, physics.gamma, params, p)
            if got is not None:
                return got
        eig = None
        if cfg.characteristic:
            es = physics.eigensystem(ubar)
            if es is not None:
                eig = (es[1], es[2])
    except PhysicsError as e:
        raise PhysicsError(
            "inadmissible cell average in characteristic limiter",
            cell=e.cell,
            time=t_new,
        ) from e
    return lim.limit_cells_1d(dofs, ubar, vl0, vr0, p, params, eig=eig)


def advance_half_step_1d(state, physics, bcs, cfg, dt, monitor=False):
    """Advance one half-step to the other parity.

    Ghost cells of ``state`` must be filled.  Returns (new_state, diag);
    ``diag['expected_totals']`` carries the conservation budget when
    ``monitor`` is set.
    """
    p = state.p
    spec = jet_spec(1, p)
    mesh = state.mesh
    nu = dt / mesh.dx
    try:
        fused = getattr(physics, "ck_fused_1d", None)
        got = fused(state.dofs, nu, spec) if fused is not None else None
        if got is None:
            got = ck_1d(state.dofs, physics.flux_jets, nu, spec)
        jets, fjets = got
    except JetDivisionError as e:
        cell = np.unravel_index(e.flat_cell, e.cell_shape) if e.flat_cell is not None else None
        raise PhysicsError("flux expansion failed (vanishing density?)", cell=cell, time=state.t) from e

    off = source_offset(state.parity)
    dest_parity = other_parity(state.parity)
    ndest = mesh.ncells(dest_parity)

    ur, ul = half_cell_averages(state.dofs, p)
    fbar = time_averaged_flux(fjets, p)
    ls = slice(off, off + ndest)
    rs = slice(off + 1, off + 1 + ndest)
    ubar = 0.5 * (ur[:, ls] + ul[:, rs]) + nu * (fbar[:, ls] - fbar[:, rs])

    V = vertex_values(jets, p)
    vl, vr = V[:, ls], V[:, rs]
    derivs = derivative_update(vl, vr, p)
    point = recover_point_value(ubar, derivs, p)

    new_dofs = np.zeros((state.ncomp, ndest + 2, p + 1))
    inner = derivs
    inner[..., 0] = point
    if cfg.weighted:
        inner = _limit(inner, ubar, vl[..., 0], vr[..., 0], physics, cfg, p, state.t + dt)
    new_dofs[:, 1:-1, :] = inner

    diag = {}
    if monitor:
        diag["expected_totals"] = expected_totals(state.dofs, fbar, mesh, state.parity, dt)
    new_state = State1D(mesh, dest_parity, state.t + dt, p, new_dofs)
    return new_state, diag
