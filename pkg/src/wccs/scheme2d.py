"""One half-step of the 2D compact central scheme.

The destination cell has the four surrounding source cell centers as its
vertices.  Its new average combines the four facing quarter-cell averages
with side-and-time averaged fluxes through the four faces, each face
split at the source centers so every flux evaluation happens where the
solution is smooth.  Derivatives follow from central differences of the
time-expanded vertex derivatives, descending in total order; the two
routes to a mixed derivative are averaged.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import limfast
from . import limiter as lim
from . import tables
from .errors import PhysicsError
from .euler import Euler2D
from .jets import JetDivisionError, ck_2d, jet_spec
from .mesh import Parity, State2D, cell_weights_2d, fill_ghosts, other_parity, source_offset
from .scheme1d import _role_weights


@lru_cache(maxsize=None)
def _quarter_matrix(p):
    return np.ascontiguousarray(np.stack(tables.quarter_weights_2d(p), axis=1))


@lru_cache(maxsize=None)
def _flux_matrices(p):
    fU, fD, gR, gL = tables.flux_profile_weights_2d(p)
    return (
        np.ascontiguousarray(np.stack([fU, fD], axis=1)),
        np.ascontiguousarray(np.stack([gR, gL], axis=1)),
    )


def quarter_averages(dofs, p):
    """(RU, RD, LU, LD) quarter-cell averages; first letter is the x half."""
    qa = dofs @ _quarter_matrix(p)
    return qa[..., 0], qa[..., 1], qa[..., 2], qa[..., 3]


def flux_side_averages(fjets, gjets, p):
    """(fU, fD, gR, gL) side-and-time averaged fluxes at source centers."""
    wf, wg = _flux_matrices(p)
    fa = fjets @ wf
    ga = gjets @ wg
    return fa[..., 0], fa[..., 1], ga[..., 0], ga[..., 1]


def vertex_values_2d(jets, p):
    """Time-expanded derivative values at source centers, per (k, l)."""
    return jets @ tables.vertex_matrix_2d(p).T


def cell_average_update_2d(quads, fsides, nu_x, nu_y, sl):
    """New average from sliced quarter averages and flux side averages.

    ``quads`` = (RU, RD, LU, LD) over sources, ``fsides`` = (fU, fD, gR,
    gL), ``sl`` = (s00, s10, s01, s11) index slices mapping destinations to
    their four source cells (lower-left, lower-right, upper-left,
    upper-right in (x, y)).
    """
    ru, rd, lu, ld = quads
    fU, fD, gR, gL = fsides
    s00, s10, s01, s11 = sl
    avg = 0.25 * (ru[s00] + rd[s01] + lu[s10] + ld[s11])
    xflux = 0.5 * nu_x * (fU[s00] + fD[s01] - fU[s10] - fD[s11])
    yflux = 0.5 * nu_y * (gR[s00] + gL[s10] - gR[s01] - gL[s11])
    return avg + xflux + yflux


def derivative_update_2d(v00, v10, v01, v11, p):
    """New scaled derivatives, total order P down to 1; slot (0,0) zeroed.

    x-derivatives difference the two right vertices against the two left
    ones, y-derivatives the two upper against the two lower; both subtract
    the Taylor remainders carried by already-updated higher derivatives.
    Mixed derivatives reachable via both routes take the arithmetic mean.
    """
    spec = jet_spec(2, p)
    corr = tables.deriv_corrections_2d(p)
    out = np.zeros_like(v00)
    for o in range(p, 0, -1):
        for tk, tl in spec.spatial_indices:
            if tk + tl != o:
                continue
            vals = []
            if tk >= 1:
                q = spec.dof_slot[(tk - 1, tl)]
                val = 0.5 * (v10[..., q] + v11[..., q] - v00[..., q] - v01[..., q])
                for src, coef in corr[(tk - 1, tl, 0)]:
                    val = val - coef * out[..., src]
                vals.append(val)
            if tl >= 1:
                q = spec.dof_slot[(tk, tl - 1)]
                val = 0.5 * (v01[..., q] + v11[..., q] - v00[..., q] - v10[..., q])
                for src, coef in corr[(tk, tl - 1, 1)]:
                    val = val - coef * out[..., src]
                vals.append(val)
            tgt = spec.dof_slot[(tk, tl)]
            out[..., tgt] = vals[0] if len(vals) == 1 else 0.5 * (vals[0] + vals[1])
    return out


def recover_point_value_2d(ubar, derivs, p):
    """Center point value from the cell average and even derivative pairs."""
    return ubar - derivs @ tables.recover_weights_2d(p)


def totals(state):
    """Conserved totals over the domain (edge/corner cells weighted)."""
    ubar = state.interior() @ tables.avg_weights_2d(state.p)
    w = cell_weights_2d(state.mesh, state.parity)
    return state.mesh.dx * state.mesh.dy * (ubar * w).sum(axis=(1, 2))


def expected_totals(dofs, fsides, mesh, parity, dt):
    """Conservation budget of one half-step from source-side data only."""
    p = _degree(dofs)
    fU, fD, gR, gL = fsides
    dest = other_parity(parity)
    off = source_offset(parity)
    mx, my = mesh.ncells(dest)
    wx = np.ones(mx)
    wy = np.ones(my)
    if dest is Parity.ORIGINAL:
        wx[0] = wx[-1] = 0.5
        wy[0] = wy[-1] = 0.5
    wlx, wrx = _role_weights(mx, dofs.shape[1], off, wx)
    wly, wry = _role_weights(my, dofs.shape[2], off, wy)
    ru, rd, lu, ld = quarter_averages(dofs, p)
    nux = dt / mesh.dx
    nuy = dt / mesh.dy

    def wsum(arr, ws, wt):
        return (arr @ wt) @ ws

    cov = 0.25 * (
        wsum(ru, wlx, wly) + wsum(rd, wlx, wry)
        + wsum(lu, wrx, wly) + wsum(ld, wrx, wry)
    )
    dxr = wlx - wrx
    dyr = wly - wry
    flx = 0.5 * nux * (wsum(fU, dxr, wly) + wsum(fD, dxr, wry))
    fly = 0.5 * nuy * (wsum(gR, wlx, dyr) + wsum(gL, wrx, dyr))
    return mesh.dx * mesh.dy * (cov + flx + fly)


def _degree(dofs):
    ndof = dofs.shape[-1]
    for p in (1, 2, 3):
        if (p + 1) * (p + 2) // 2 == ndof:
            return p
    raise ValueError(f"cannot infer degree from {ndof} DOFs")


def _limit(dofs, ubar, verts, theta, physics, cfg, p, t_new):
    """Weighted limiting pass; rotated characteristic when theta is given."""
    params = cfg.limiter_params
    shape = dofs.shape
    try:
        if theta is not None and isinstance(physics, Euler2D):
            got = limfast.limit_euler_2d(
                dofs.reshape(shape[0], -1, shape[-1]),
                ubar.reshape(shape[0], -1),
                tuple(v.reshape(shape[0], -1) for v in verts),
                theta.reshape(-1),
                physics.gamma,
                params,
                p,
            )
            if got is not None:
                return got.reshape(shape)
        eig = None
        if theta is not None:
            es = physics.eigensystem(ubar, theta)
            if es is not None:
                eig = (es[1], es[2])
    except PhysicsError as e:
        raise PhysicsError(
            "inadmissible cell average in characteristic limiter",
            cell=e.cell,
            time=t_new,
        ) from e
    return lim.limit_cells_2d(dofs, ubar, verts, p, params, eig=eig)


def advance_half_step_2d(state, physics, bcs, cfg, dt, monitor=False):
    """Advance one half-step to the other parity (2D).

    Ghosts of ``state`` must be filled.  In weighted characteristic mode
    the freshly built state's ghosts are filled too, so the rotation
    direction (gradient of the energy density) has neighbors everywhere.
    """
    p = state.p
    spec = jet_spec(2, p)
    mesh = state.mesh
    nux = dt / mesh.dx
    nuy = dt / mesh.dy
    try:
        fused = getattr(physics, "ck_fused_2d", None)
        got = fused(state.dofs, nux, nuy, spec) if fused is not None else None
        if got is None:
            got = ck_2d(state.dofs, physics.flux_jets, nux, nuy, spec)
        jets, fjets, gjets = got
    except JetDivisionError as e:
        cell = np.unravel_index(e.flat_cell, e.cell_shape) if e.flat_cell is not None else None
        raise PhysicsError("flux expansion failed (vanishing density?)", cell=cell, time=state.t) from e

    off = source_offset(state.parity)
    dest_parity = other_parity(state.parity)
    mx, my = mesh.ncells(dest_parity)
    sx0 = slice(off, off + mx)
    sx1 = slice(off + 1, off + 1 + mx)
    sy0 = slice(off, off + my)
    sy1 = slice(off + 1, off + 1 + my)
    s00 = (slice(None), sx0, sy0)
    s10 = (slice(None), sx1, sy0)
    s01 = (slice(None), sx0, sy1)
    s11 = (slice(None), sx1, sy1)

    quads = quarter_averages(state.dofs, p)
    fsides = flux_side_averages(fjets, gjets, p)
    ubar = cell_average_update_2d(quads, fsides, nux, nuy, (s00, s10, s01, s11))

    V = vertex_values_2d(jets, p)
    v00, v10, v01, v11 = V[s00], V[s10], V[s01], V[s11]
    derivs = derivative_update_2d(v00, v10, v01, v11, p)
    derivs[..., 0] = recover_point_value_2d(ubar, derivs, p)

    new_dofs = np.zeros((state.ncomp, mx + 2, my + 2, spec.ndof))
    new_dofs[:, 1:-1, 1:-1, :] = derivs
    new_state = State2D(mesh, dest_parity, state.t + dt, p, new_dofs)

    if cfg.weighted:
        verts = (v00[..., 0], v10[..., 0], v11[..., 0], v01[..., 0])
        theta = None
        if cfg.characteristic and getattr(physics, "phi_component", None) is not None:
            fill_ghosts(new_state, bcs)
            ubar_all = new_state.dofs @ tables.avg_weights_2d(p)
            phi = ubar_all[physics.phi_component]
            gx = (phi[2:, 1:-1] - phi[:-2, 1:-1]) / (2.0 * mesh.dx)
            gy = (phi[1:-1, 2:] - phi[1:-1, :-2]) / (2.0 * mesh.dy)
            theta = lim.rotation_angle(gx, gy, phi[1:-1, 1:-1])
        limited = _limit(derivs, ubar, verts, theta, physics, cfg, p, state.t + dt)
        new_state.dofs[:, 1:-1, 1:-1, :] = limited

    diag = {}
    if monitor:
        diag["expected_totals"] = expected_totals(state.dofs, fsides, mesh, state.parity, dt)
    return new_state, diag
