"""Staggered Cartesian meshes, per-cell DOF storage and ghost filling.

Two interleaved cell systems cover the domain.  With N the number of
"staggered" cells of width dx on [x_l, x_r]:

* staggered parity: cells s = 1..N spanning [x_l + (s-1) dx, x_l + s dx],
  centers at half-integer multiples of dx;
* original parity: cells i = 1..N+1 centered at x_l + (i-1) dx; the two end
  cells straddle the domain boundary.

The solution alternates between the parities every half time-step.  DOF
arrays carry one ghost cell per side: shape (ncomp, N_int + 2, ndof) in 1D
and (ncomp, NX_int + 2, NY_int + 2, ndof) in 2D, ghost slots at index 0 and
-1 of each cell axis.  DOF slot order matches
``jet_spec(sdim, p).spatial_indices``.

Destination cells of a half-step read only their bracketing source cells:
going original -> staggered no ghosts are consumed; going staggered ->
original the two boundary destinations read one ghost each, which is where
the boundary conditions enter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .jets import jet_spec


class Parity(Enum):
    ORIGINAL = "original"
    STAGGERED = "staggered"


def other_parity(parity):
    return Parity.ORIGINAL if parity is Parity.STAGGERED else Parity.STAGGERED


def source_offset(parity):
    """Array index of the left/lower source of destination interior cell 0.

    Destination interior cell d of a half-step is assembled from source
    array cells (off + d, off + d + 1) per direction: updating the original
    parity shifts down by one ghost (off = 0), updating the staggered
    parity uses interior sources only (off = 1).
    """
    return 1 if parity in (Parity.ORIGINAL,) else 0


def halfstep_source_indices(parity, d):
    """Source array indices bracketing destination interior cell ``d``.

    ``parity`` names the active (source) parity.  Original cell centers are
    the vertices of the staggered destination cell and vice versa.
    """
    off = 1 if parity is Parity.ORIGINAL else 0
    return off + d, off + d + 1


@dataclass(frozen=True)
class Mesh1D:
    x_l: float
    x_r: float
    n: int  # staggered (exactly covering) cell count

    @property
    def dx(self):
        return (self.x_r - self.x_l) / self.n

    def ncells(self, parity):
        return self.n if parity is Parity.STAGGERED else self.n + 1

    def centers(self, parity, ghosts=False):
        if parity is Parity.STAGGERED:
            idx = np.arange(-1, self.n + 1) if ghosts else np.arange(self.n)
            return self.x_l + (idx + 0.5) * self.dx
        idx = np.arange(-1, self.n + 2) if ghosts else np.arange(self.n + 1)
        return self.x_l + idx * self.dx


@dataclass(frozen=True)
class Mesh2D:
    x_l: float
    x_r: float
    y_b: float
    y_t: float
    nx: int
    ny: int

    @property
    def dx(self):
        return (self.x_r - self.x_l) / self.nx

    @property
    def dy(self):
        return (self.y_t - self.y_b) / self.ny

    def ncells(self, parity):
        if parity is Parity.STAGGERED:
            return self.nx, self.ny
        return self.nx + 1, self.ny + 1

    def centers(self, parity):
        if parity is Parity.STAGGERED:
            x = self.x_l + (np.arange(self.nx) + 0.5) * self.dx
            y = self.y_b + (np.arange(self.ny) + 0.5) * self.dy
        else:
            x = self.x_l + np.arange(self.nx + 1) * self.dx
            y = self.y_b + np.arange(self.ny + 1) * self.dy
        return x, y


@dataclass
class State1D:
    mesh: Mesh1D
    parity: Parity
    t: float
    p: int
    dofs: np.ndarray  # (ncomp, ncells+2, p+1), ghosts at cell index 0 and -1

    @property
    def ncomp(self):
        return self.dofs.shape[0]

    def interior(self):
        return self.dofs[:, 1:-1, :]

    def point_values(self):
        return self.dofs[:, 1:-1, 0]


@dataclass
class State2D:
    mesh: Mesh2D
    parity: Parity
    t: float
    p: int
    dofs: np.ndarray  # (ncomp, nx+2, ny+2, ndof)

    @property
    def ncomp(self):
        return self.dofs.shape[0]

    def interior(self):
        return self.dofs[:, 1:-1, 1:-1, :]

    def point_values(self):
        return self.dofs[:, 1:-1, 1:-1, 0]


def empty_state_1d(mesh, parity, t, p, ncomp):
    n = mesh.ncells(parity)
    return State1D(mesh, parity, t, p, np.zeros((ncomp, n + 2, p + 1)))


def empty_state_2d(mesh, parity, t, p, ncomp):
    nx, ny = mesh.ncells(parity)
    ndof = jet_spec(2, p).ndof
    return State2D(mesh, parity, t, p, np.zeros((ncomp, nx + 2, ny + 2, ndof)))


# --- boundary conditions -------------------------------------------------

def _mirror_factors_1d(p):
    return np.array([(-1.0) ** k for k in range(p + 1)])


def _mirror_factors_2d(p, axis):
    idx = jet_spec(2, p).spatial_indices
    return np.array([(-1.0) ** t[axis] for t in idx])


class Periodic:
    """Wrap-around copy; both members of a periodic pair must be periodic."""

    def fill_1d(self, dofs, mesh, parity, p, side, t):
        n_int = dofs.shape[1] - 2
        if side == "left":
            dofs[:, 0] = dofs[:, n_int - 1] if parity is Parity.ORIGINAL else dofs[:, n_int]
        else:
            dofs[:, -1] = dofs[:, 2] if parity is Parity.ORIGINAL else dofs[:, 1]

    def fill_2d(self, dofs, mesh, parity, p, side, t):
        axis = 1 if side in ("left", "right") else 2
        d = np.moveaxis(dofs, axis, 1)
        n_int = d.shape[1] - 2
        if side in ("left", "bottom"):
            d[:, 0] = d[:, n_int - 1] if parity is Parity.ORIGINAL else d[:, n_int]
        else:
            d[:, -1] = d[:, 2] if parity is Parity.ORIGINAL else d[:, 1]


class NonReflective:
    """Zeroth-order extrapolation: copy the nearest interior cell's DOFs."""

    def fill_1d(self, dofs, mesh, parity, p, side, t):
        if side == "left":
            dofs[:, 0] = dofs[:, 1]
        else:
            dofs[:, -1] = dofs[:, -2]

    def fill_2d(self, dofs, mesh, parity, p, side, t):
        axis = 1 if side in ("left", "right") else 2
        d = np.moveaxis(dofs, axis, 1)
        if side in ("left", "bottom"):
            d[:, 0] = d[:, 1]
        else:
            d[:, -1] = d[:, -2]


class ReflectiveWall:
    """Mirror copy: normal momentum negated, odd normal derivatives flipped.

    ``normal_comp`` is the conserved component holding the wall-normal
    momentum.  On the original parity the straddling cell sits on the wall
    itself and is evolved by the scheme; the ghost mirrors the cell one
    spacing inside.
    """

    def __init__(self, normal_comp):
        self.normal_comp = normal_comp

    def _apply(self, ghost, src, factors):
        ghost[...] = src * factors
        ghost[self.normal_comp] *= -1.0

    def fill_1d(self, dofs, mesh, parity, p, side, t):
        fac = _mirror_factors_1d(p)
        inner = 1 if parity is Parity.STAGGERED else 2
        if side == "left":
            self._apply(dofs[:, 0], dofs[:, inner], fac)
        else:
            self._apply(dofs[:, -1], dofs[:, -1 - inner], fac)

    def fill_2d(self, dofs, mesh, parity, p, side, t):
        axis = 1 if side in ("left", "right") else 2
        fac = _mirror_factors_2d(p, axis - 1)
        d = np.moveaxis(dofs, axis, 1)
        inner = 1 if parity is Parity.STAGGERED else 2
        if side in ("left", "bottom"):
            self._apply(d[:, 0], d[:, inner], fac)
        else:
            self._apply(d[:, -1], d[:, -1 - inner], fac)


class Dirichlet:
    """Prescribed conserved state with zero derivatives (inflow)."""

    def __init__(self, state):
        self.state = np.asarray(state, dtype=np.float64)

    def fill_1d(self, dofs, mesh, parity, p, side, t):
        sl = 0 if side == "left" else -1
        dofs[:, sl] = 0.0
        dofs[:, sl, 0] = self.state

    def fill_2d(self, dofs, mesh, parity, p, side, t):
        axis = 1 if side in ("left", "right") else 2
        d = np.moveaxis(dofs, axis, 1)
        sl = 0 if side in ("left", "bottom") else -1
        d[:, sl] = 0.0
        d[:, sl, ..., 0] = self.state[:, None]


@dataclass
class BoundaryConditions1D:
    left: object
    right: object


@dataclass
class BoundaryConditions2D:
    left: object
    right: object
    bottom: object
    top: object


def fill_ghosts(state, bcs, t=None):
    """Populate the ghost layer of ``state`` in place and return it.

    2D fills the x sides first, then the y sides across all columns
    including the freshly filled ghost columns, so corner ghosts obey the
    y rule applied to x-ghost data.  Idempotent for fixed (state, t).
    """
    if t is None:
        t = state.t
    if isinstance(state, State1D):
        bcs.left.fill_1d(state.dofs, state.mesh, state.parity, state.p, "left", t)
        bcs.right.fill_1d(state.dofs, state.mesh, state.parity, state.p, "right", t)
        return state
    bcs.left.fill_2d(state.dofs, state.mesh, state.parity, state.p, "left", t)
    bcs.right.fill_2d(state.dofs, state.mesh, state.parity, state.p, "right", t)
    bcs.bottom.fill_2d(state.dofs, state.mesh, state.parity, state.p, "bottom", t)
    bcs.top.fill_2d(state.dofs, state.mesh, state.parity, state.p, "top", t)
    return state


def cell_weights_1d(mesh, parity):
    """Quadrature weights of interior cells covering [x_l, x_r] exactly.

    Straddling end cells of the original parity count half; with these
    weights the conserved totals agree across parities.
    """
    n = mesh.ncells(parity)
    w = np.ones(n)
    if parity is Parity.ORIGINAL:
        w[0] = 0.5
        w[-1] = 0.5
    return w

def cell_weights_2d(mesh, parity):
    nx, ny = mesh.ncells(parity)
    wx = np.ones(nx)
    wy = np.ones(ny)
    if parity is Parity.ORIGINAL:
        wx[0] = wx[-1] = 0.5
        wy[0] = wy[-1] = 0.5
    return wx[:, None] * wy[None, :]
