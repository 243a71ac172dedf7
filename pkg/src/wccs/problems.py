"""Benchmark case catalog: initial data, boundary conditions, exact solutions.

Runs start on the mesh system that covers the domain exactly, so the
straight discontinuities of the shock cases (Sod interface, 2D Riemann
axes, shocked-layer edge, reflecting-wall foot) fall on cell faces at the
default resolutions.  Smooth fields are initialized with their analytic
scaled derivatives at cell centers (generated symbolically once per case
and degree); cells whose interior contains a breakpoint of a piecewise
definition take the center value with zero derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, UnsupportedError
from .euler import Euler1D, Euler2D, normal_shock_state
from .jets import jet_spec
from .mesh import (
    BoundaryConditions1D,
    BoundaryConditions2D,
    Dirichlet,
    Mesh1D,
    Mesh2D,
    NonReflective,
    Parity,
    Periodic,
    ReflectiveWall,
    State1D,
    State2D,
)
from .physics import LinearAdvection1D, LinearAdvection2D

GAMMA = 1.4


# --- symbolic derivative generation ---------------------------------------

@lru_cache(maxsize=None)
def _lambdas_1d(exprs_key, p):
    """Derivative evaluators d^k/dx^k of sympy expressions, k = 0..p."""
    import sympy as sp

    x = sp.symbols("x")
    exprs = [sp.sympify(e) for e in exprs_key]
    out = []
    for e in exprs:
        row = []
        for k in range(p + 1):
            row.append(sp.lambdify(x, sp.diff(e, x, k), "numpy"))
        out.append(row)
    return out


@lru_cache(maxsize=None)
def _lambdas_2d(exprs_key, p):
    """Mixed derivative evaluators of sympy expressions, k + l <= p."""
    import sympy as sp

    x, y = sp.symbols("x y")
    spec = jet_spec(2, p)
    exprs = [sp.sympify(e) for e in exprs_key]
    out = []
    for e in exprs:
        row = []
        for k, l in spec.spatial_indices:
            row.append(sp.lambdify((x, y), sp.diff(e, x, k, y, l), "numpy"))
        out.append(row)
    return out


def _eval_lambda(f, *args):
    got = np.asarray(f(*args), dtype=np.float64)
    if got.ndim == 0:
        got = np.full(np.shape(args[0]), float(got))
    return got


# --- 1D piecewise initialization -------------------------------------------

@dataclass(frozen=True)
class Region1D:
    lo: float
    hi: float
    exprs: tuple  # sympy-parsable strings, one per conserved component


def _init_piecewise_1d(mesh, p, regions, ncomp, breakpoints):
    n = mesh.ncells(Parity.STAGGERED)
    c = mesh.centers(Parity.STAGGERED)
    dx = mesh.dx
    interior = np.zeros((ncomp, n, p + 1))
    for reg in regions:
        mask = (c >= reg.lo) & (c < reg.hi)
        if not mask.any():
            continue
        lams = _lambdas_1d(reg.exprs, p)
        for comp in range(ncomp):
            for k in range(p + 1):
                interior[comp, mask, k] = _eval_lambda(lams[comp][k], c[mask]) * dx**k
    # flatten cells that contain a breakpoint strictly inside
    eps = 1e-12 * dx
    for b in breakpoints:
        inside = (c - dx / 2 + eps < b) & (b < c + dx / 2 - eps)
        interior[:, inside, 1:] = 0.0
    dofs = np.zeros((ncomp, n + 2, p + 1))
    dofs[:, 1:-1] = interior
    return State1D(mesh, Parity.STAGGERED, 0.0, p, dofs)


def _region_values(regions, xs):
    """Point values of a piecewise definition (component-wise)."""
    ncomp = len(regions[0].exprs)
    out = np.zeros((ncomp, *np.shape(xs)))
    for reg in regions:
        mask = (xs >= reg.lo) & (xs < reg.hi)
        if not mask.any():
            continue
        lams = _lambdas_1d(reg.exprs, 0)
        for comp in range(ncomp):
            out[comp][mask] = _eval_lambda(lams[comp][0], np.asarray(xs)[mask])
    return out


# --- problem description ----------------------------------------------------

@dataclass
class Problem:
    case_id: str
    description: str
    sdim: int
    physics: object
    domain: tuple
    default_cells: tuple
    t_end: float
    _init: object = field(repr=False)
    _bcs: object = field(repr=False)
    _exact: object = field(default=None, repr=False)
    breakpoints: tuple = ()

    def make_mesh(self, cells=None):
        if cells is None:
            cells = self.default_cells
        if self.sdim == 1:
            (n,) = cells if isinstance(cells, tuple) else (cells,)
            return Mesh1D(self.domain[0], self.domain[1], int(n))
        nx, ny = cells
        return Mesh2D(*self.domain, int(nx), int(ny))

    def make_bcs(self):
        return self._bcs()

    def init_state(self, mesh, p):
        return self._init(mesh, p)

    @property
    def has_exact(self):
        return self._exact is not None

    def exact(self, coords, t):
        """Conserved point values of the exact solution at time t."""
        if self._exact is None:
            raise UnsupportedError(f"case {self.case_id!r} has no exact solution")
        return self._exact(coords, t)


def _wrap(x, lo, hi):
    return lo + np.mod(x - lo, hi - lo)


# --- scalar advection cases -------------------------------------------------

def _advect_sine():
    phys = LinearAdvection1D(1.0)
    regions = (Region1D(-1.0, 1.0 + 1e-9, ("sin(pi*x)",)),)

    def init(mesh, p):
        return _init_piecewise_1d(mesh, p, regions, 1, ())

    def exact(xs, t):
        return np.sin(np.pi * (xs - t))[None, :]

    return Problem(
        "advect-sine", "sinusoidal wave, unit-speed advection, periodic",
        1, phys, (-1.0, 1.0), (200,), 2.0,
        _init=init,
        _bcs=lambda: BoundaryConditions1D(Periodic(), Periodic()),
        _exact=exact,
    )


_COMPOSITE = None


def _composite_regions():
    """Composite wave: Gaussian triple, square, triangle, half-ellipse.

    The half-ellipse triple has interior support edges (the two shifted
    members vanish inside the nominal interval), so that interval is split
    at them and every piece is a plain analytic expression.
    """
    global _COMPOSITE
    if _COMPOSITE is not None:
        return _COMPOSITE
    a, z, delta, alpha = 0.5, -0.7, 0.005, 10.0
    beta = math.log(2.0) / (36.0 * delta**2)

    def G(center):
        return f"exp(-{beta!r}*(x-({center!r}))**2)"

    def F(center):
        return f"sqrt(1 - {alpha!r}**2*(x-({center!r}))**2)"

    gauss = f"1.0/6.0*({G(z - delta)} + 4*{G(z)} + {G(z + delta)})"
    f1, f2, f3 = F(a - delta), F(a), F(a + delta)
    edge = alpha ** -1  # half-width of each ellipse member
    lo1, hi1 = a - delta - edge, a - delta + edge  # support of f1
    lo3, hi3 = a + delta - edge, a + delta + edge  # support of f3
    _COMPOSITE = (
        Region1D(-1.0, -0.8, ("0",)),
        Region1D(-0.8, -0.6, (gauss,)),
        Region1D(-0.6, -0.4, ("0",)),
        Region1D(-0.4, -0.2, ("1",)),
        Region1D(-0.2, 0.0, ("0",)),
        Region1D(0.0, 0.1, ("10*x",)),
        Region1D(0.1, 0.2, ("2 - 10*x",)),
        Region1D(0.2, 0.4, ("0",)),
        Region1D(0.4, lo3, (f"1.0/6.0*({f1} + 4*{f2})",)),
        Region1D(lo3, hi1, (f"1.0/6.0*({f1} + 4*{f2} + {f3})",)),
        Region1D(hi1, 0.6, (f"1.0/6.0*(4*{f2} + {f3})",)),
        Region1D(0.6, 1.0 + 1e-9, ("0",)),
    )
    return _COMPOSITE


def _advect_composite():
    phys = LinearAdvection1D(1.0)
    breakpoints = (-0.8, -0.6, -0.4, -0.2, 0.0, 0.1, 0.2, 0.4, 0.405, 0.595, 0.6)

    def init(mesh, p):
        return _init_piecewise_1d(mesh, p, _composite_regions(), 1, breakpoints)

    def exact(xs, t):
        return _region_values(_composite_regions(), _wrap(xs - t, -1.0, 1.0))

    return Problem(
        "advect-composite",
        "Gaussians, square, triangle and half-ellipse under advection",
        1, phys, (-1.0, 1.0), (400,), 12.0,
        _init=init,
        _bcs=lambda: BoundaryConditions1D(Periodic(), Periodic()),
        _exact=exact,
        breakpoints=breakpoints,
    )


# --- 1D Euler cases ----------------------------------------------------------

def _const_exprs_euler1d(rho, u, p):
    E = p / (GAMMA - 1.0) + 0.5 * rho * u * u
    return (repr(rho), repr(rho * u), repr(E))


def _sod():
    gas = Euler1D(GAMMA)

    regions = (
        Region1D(0.0, 1.0, _const_exprs_euler1d(1.0, 0.0, 1.0)),
        Region1D(1.0, 2.0 + 1e-9, _const_exprs_euler1d(0.125, 0.0, 0.1)),
    )

    def init(mesh, p):
        return _init_piecewise_1d(mesh, p, regions, 3, (1.0,))

    return Problem(
        "sod", "Sod shock tube", 1, gas, (0.0, 2.0), (200,), 0.4,
        _init=init,
        _bcs=lambda: BoundaryConditions1D(NonReflective(), NonReflective()),
        breakpoints=(1.0,),
    )


def _titarev_toro():
    gas = Euler1D(GAMMA)
    rho_r = "1 + 0.1*sin(20*pi*x)"
    e_r = repr(1.0 / (GAMMA - 1.0))
    regions = (
        Region1D(-5.0, -4.5, _const_exprs_euler1d(1.515695, 0.523346, 1.805)),
        Region1D(-4.5, 5.0 + 1e-9, (rho_r, "0", e_r)),
    )

    def init(mesh, p):
        return _init_piecewise_1d(mesh, p, regions, 3, (-4.5,))

    return Problem(
        "titarev-toro",
        "high-frequency entropy wave hit by a Mach 1.1 shock",
        1, gas, (-5.0, 5.0), (2000,), 5.0,
        _init=init,
        _bcs=lambda: BoundaryConditions1D(NonReflective(), NonReflective()),
        breakpoints=(-4.5,),
    )


# --- 2D Euler cases ----------------------------------------------------------

VORTEX_STRENGTH = 5.0


@lru_cache(maxsize=None)
def _vortex_exprs():
    psi = VORTEX_STRENGTH
    g = GAMMA
    du = f"-({psi})/(2*pi)*exp(0.5*(1 - x**2 - y**2))*y"
    dv = f"({psi})/(2*pi)*exp(0.5*(1 - x**2 - y**2))*x"
    dT = f"-({g - 1.0})*({psi})**2/(8*{g}*pi**2)*exp(1 - x**2 - y**2)"
    T = f"(1 + {dT})"
    rho = f"{T}**({1.0 / (g - 1.0)})"
    u = f"(1 + {du})"
    v = f"(1 + {dv})"
    p = f"({rho}*{T})"
    E = f"({p}/({g - 1.0}) + 0.5*{rho}*({u}**2 + {v}**2))"
    return (rho, f"({rho}*{u})", f"({rho}*{v})", E)


def _init_smooth_2d(mesh, p, exprs, ncomp):
    nx, ny = mesh.ncells(Parity.STAGGERED)
    cx, cy = mesh.centers(Parity.STAGGERED)
    X, Y = np.meshgrid(cx, cy, indexing="ij")
    spec = jet_spec(2, p)
    lams = _lambdas_2d(exprs, p)
    interior = np.zeros((ncomp, nx, ny, spec.ndof))
    for comp in range(ncomp):
        for q, (k, l) in enumerate(spec.spatial_indices):
            interior[comp, :, :, q] = (
                _eval_lambda(lams[comp][q], X, Y) * mesh.dx**k * mesh.dy**l
            )
    dofs = np.zeros((ncomp, nx + 2, ny + 2, spec.ndof))
    dofs[:, 1:-1, 1:-1] = interior
    return State2D(mesh, Parity.STAGGERED, 0.0, p, dofs)


def vortex_pointwise(gas, xs, ys):
    """Conserved vortex fields at points (vectorized oracle/exact kernel)."""
    psi = VORTEX_STRENGTH
    g = gas.gamma
    r2 = xs * xs + ys * ys
    du = -psi / (2 * np.pi) * np.exp(0.5 * (1 - r2)) * ys
    dv = psi / (2 * np.pi) * np.exp(0.5 * (1 - r2)) * xs
    dT = -(g - 1) * psi**2 / (8 * g * np.pi**2) * np.exp(1 - r2)
    T = 1.0 + dT
    rho = T ** (1.0 / (g - 1.0))
    p = rho * T
    return gas.conserved(rho, 1.0 + du, 1.0 + dv, p)


def _vortex():
    gas = Euler2D(GAMMA)

    def init(mesh, p):
        return _init_smooth_2d(mesh, p, _vortex_exprs(), 4)

    def exact(coords, t):
        xs, ys = coords
        return vortex_pointwise(gas, _wrap(xs - t, -5.0, 5.0), _wrap(ys - t, -5.0, 5.0))

    return Problem(
        "vortex", "isentropic vortex in a uniform diagonal stream, periodic",
        2, gas, (-5.0, 5.0, -5.0, 5.0), (100, 100), 2.0,
        _init=init,
        _bcs=lambda: BoundaryConditions2D(*(Periodic() for _ in range(4))),
        _exact=exact,
    )


def _init_quadrants(mesh, p, states):
    """Four constant conserved states by quadrant sign of the cell center.

    ``states``: dict {(sx, sy): conserved vector} with sx, sy = +-1.
    """
    nx, ny = mesh.ncells(Parity.STAGGERED)
    cx, cy = mesh.centers(Parity.STAGGERED)
    X, Y = np.meshgrid(cx, cy, indexing="ij")
    spec = jet_spec(2, p)
    ncomp = 4
    interior = np.zeros((ncomp, nx, ny, spec.ndof))
    for (sx, sy), U in states.items():
        mask = ((X > 0) if sx > 0 else (X < 0)) & ((Y > 0) if sy > 0 else (Y < 0))
        for comp in range(ncomp):
            interior[comp, :, :, 0][mask] = U[comp]
    dofs = np.zeros((ncomp, nx + 2, ny + 2, spec.ndof))
    dofs[:, 1:-1, 1:-1] = interior
    return State2D(mesh, Parity.STAGGERED, 0.0, p, dofs)


def _riemann_2d(case_id, description, prim_by_quadrant, t_end):
    gas = Euler2D(GAMMA)
    states = {
        q: gas.conserved(*prim) for q, prim in prim_by_quadrant.items()
    }

    def init(mesh, p):
        return _init_quadrants(mesh, p, states)

    return Problem(
        case_id, description, 2, gas, (-1.0, 1.0, -1.0, 1.0), (300, 300), t_end,
        _init=init,
        _bcs=lambda: BoundaryConditions2D(*(NonReflective() for _ in range(4))),
        breakpoints=(0.0,),
    )


def _rp1():
    return _riemann_2d(
        "rp1", "four-shock Riemann problem (double Mach reflections)",
        {
            (-1, -1): (0.138, 1.206, 1.206, 0.029),
            (-1, +1): (0.5323, 1.206, 0.0, 0.3),
            (+1, +1): (1.5, 0.0, 0.0, 1.5),
            (+1, -1): (0.5323, 0.0, 1.206, 0.3),
        },
        1.1,
    )


def _rp2():
    return _riemann_2d(
        "rp2", "four-contact Riemann problem (spiral)",
        {
            (-1, -1): (1.0, -0.75, 0.5, 1.0),
            (-1, +1): (2.0, 0.75, 0.5, 1.0),
            (+1, +1): (1.0, 0.75, -0.5, 1.0),
            (+1, -1): (3.0, -0.75, -0.5, 1.0),
        },
        1.0,
    )


# --- double Mach reflection ---------------------------------------------------

DMR_SHOCK_FOOT = 1.0 / 6.0


def dmr_states(gas):
    pre = gas.conserved(1.4, 0.0, 0.0, 1.0)
    s60, c60 = math.sin(math.pi / 3.0), math.cos(math.pi / 3.0)
    post = gas.conserved(8.0, 8.25 * s60, -8.25 * c60, 116.5)
    return pre, post


def dmr_shock_x_top(t):
    """Abscissa where the oblique shock crosses the top boundary y = 1."""
    return DMR_SHOCK_FOOT + (1.0 + 20.0 * t) / math.sqrt(3.0)


def _ghost_x_positions(dofs, mesh, parity):
    """Cell-center abscissae of every x index including the ghost columns."""
    nx = dofs.shape[1] - 2
    if parity is Parity.STAGGERED:
        return mesh.x_l + (np.arange(-1, nx + 1) + 0.5) * mesh.dx
    return mesh.x_l + np.arange(-1, nx + 1) * mesh.dx


class DMRTop:
    """Exact pre/post-shock state above the domain, following the shock."""

    def __init__(self, gas):
        self.pre, self.post = dmr_states(gas)

    def fill_2d(self, dofs, mesh, parity, p, side, t):
        assert side == "top"
        gx = _ghost_x_positions(dofs, mesh, parity)
        post_mask = gx < dmr_shock_x_top(t)
        dofs[:, :, -1] = 0.0
        dofs[:, post_mask, -1, 0] = self.post[:, None]
        dofs[:, ~post_mask, -1, 0] = self.pre[:, None]


class DMRBottom:
    """Inflow continuation left of the wall foot, reflecting wall right of it."""

    def __init__(self):
        self.wall = ReflectiveWall(normal_comp=2)
        self.copy = NonReflective()

    def fill_2d(self, dofs, mesh, parity, p, side, t):
        assert side == "bottom"
        gx = _ghost_x_positions(dofs, mesh, parity)
        copy_vals = dofs[:, :, 1].copy()
        self.wall.fill_2d(dofs, mesh, parity, p, side, t)
        mask = gx <= DMR_SHOCK_FOOT
        dofs[:, mask, 0] = copy_vals[:, mask]


def _dmr():
    gas = Euler2D(GAMMA)
    pre, post = dmr_states(gas)

    def init(mesh, p):
        nx, ny = mesh.ncells(Parity.STAGGERED)
        cx, cy = mesh.centers(Parity.STAGGERED)
        X, Y = np.meshgrid(cx, cy, indexing="ij")
        spec = jet_spec(2, p)
        interior = np.zeros((4, nx, ny, spec.ndof))
        pre_mask = X > DMR_SHOCK_FOOT + Y / math.sqrt(3.0)
        for comp in range(4):
            interior[comp, :, :, 0] = np.where(pre_mask, pre[comp], post[comp])
        dofs = np.zeros((4, nx + 2, ny + 2, spec.ndof))
        dofs[:, 1:-1, 1:-1] = interior
        return State2D(mesh, Parity.STAGGERED, 0.0, p, dofs)

    def bcs():
        return BoundaryConditions2D(
            Dirichlet(post), NonReflective(), DMRBottom(), DMRTop(gas)
        )

    return Problem(
        "dmr", "double Mach reflection of a Mach 10 oblique shock",
        2, gas, (0.0, 4.0, 0.0, 1.0), (480, 120), 0.28,
        _init=init,
        _bcs=bcs,
        breakpoints=(DMR_SHOCK_FOOT,),
    )


# --- Richtmyer-Meshkov ---------------------------------------------------------

def rmi_states(gas):
    p0 = 1.0 / gas.gamma
    light = gas.conserved(0.1, 0.0, 0.0, p0)
    heavy = gas.conserved(1.0, 0.0, 0.0, p0)
    rho_s, v_s, p_s = normal_shock_state(2.0, 1.0, p0, gas.gamma)
    shocked = gas.conserved(rho_s, 0.0, v_s, p_s)
    return light, heavy, shocked


def _rmi():
    gas = Euler2D(GAMMA)
    light, heavy, shocked = rmi_states(gas)

    def init(mesh, p):
        nx, ny = mesh.ncells(Parity.STAGGERED)
        cx, cy = mesh.centers(Parity.STAGGERED)
        X, Y = np.meshgrid(cx, cy, indexing="ij")
        spec = jet_spec(2, p)
        interior = np.zeros((4, nx, ny, spec.ndof))
        contact = Y >= 1.0 - 0.3 * np.cos(2.0 * np.pi * X)
        quiet = (~contact) & (Y >= 0.6)
        for comp in range(4):
            interior[comp, :, :, 0] = np.where(
                contact, light[comp], np.where(quiet, heavy[comp], shocked[comp])
            )
        dofs = np.zeros((4, nx + 2, ny + 2, spec.ndof))
        dofs[:, 1:-1, 1:-1] = interior
        return State2D(mesh, Parity.STAGGERED, 0.0, p, dofs)

    def bcs():
        return BoundaryConditions2D(
            Periodic(), Periodic(), NonReflective(), NonReflective()
        )

    return Problem(
        "rmi", "single-mode Richtmyer-Meshkov instability (Mach 2 shock)",
        2, gas, (-0.5, 0.5, 0.0, 5.0), (100, 500), 1.8,
        _init=init,
        _bcs=bcs,
        breakpoints=(0.6,),
    )


_CASES = {
    "advect-sine": _advect_sine,
    "advect-composite": _advect_composite,
    "sod": _sod,
    "titarev-toro": _titarev_toro,
    "vortex": _vortex,
    "rp1": _rp1,
    "rp2": _rp2,
    "dmr": _dmr,
    "rmi": _rmi,
}


def case_ids():
    return tuple(_CASES)


@lru_cache(maxsize=None)
def get_problem(case_id):
    try:
        factory = _CASES[case_id]
    except KeyError:
        raise ConfigError(
            f"unknown case {case_id!r}; available: {', '.join(_CASES)}"
        ) from None
    return factory()
