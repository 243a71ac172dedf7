"""Run orchestration: CFL time loop, monitors, error norms, convergence.

The loop alternates half-steps between the two mesh parities; each
half-step recomputes the time step from the current maximum wave speed and
the last one is clamped to land on the end time exactly.  Monitors track
NaNs, positivity (for gas dynamics) and a conservation budget that accounts
for boundary transport, so the drift is meaningful for open boundaries too.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import scheme1d, scheme2d
from .config import STABILITY_CFL, SchemeConfig
from .errors import PhysicsError, UnsupportedError
from .mesh import Parity, State1D, fill_ghosts


@dataclass
class ErrorReport:
    """L1 (mean absolute) and Linf (max absolute) cell-center errors.

    ``l1``/``linf`` refer to the primary variable (density for gas
    dynamics); ``per_var`` holds one row per conserved component.
    """

    l1: float
    linf: float
    per_var: np.ndarray
    ncells: int

    def __post_init__(self):
        assert self.linf >= self.l1 >= 0.0


@dataclass
class RunResult:
    state: object
    steps: int
    error: ErrorReport | None = None
    conservation_drift: float = 0.0
    min_density: float = np.inf
    min_pressure: float = np.inf
    totals_start: np.ndarray | None = None
    totals_end: np.ndarray | None = None
    runtime: float = 0.0


def _exact_at_centers(problem, state):
    if state.mesh is None:
        raise UnsupportedError("state has no mesh")
    if isinstance(state, State1D):
        return problem.exact(state.mesh.centers(state.parity), state.t)
    cx, cy = state.mesh.centers(state.parity)
    X, Y = np.meshgrid(cx, cy, indexing="ij")
    return problem.exact((X, Y), state.t)


def error_norms(state, problem):
    """Error report of recovered cell-center point values vs the exact field."""
    exact = _exact_at_centers(problem, state)
    num = state.point_values()
    err = np.abs(num - exact)
    axes = tuple(range(1, err.ndim))
    per_var = np.stack([err.mean(axis=axes), err.max(axis=axes)], axis=1)
    return ErrorReport(
        l1=float(per_var[0, 0]),
        linf=float(per_var[0, 1]),
        per_var=per_var,
        ncells=int(np.prod(err.shape[1:])),
    )


def _timestep(state, physics, cfg, t_end):
    U = state.point_values()
    if isinstance(state, State1D):
        smax = float(np.max(physics.max_wave_speed(U, t=state.t)))
        dt = cfg.cfl_value * state.mesh.dx / smax
    else:
        sx, sy = physics.max_wave_speed(U, t=state.t)
        rate = float(np.max(sx / state.mesh.dx + sy / state.mesh.dy))
        dt = cfg.cfl_value / rate
    return min(dt, t_end - state.t)


def run_case(problem, cfg, cells=None, t_end=None, monitor=True,
             max_steps=10_000_000, callback=None):
    """March a benchmark case to its end time.

    Returns a :class:`RunResult`; the error report is attached when the
    case carries an exact solution.  ``callback(state, step)`` is invoked
    after every half-step when given.
    """
    if cfg.cfl_value > STABILITY_CFL[cfg.order] + 1e-12:
        warnings.warn(
            f"CFL {cfg.cfl_value} exceeds the linear stability bound "
            f"{STABILITY_CFL[cfg.order]} for order {cfg.order}",
            stacklevel=2,
        )
    import time as _time

    t0 = _time.perf_counter()
    mesh = problem.make_mesh(cells)
    state = problem.init_state(mesh, cfg.p)
    bcs = problem.make_bcs()
    physics = problem.physics
    if t_end is None:
        t_end = problem.t_end
    advance = scheme1d.advance_half_step_1d if problem.sdim == 1 else scheme2d.advance_half_step_2d
    totals_fn = scheme1d.totals if problem.sdim == 1 else scheme2d.totals

    result = RunResult(state=state, steps=0)
    is_gas = hasattr(physics, "pressure")
    if monitor:
        result.totals_start = totals_fn(state)
        scale = np.maximum(np.abs(result.totals_start), 1e-12)
        residual = np.zeros_like(result.totals_start)
        if problem.sdim == 1:
            vol = mesh.dx * mesh.n
        else:
            vol = mesh.dx * mesh.dy * mesh.nx * mesh.ny
        scale = np.maximum(scale, 1e-3 * vol)

    eps_t = 1e-12 * max(1.0, abs(t_end))
    while state.t < t_end - eps_t:
        if result.steps >= max_steps:
            raise PhysicsError("step budget exhausted", time=state.t)
        fill_ghosts(state, bcs, state.t)
        dt = _timestep(state, physics, cfg, t_end)
        new_state, diag = advance(state, physics, bcs, cfg, dt, monitor=monitor)
        pv = new_state.point_values()
        if np.isnan(pv).any():
            cell = np.unravel_index(int(np.argmax(np.isnan(pv[0]))), pv[0].shape)
            raise PhysicsError("NaN detected", cell=cell, time=new_state.t)
        if is_gas:
            rho = pv[0]
            pp = physics.pressure(pv)
            result.min_density = min(result.min_density, float(rho.min()))
            result.min_pressure = min(result.min_pressure, float(pp.min()))
        if monitor:
            residual += totals_fn(new_state) - diag["expected_totals"]
            drift = float(np.max(np.abs(residual) / scale))
            result.conservation_drift = max(result.conservation_drift, drift)
        state = new_state
        result.steps += 1
        if callback is not None:
            callback(state, result.steps)

    result.state = state
    if monitor:
        result.totals_end = totals_fn(state)
    if problem.has_exact:
        result.error = error_norms(state, problem)
    result.runtime = _time.perf_counter() - t0
    return result


def observed_orders(errors):
    """log2 ratios of successive errors under mesh halving."""
    out = [float("nan")]
    for a, b in zip(errors, errors[1:]):
        out.append(np.log2(a / b) if a > 0 and b > 0 else float("nan"))
    return out


@dataclass
class ConvergenceRow:
    inv_dx: int
    l1: float
    l1_order: float
    linf: float
    linf_order: float


def run_convergence(problem, cfg, inv_dx_list, t_end=None):
    """Error norms over a mesh sweep; ``inv_dx_list`` are 1/dx values.

    Cell counts are inv_dx times the domain extent per direction.  Returns
    a list of :class:`ConvergenceRow`.
    """
    if len(inv_dx_list) < 2:
        raise UnsupportedError("need at least two meshes for a convergence study")
    l1s, linfs = [], []
    for m in inv_dx_list:
        if problem.sdim == 1:
            cells = (round((problem.domain[1] - problem.domain[0]) * m),)
        else:
            cells = (
                round((problem.domain[1] - problem.domain[0]) * m),
                round((problem.domain[3] - problem.domain[2]) * m),
            )
        res = run_case(problem, cfg, cells=cells, t_end=t_end, monitor=False)
        l1s.append(res.error.l1)
        linfs.append(res.error.linf)
    o1 = observed_orders(l1s)
    oi = observed_orders(linfs)
    return [
        ConvergenceRow(int(m), l1s[i], o1[i], linfs[i], oi[i])
        for i, m in enumerate(inv_dx_list)
    ]
