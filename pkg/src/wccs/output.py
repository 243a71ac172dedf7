"""CSV and legacy-VTK writers for solver states.

1D states become CSV with cell-center point values in primitive variables,
16 significant digits.  2D states become an ASCII legacy-VTK structured
points file (one scalar field per variable, cell centers as points), or a
flat CSV.  Identical configs reproduce byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .errors import WccsError
from .mesh import State1D


def _fmt(v):
    return f"{v:.16g}"


def _variables(state, physics):
    """(names, rows) of output variables in primitive form."""
    pv = state.point_values()
    if hasattr(physics, "primitive"):
        prims = physics.primitive(pv)
        names = ("rho", "u", "p") if len(prims) == 3 else ("rho", "u", "v", "p")
        return names, prims
    return ("u",), (pv[0],)


def write_csv_1d(state, physics, path):
    names, cols = _variables(state, physics)
    xs = state.mesh.centers(state.parity)
    try:
        with open(path, "w") as fh:
            fh.write("x," + ",".join(names) + "\n")
            for i, x in enumerate(xs):
                fh.write(",".join(_fmt(v) for v in (x, *(c[i] for c in cols))) + "\n")
    except OSError as e:
        raise WccsError(f"cannot write {path}: {e}") from e


def write_csv_2d(state, physics, path):
    names, cols = _variables(state, physics)
    cx, cy = state.mesh.centers(state.parity)
    try:
        with open(path, "w") as fh:
            fh.write("x,y," + ",".join(names) + "\n")
            for j, y in enumerate(cy):
                for i, x in enumerate(cx):
                    fh.write(
                        ",".join(_fmt(v) for v in (x, y, *(c[i, j] for c in cols)))
                        + "\n"
                    )
    except OSError as e:
        raise WccsError(f"cannot write {path}: {e}") from e


def write_vtk_2d(state, physics, path, title="wccs"):
    names, cols = _variables(state, physics)
    cx, cy = state.mesh.centers(state.parity)
    nx, ny = len(cx), len(cy)
    try:
        with open(path, "w") as fh:
            fh.write("# vtk DataFile Version 3.0\n")
            fh.write(f"{title}\n")
            fh.write("ASCII\n")
            fh.write("DATASET STRUCTURED_POINTS\n")
            fh.write(f"DIMENSIONS {nx} {ny} 1\n")
            fh.write(f"ORIGIN {_fmt(cx[0])} {_fmt(cy[0])} 0\n")
            fh.write(f"SPACING {_fmt(state.mesh.dx)} {_fmt(state.mesh.dy)} 1\n")
            fh.write(f"POINT_DATA {nx * ny}\n")
            for name, col in zip(names, cols):
                fh.write(f"SCALARS {name} double\n")
                fh.write("LOOKUP_TABLE default\n")
                for j in range(ny):
                    fh.write(" ".join(_fmt(col[i, j]) for i in range(nx)) + "\n")
    except OSError as e:
        raise WccsError(f"cannot write {path}: {e}") from e


def write_output(state, physics, path, fmt="csv"):
    """Dispatch on dimensionality and requested format."""
    if isinstance(state, State1D):
        write_csv_1d(state, physics, path)
    elif fmt == "vtk":
        write_vtk_2d(state, physics, path)
    else:
        write_csv_2d(state, physics, path)


def write_convergence_csv(rows_by_variant, path_or_handle):
    """Long-form convergence table: variant, order, 1/dx, errors, orders."""
    own = isinstance(path_or_handle, str)
    fh = open(path_or_handle, "w") if own else path_or_handle
    try:
        fh.write("variant,order,inv_dx,l1,l1_order,linf,linf_order\n")
        for (variant, order), rows in rows_by_variant.items():
            for r in rows:
                fh.write(
                    f"{variant},{order},{r.inv_dx},{_fmt(r.l1)},"
                    f"{_fmt(r.l1_order)},{_fmt(r.linf)},{_fmt(r.linf_order)}\n"
                )
    finally:
        if own:
            fh.close()
