"""Fused per-cell characteristic limiting for the Euler equations.

Equivalent to the generic numpy path (project candidates with the left
eigenvectors, weigh field by field, combine, project back), but built as a
single pass per cell: the eigensystem lives on the stack so the big L/R
matrix fields are never materialized.  Agreement with the generic path is
asserted by the tests to roundoff.
"""

from __future__ import annotations

import numpy as np

from . import tables
from .errors import PhysicsError
from .jets import _USE_NUMBA, jet_spec

if _USE_NUMBA:
    from numba import njit
else:  # pragma: no cover - numba is a hard dependency
    def njit(*a, **k):  # noqa: D103
        def wrap(f):
            return f
        return wrap


_SPARSE_B = {}


def _sparse_beta(sdim, p):
    key = (sdim, p)
    if key not in _SPARSE_B:
        B = tables.smoothness_form_1d(p) if sdim == 1 else tables.smoothness_form_2d(p)
        bi, bj = np.nonzero(B)
        _SPARSE_B[key] = (
            bi.astype(np.int64),
            bj.astype(np.int64),
            B[bi, bj].astype(np.float64),
        )
    return _SPARSE_B[key]


@njit(cache=True)
def _limit1d_kernel(dofs, ubar, vl, vr, out, gamma, alpha, eps, p,
                    bi, bj, bc, el, er, err):  # pragma: no cover - jitted
    ncomp = dofs.shape[0]
    n = dofs.shape[1]
    S = dofs.shape[2]
    L = np.empty((3, 3))
    R = np.empty((3, 3))
    dk = np.empty(S)
    acc = np.empty((3, S))
    for c in range(n):
        rho = ubar[0, c]
        m = ubar[1, c]
        E = ubar[2, c]
        if rho <= 0.0:
            err[c] = 1
            continue
        u = m / rho
        pres = (gamma - 1.0) * (E - 0.5 * m * u)
        if pres <= 0.0:
            err[c] = 1
            continue
        cs = np.sqrt(gamma * pres / rho)
        H = (E + pres) / rho
        b1 = (gamma - 1.0) / (cs * cs)
        b2 = 0.5 * b1 * u * u
        R[0, 0] = 1.0
        R[1, 0] = u - cs
        R[2, 0] = H - u * cs
        R[0, 1] = 1.0
        R[1, 1] = u
        R[2, 1] = 0.5 * u * u
        R[0, 2] = 1.0
        R[1, 2] = u + cs
        R[2, 2] = H + u * cs
        L[0, 0] = 0.5 * (b2 + u / cs)
        L[0, 1] = -0.5 * (b1 * u + 1.0 / cs)
        L[0, 2] = 0.5 * b1
        L[1, 0] = 1.0 - b2
        L[1, 1] = b1 * u
        L[1, 2] = -b1
        L[2, 0] = 0.5 * (b2 - u / cs)
        L[2, 1] = -0.5 * (b1 * u - 1.0 / cs)
        L[2, 2] = 0.5 * b1
        for a in range(3):
            for s in range(S):
                acc[a, s] = 0.0
        for k in range(3):
            for s in range(S):
                dk[s] = (
                    L[k, 0] * dofs[0, c, s]
                    + L[k, 1] * dofs[1, c, s]
                    + L[k, 2] * dofs[2, c, s]
                )
            ub = L[k, 0] * ubar[0, c] + L[k, 1] * ubar[1, c] + L[k, 2] * ubar[2, c]
            wl = L[k, 0] * vl[0, c] + L[k, 1] * vl[1, c] + L[k, 2] * vl[2, c]
            wr = L[k, 0] * vr[0, c] + L[k, 1] * vr[1, c] + L[k, 2] * vr[2, c]
            s1 = 2.0 * (ub - wl)
            s2 = 2.0 * (wr - ub)
            beta0 = 0.0
            for q in range(bi.shape[0]):
                beta0 += bc[q] * dk[bi[q]] * dk[bj[q]]
            beta1 = s1 * s1
            beta2 = s2 * s2
            if p == 1:
                t0 = 1.0 / (beta0 + eps)
                t1 = 1.0 / (beta1 + eps)
                t2 = 1.0 / (beta2 + eps)
                if alpha == 2.0:
                    w0h = t0 * t0
                    w1h = t1 * t1
                    w2h = t2 * t2
                else:
                    w0h = t0**alpha
                    w1h = t1**alpha
                    w2h = t2**alpha
            else:
                pr = 0.0
                pl = 0.0
                for s in range(S):
                    pr += er[s] * dk[s]
                    pl += el[s] * dk[s]
                sig = (pr - wr) ** 2 + (pl - wl) ** 2
                st = sig * dk[S - 1] * dk[S - 1]
                t0 = st / (beta0 * beta0 + eps)
                t1 = st / (beta1 * beta1 + eps)
                t2 = st / (beta2 * beta2 + eps)
                if alpha == 2.0:
                    w0h = 1.0 + t0 * t0
                    w1h = t1 * t1
                    w2h = t2 * t2
                else:
                    w0h = 1.0 + t0**alpha
                    w1h = t1**alpha
                    w2h = t2**alpha
            tot = w0h + w1h + w2h
            w0 = w0h / tot
            w1 = w1h / tot
            w2 = w2h / tot
            ld0 = w0 * dk[0] + (w1 + w2) * ub
            ld1 = w0 * dk[1] + w1 * s1 + w2 * s2
            for a in range(3):
                acc[a, 0] += R[a, k] * ld0
                acc[a, 1] += R[a, k] * ld1
            for s in range(2, S):
                lds = w0 * dk[s]
                for a in range(3):
                    acc[a, s] += R[a, k] * lds
        for a in range(3):
            for s in range(S):
                out[a, c, s] = acc[a, s]


@njit(cache=True)
def _limit2d_kernel(dofs, ubar, vmm, vpm, vpp, vmp, theta, out,
                    gamma, alpha, eps, p,
                    bi, bj, bc, ce, hi, sx, sy, err):  # pragma: no cover
    n = dofs.shape[1]
    S = dofs.shape[2]
    L = np.empty((4, 4))
    R = np.empty((4, 4))
    dk = np.empty(S)
    acc = np.empty((4, S))
    cv = np.empty(4)
    ux = np.empty(4)
    uy = np.empty(4)
    wh = np.empty(5)
    for c in range(n):
        rho = ubar[0, c]
        mx = ubar[1, c]
        my = ubar[2, c]
        E = ubar[3, c]
        if rho <= 0.0:
            err[c] = 1
            continue
        u = mx / rho
        v = my / rho
        q2 = u * u + v * v
        pres = (gamma - 1.0) * (E - 0.5 * rho * q2)
        if pres <= 0.0:
            err[c] = 1
            continue
        cs = np.sqrt(gamma * pres / rho)
        H = (E + pres) / rho
        nx = np.cos(theta[c])
        ny = np.sin(theta[c])
        un = u * nx + v * ny
        ut = -u * ny + v * nx
        b1 = (gamma - 1.0) / (cs * cs)
        b2 = 0.5 * b1 * q2
        R[0, 0] = 1.0
        R[1, 0] = u - cs * nx
        R[2, 0] = v - cs * ny
        R[3, 0] = H - cs * un
        R[0, 1] = 1.0
        R[1, 1] = u
        R[2, 1] = v
        R[3, 1] = 0.5 * q2
        R[0, 2] = 0.0
        R[1, 2] = -ny
        R[2, 2] = nx
        R[3, 2] = ut
        R[0, 3] = 1.0
        R[1, 3] = u + cs * nx
        R[2, 3] = v + cs * ny
        R[3, 3] = H + cs * un
        L[0, 0] = 0.5 * (b2 + un / cs)
        L[0, 1] = -0.5 * (b1 * u + nx / cs)
        L[0, 2] = -0.5 * (b1 * v + ny / cs)
        L[0, 3] = 0.5 * b1
        L[1, 0] = 1.0 - b2
        L[1, 1] = b1 * u
        L[1, 2] = b1 * v
        L[1, 3] = -b1
        L[2, 0] = -ut
        L[2, 1] = -ny
        L[2, 2] = nx
        L[2, 3] = 0.0
        L[3, 0] = 0.5 * (b2 - un / cs)
        L[3, 1] = -0.5 * (b1 * u - nx / cs)
        L[3, 2] = -0.5 * (b1 * v - ny / cs)
        L[3, 3] = 0.5 * b1
        for a in range(4):
            for s in range(S):
                acc[a, s] = 0.0
        for k in range(4):
            for s in range(S):
                dk[s] = (
                    L[k, 0] * dofs[0, c, s]
                    + L[k, 1] * dofs[1, c, s]
                    + L[k, 2] * dofs[2, c, s]
                    + L[k, 3] * dofs[3, c, s]
                )
            ub = (
                L[k, 0] * ubar[0, c]
                + L[k, 1] * ubar[1, c]
                + L[k, 2] * ubar[2, c]
                + L[k, 3] * ubar[3, c]
            )
            cmm = (
                L[k, 0] * vmm[0, c]
                + L[k, 1] * vmm[1, c]
                + L[k, 2] * vmm[2, c]
                + L[k, 3] * vmm[3, c]
            )
            cpm = (
                L[k, 0] * vpm[0, c]
                + L[k, 1] * vpm[1, c]
                + L[k, 2] * vpm[2, c]
                + L[k, 3] * vpm[3, c]
            )
            cpp = (
                L[k, 0] * vpp[0, c]
                + L[k, 1] * vpp[1, c]
                + L[k, 2] * vpp[2, c]
                + L[k, 3] * vpp[3, c]
            )
            cmp_ = (
                L[k, 0] * vmp[0, c]
                + L[k, 1] * vmp[1, c]
                + L[k, 2] * vmp[2, c]
                + L[k, 3] * vmp[3, c]
            )
            ux[0] = 2.0 * ub - (cmm + cmp_)
            uy[0] = cmp_ - cmm
            ux[1] = cpm - cmm
            uy[1] = 2.0 * ub - (cmm + cpm)
            ux[2] = (cpm + cpp) - 2.0 * ub
            uy[2] = cpp - cpm
            ux[3] = cpp - cmp_
            uy[3] = (cmp_ + cpp) - 2.0 * ub
            beta0 = 0.0
            for q in range(bi.shape[0]):
                beta0 += bc[q] * dk[bi[q]] * dk[bj[q]]
            if p == 1:
                t = 1.0 / (beta0 + eps)
                wh[0] = t * t if alpha == 2.0 else t**alpha
                for m in range(4):
                    t = 1.0 / (ux[m] * ux[m] + uy[m] * uy[m] + eps)
                    wh[m + 1] = t * t if alpha == 2.0 else t**alpha
            else:
                sig = 0.0
                cv[0] = cmm
                cv[1] = cpm
                cv[2] = cpp
                cv[3] = cmp_
                for corner in range(4):
                    pe = 0.0
                    for s in range(S):
                        pe += ce[corner, s] * dk[s]
                    sig += (pe - cv[corner]) ** 2
                tau = 0.0
                for q in range(hi.shape[0]):
                    tau += dk[hi[q]] * dk[hi[q]]
                st = sig * tau
                t = st / (beta0 * beta0 + eps)
                wh[0] = 1.0 + (t * t if alpha == 2.0 else t**alpha)
                for m in range(4):
                    bm = ux[m] * ux[m] + uy[m] * uy[m]
                    t = st / (bm * bm + eps)
                    wh[m + 1] = t * t if alpha == 2.0 else t**alpha
            tot = wh[0] + wh[1] + wh[2] + wh[3] + wh[4]
            w0 = wh[0] / tot
            wrest = (wh[1] + wh[2] + wh[3] + wh[4]) / tot
            ldx = w0 * dk[sx]
            ldy = w0 * dk[sy]
            for m in range(4):
                ldx += wh[m + 1] / tot * ux[m]
                ldy += wh[m + 1] / tot * uy[m]
            ld0 = w0 * dk[0] + wrest * ub
            for s in range(S):
                lds = w0 * dk[s]
                if s == 0:
                    lds = ld0
                elif s == sx:
                    lds = ldx
                elif s == sy:
                    lds = ldy
                for a in range(4):
                    acc[a, s] += R[a, k] * lds
        for a in range(4):
            for s in range(S):
                out[a, c, s] = acc[a, s]


def limit_euler_1d(dofs, ubar, vl, vr, gamma, params, p):
    """Fused characteristic limiting of a 1D cell batch; None if unavailable.

    ``dofs``: (3, n, p+1); ``ubar``/``vl``/``vr``: (3, n).
    """
    if not _USE_NUMBA:
        return None
    n = dofs.shape[1]
    out = np.empty_like(dofs)
    err = np.zeros(n, dtype=np.int64)
    bi, bj, bc = _sparse_beta(1, p)
    _limit1d_kernel(
        np.ascontiguousarray(dofs), np.ascontiguousarray(ubar),
        np.ascontiguousarray(vl), np.ascontiguousarray(vr), out,
        gamma, params.alpha, params.eps, p, bi, bj, bc,
        tables.edge_eval_1d(p, -1), tables.edge_eval_1d(p, +1), err,
    )
    if err.any():
        raise PhysicsError(
            "inadmissible cell average in characteristic limiter",
            cell=(int(np.argmax(err)),),
        )
    return out


def limit_euler_2d(dofs, ubar, verts, theta, gamma, params, p):
    """Fused rotated characteristic limiting of a 2D cell batch.

    ``dofs``: (4, n, ndof) flattened cells; ``verts`` = (vmm, vpm, vpp,
    vmp) each (4, n); ``theta``: (n,).  Returns None if unavailable.
    """
    if not _USE_NUMBA:
        return None
    spec = jet_spec(2, p)
    n = dofs.shape[1]
    out = np.empty_like(dofs)
    err = np.zeros(n, dtype=np.int64)
    bi, bj, bc = _sparse_beta(2, p)
    ce = np.stack([
        tables.corner_eval_2d(p, -1, -1),
        tables.corner_eval_2d(p, +1, -1),
        tables.corner_eval_2d(p, +1, +1),
        tables.corner_eval_2d(p, -1, +1),
    ])
    hi = tables.highest_order_slots(2, p)
    vmm, vpm, vpp, vmp = (np.ascontiguousarray(v) for v in verts)
    _limit2d_kernel(
        np.ascontiguousarray(dofs), np.ascontiguousarray(ubar),
        vmm, vpm, vpp, vmp, np.ascontiguousarray(theta), out,
        gamma, params.alpha, params.eps, p,
        bi, bj, bc, ce, hi,
        spec.dof_slot[(1, 0)], spec.dof_slot[(0, 1)], err,
    )
    if err.any():
        raise PhysicsError(
            "inadmissible cell average in characteristic limiter",
            cell=(int(np.argmax(err)),),
        )
    return out
