"""Fused per-cell Cauchy-Kovalewski kernels for the Euler equations.

The generic jet path composes flux jets with one vectorized pass per
arithmetic operation, which is memory-bound on large meshes.  These
kernels run the recursion cell by cell on cache-resident slot vectors, so
each DOF is read and written once per half-step, and they evaluate the
composition incrementally by time level: every product-table row is
touched exactly once instead of once per level.  Quantity pipelines are
batched so the pair-table indices are loaded once for several products.

The results agree with the generic path to roundoff on random admissible
states (asserted by the test suite).
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import JetDivisionError
from .jets import _USE_NUMBA, _binom_prod, _inject_spatial

if _USE_NUMBA:
    from numba import njit
else:  # pragma: no cover - numba is a hard dependency
    def njit(*a, **k):  # noqa: D103
        def wrap(f):
            return f
        return wrap


_TABLE_CACHE = {}


def _leveled_tables(spec):
    """Product/reciprocal tables regrouped by the output's time order.

    Processing level b extends every intermediate quantity to time order b
    using only entries of time order <= b, which are complete by then; the
    conservation-law fill then produces the state entries of level b + 1.
    """
    key = (spec.sdim, spec.p)
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    p = spec.p

    def leveled_mul():
        tgt, seg, ai, bi, co, lseg = [], [0], [], [], [], [0]
        for b in range(p + 1):
            for g in spec.indices:
                if g[-1] != b:
                    continue
                for a in itertools.product(*(range(x + 1) for x in g)):
                    rest = tuple(x - y for x, y in zip(g, a))
                    ai.append(spec.slot[a])
                    bi.append(spec.slot[rest])
                    co.append(float(_binom_prod(g, a)))
                tgt.append(spec.slot[g])
                seg.append(len(ai))
            lseg.append(len(tgt))
        return (
            np.array(tgt, dtype=np.int64),
            np.array(seg, dtype=np.int64),
            np.array(ai, dtype=np.int64),
            np.array(bi, dtype=np.int64),
            np.array(co, dtype=np.float64),
            np.array(lseg, dtype=np.int64),
        )

    def leveled_recip():
        tgt, seg, ai, bi, co, lseg = [], [0], [], [], [], [0]
        for b in range(p + 1):
            for g in spec.indices:
                if g[-1] != b or sum(g) == 0:
                    continue
                for a in itertools.product(*(range(x + 1) for x in g)):
                    if sum(a) == 0:
                        continue
                    rest = tuple(x - y for x, y in zip(g, a))
                    ai.append(spec.slot[a])
                    bi.append(spec.slot[rest])
                    co.append(float(_binom_prod(g, a)))
                tgt.append(spec.slot[g])
                seg.append(len(ai))
            lseg.append(len(tgt))
        return (
            np.array(tgt, dtype=np.int64),
            np.array(seg, dtype=np.int64),
            np.array(ai, dtype=np.int64),
            np.array(bi, dtype=np.int64),
            np.array(co, dtype=np.float64),
            np.array(lseg, dtype=np.int64),
        )

    def slots_by_level():
        slots, lseg = [], [0]
        for b in range(p + 1):
            for s, g in enumerate(spec.indices):
                if g[-1] == b:
                    slots.append(s)
            lseg.append(len(slots))
        return np.array(slots, dtype=np.int64), np.array(lseg, dtype=np.int64)

    def fill_rows():
        # state slot of level b+1 <- flux slots of level b
        dst, fs, gs, lseg = [], [], [], [0]
        for b in range(p):
            if spec.sdim == 1:
                for k in range(p - b):
                    dst.append(spec.slot[(k, b + 1)])
                    fs.append(spec.slot[(k + 1, b)])
                    gs.append(0)
            else:
                for k in range(p - b):
                    for l in range(p - b - k):
                        dst.append(spec.slot[(k, l, b + 1)])
                        fs.append(spec.slot[(k + 1, l, b)])
                        gs.append(spec.slot[(k, l + 1, b)])
            lseg.append(len(dst))
        return (
            np.array(dst, dtype=np.int64),
            np.array(fs, dtype=np.int64),
            np.array(gs, dtype=np.int64),
            np.array(lseg, dtype=np.int64),
        )

    tables = (leveled_mul(), leveled_recip(), slots_by_level(), fill_rows())
    _TABLE_CACHE[key] = tables
    return tables


@njit(cache=True)
def _euler1d_kernel(rho, m, E, f0, f1, f2, gamma, nu, p,
                    mt, ms, ma, mb, mc, ml,
                    rt, rs, ra, rb, rc, rl,
                    sl, sseg, fd, ff, fg, fl):  # pragma: no cover - jitted
    n = rho.shape[0]
    S = rho.shape[1]
    inv = np.empty(S)
    u = np.empty(S)
    mu = np.empty(S)
    Ep = np.empty(S)
    for c in range(n):
        r_ = rho[c]
        m_ = m[c]
        E_ = E[c]
        for lev in range(p + 1):
            if lev == 0:
                inv[0] = 1.0 / r_[0]
            for t in range(rl[lev], rl[lev + 1]):
                acc = 0.0
                for q in range(rs[t], rs[t + 1]):
                    acc += rc[q] * r_[ra[q]] * inv[rb[q]]
                inv[rt[t]] = -inv[0] * acc
            for t in range(ml[lev], ml[lev + 1]):
                o = mt[t]
                a0 = 0.0
                for q in range(ms[t], ms[t + 1]):
                    a0 += mc[q] * m_[ma[q]] * inv[mb[q]]
                u[o] = a0
            for t in range(ml[lev], ml[lev + 1]):
                o = mt[t]
                a0 = 0.0
                for q in range(ms[t], ms[t + 1]):
                    a0 += mc[q] * m_[ma[q]] * u[mb[q]]
                mu[o] = a0
            for si in range(sseg[lev], sseg[lev + 1]):
                s = sl[si]
                pres = (gamma - 1.0) * (E_[s] - 0.5 * mu[s])
                f0[c, s] = m_[s]
                f1[c, s] = mu[s] + pres
                Ep[s] = E_[s] + pres
            for t in range(ml[lev], ml[lev + 1]):
                o = mt[t]
                a0 = 0.0
                for q in range(ms[t], ms[t + 1]):
                    a0 += mc[q] * Ep[ma[q]] * u[mb[q]]
                f2[c, o] = a0
            if lev < p:
                for i in range(fl[lev], fl[lev + 1]):
                    d = fd[i]
                    src = ff[i]
                    r_[d] = -nu * f0[c, src]
                    m_[d] = -nu * f1[c, src]
                    E_[d] = -nu * f2[c, src]


@njit(cache=True)
def _euler2d_kernel(rho, mx, my, E, f0, f1, f2, f3, g0, g1, g2, g3,
                    gamma, nux, nuy, p,
                    mt, ms, ma, mb, mc, ml,
                    rt, rs, ra, rb, rc, rl,
                    sl, sseg, fd, ff, fg, fl):  # pragma: no cover - jitted
    n = rho.shape[0]
    S = rho.shape[1]
    inv = np.empty(S)
    u = np.empty(S)
    v = np.empty(S)
    mxu = np.empty(S)
    myv = np.empty(S)
    Ep = np.empty(S)
    for c in range(n):
        r_ = rho[c]
        mx_ = mx[c]
        my_ = my[c]
        E_ = E[c]
        for lev in range(p + 1):
            if lev == 0:
                inv[0] = 1.0 / r_[0]
            for t in range(rl[lev], rl[lev + 1]):
                acc = 0.0
                for q in range(rs[t], rs[t + 1]):
                    acc += rc[q] * r_[ra[q]] * inv[rb[q]]
                inv[rt[t]] = -inv[0] * acc
            for t in range(ml[lev], ml[lev + 1]):
                o = mt[t]
                a0 = 0.0
                a1 = 0.0
                for q in range(ms[t], ms[t + 1]):
                    cq = mc[q]
                    ia = ma[q]
                    ib = mb[q]
                    a0 += cq * mx_[ia] * inv[ib]
                    a1 += cq * my_[ia] * inv[ib]
                u[o] = a0
                v[o] = a1
            for t in range(ml[lev], ml[lev + 1]):
                o = mt[t]
                a0 = 0.0
                a1 = 0.0
                for q in range(ms[t], ms[t + 1]):
                    cq = mc[q]
                    ia = ma[q]
                    a0 += cq * mx_[ia] * u[mb[q]]
                    a1 += cq * my_[ia] * v[mb[q]]
                mxu[o] = a0
                myv[o] = a1
            for si in range(sseg[lev], sseg[lev + 1]):
                s = sl[si]
                pres = (gamma - 1.0) * (E_[s] - 0.5 * (mxu[s] + myv[s]))
                f0[c, s] = mx_[s]
                g0[c, s] = my_[s]
                f1[c, s] = mxu[s] + pres
                g2[c, s] = myv[s] + pres
                Ep[s] = E_[s] + pres
            for t in range(ml[lev], ml[lev + 1]):
                o = mt[t]
                a0 = 0.0
                a1 = 0.0
                a2 = 0.0
                a3 = 0.0
                for q in range(ms[t], ms[t + 1]):
                    cq = mc[q]
                    ia = ma[q]
                    ib = mb[q]
                    uq = u[ib]
                    vq = v[ib]
                    a0 += cq * my_[ia] * uq
                    a1 += cq * Ep[ia] * uq
                    a2 += cq * mx_[ia] * vq
                    a3 += cq * Ep[ia] * vq
                f2[c, o] = a0
                f3[c, o] = a1
                g1[c, o] = a2
                g3[c, o] = a3
            if lev < p:
                for i in range(fl[lev], fl[lev + 1]):
                    d = fd[i]
                    fsl = ff[i]
                    gsl = fg[i]
                    r_[d] = -nux * f0[c, fsl] - nuy * g0[c, gsl]
                    mx_[d] = -nux * f1[c, fsl] - nuy * g1[c, gsl]
                    my_[d] = -nux * f2[c, fsl] - nuy * g2[c, gsl]
                    E_[d] = -nux * f3[c, fsl] - nuy * g3[c, gsl]


def _check_density(flat_rho, cells):
    bad = np.abs(flat_rho[:, 0]) < 1e-300
    if np.any(bad):
        raise JetDivisionError(
            "reciprocal of a jet with (numerically) zero constant part",
            flat_cell=int(np.argmax(bad)),
            cell_shape=cells,
        )


def _unpack(spec):
    (mt, ms, ma, mb, mc, ml), (rt, rs, ra, rb, rc, rl), (sl, sseg), (fd, ff, fg, fl) = _leveled_tables(spec)
    return mt, ms, ma, mb, mc, ml, rt, rs, ra, rb, rc, rl, sl, sseg, fd, ff, fg, fl


def ck_euler_1d(dofs, gamma, nu, spec):
    """Fused 1D Euler space-time expansion; returns (state, flux) jet stacks.

    Returns None when the compiled kernels are unavailable.
    """
    if not _USE_NUMBA:
        return None
    full = _inject_spatial(np.asarray(dofs, dtype=np.float64), spec)
    cells = full.shape[1:-1]
    S = spec.nslots
    flat = full.reshape(3, -1, S)
    _check_density(flat[0], cells)
    fl_ = np.empty_like(flat)
    tabs = _unpack(spec)
    _euler1d_kernel(
        flat[0], flat[1], flat[2], fl_[0], fl_[1], fl_[2],
        gamma, nu, spec.p, *tabs,
    )
    return full, fl_.reshape(3, *cells, S)


def ck_euler_2d(dofs, gamma, nux, nuy, spec):
    """Fused 2D Euler expansion; returns (state, f, g) jet stacks.

    Returns None when the compiled kernels are unavailable.
    """
    if not _USE_NUMBA:
        return None
    full = _inject_spatial(np.asarray(dofs, dtype=np.float64), spec)
    cells = full.shape[1:-1]
    S = spec.nslots
    flat = full.reshape(4, -1, S)
    _check_density(flat[0], cells)
    fl_ = np.empty_like(flat)
    gl_ = np.empty_like(flat)
    tabs = _unpack(spec)
    _euler2d_kernel(
        flat[0], flat[1], flat[2], flat[3],
        fl_[0], fl_[1], fl_[2], fl_[3], gl_[0], gl_[1], gl_[2], gl_[3],
        gamma, nux, nuy, spec.p, *tabs,
    )
    return full, fl_.reshape(4, *cells, S), gl_.reshape(4, *cells, S)
