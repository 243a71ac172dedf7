"""Truncated space-time Taylor jets and the Cauchy-Kovalewski procedure.

A jet holds the scaled partial derivatives of a quantity about a cell
center/time level: every entry is ``d^(k+l+b) psi / dx^k dy^l dt^b`` times
``dx^k dy^l dt^b``, so all scheme formulas written on jets are dimensionless.
Entries are stored in a packed triangular layout (total order <= P) on the
LAST axis; any leading axes are broadcast (typically the mesh cells), which
keeps per-cell data contiguous for the hot kernels.

Supported degrees are P = 1..3 (scheme orders 2-4).  Only +, -, *,
reciprocal and integer powers are provided; that is all the flux formulas
need.
"""

from __future__ import annotations

import itertools
import math
import os
from functools import lru_cache

import numpy as np

from .errors import JetDivisionError, ShapeError

_USE_NUMBA = os.environ.get("WCCS_DISABLE_NUMBA", "") == ""
if _USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dependency
        _USE_NUMBA = False

MAX_DEGREE = 3


class JetSpec:
    """Index bookkeeping for jets of spatial dimension ``sdim`` and degree ``p``.

    ``indices`` lists the multi-indices (k, b) or (k, l, b) sorted by total
    order then lexicographically, so slot 0 is always the constant term and
    a reciprocal recursion can walk the list front to back.
    """

    def __init__(self, sdim, p):
        if sdim not in (1, 2):
            raise ShapeError(f"unsupported spatial dimension {sdim}")
        if not 1 <= p <= MAX_DEGREE:
            raise ShapeError(f"unsupported jet degree {p}")
        self.sdim = sdim
        self.p = p
        naxes = sdim + 1
        idx = [
            t
            for t in itertools.product(range(p + 1), repeat=naxes)
            if sum(t) <= p
        ]
        idx.sort(key=lambda t: (sum(t), t))
        self.indices = tuple(idx)
        self.nslots = len(idx)
        self.slot = {t: s for s, t in enumerate(idx)}
        # spatial multi-indices (time order 0) and their jet slots
        self.spatial_indices = tuple(t[:-1] for t in idx if t[-1] == 0)
        self.spatial_slots = np.array(
            [self.slot[t] for t in idx if t[-1] == 0], dtype=np.int64
        )
        self.ndof = len(self.spatial_indices)
        self.dof_slot = {t: s for s, t in enumerate(self.spatial_indices)}
        self._mul = _mul_table(self)
        self._recip = _recip_table(self)

    def __repr__(self):
        return f"JetSpec(sdim={self.sdim}, p={self.p})"


@lru_cache(maxsize=None)
def jet_spec(sdim, p):
    return JetSpec(sdim, p)


def _binom_prod(gamma, alpha):
    return math.prod(math.comb(g, a) for g, a in zip(gamma, alpha))


def _mul_table(spec):
    """Per-output-slot pair segments of the truncated Leibniz product.

    Returns (targets, segments, a_slots, b_slots, coefs): output slot
    targets[t] accumulates coefs[p] * a[a_slots[p]] * b[b_slots[p]] over
    p in segments[t]:segments[t+1].
    """
    tgt, seg, ai, bi, co = [], [0], [], [], []
    for g in spec.indices:
        for a in itertools.product(*(range(x + 1) for x in g)):
            b = tuple(x - y for x, y in zip(g, a))
            ai.append(spec.slot[a])
            bi.append(spec.slot[b])
            co.append(float(_binom_prod(g, a)))
        tgt.append(spec.slot[g])
        seg.append(len(ai))
    return (
        np.array(tgt, dtype=np.int64),
        np.array(seg, dtype=np.int64),
        np.array(ai, dtype=np.int64),
        np.array(bi, dtype=np.int64),
        np.array(co, dtype=np.float64),
    )


def _recip_table(spec):
    """Order-by-order recursion pairs for the multiplicative inverse.

    For each nonconstant index g:  r_g = -r_0 * sum over 0 < a <= g of
    binom(g, a) * x_a * r_(g-a).  Targets appear in slot order, so every
    r_(g-a) is ready when needed.
    """
    tgt, seg, ai, bi, co = [], [0], [], [], []
    for g in spec.indices:
        if sum(g) == 0:
            continue
        for a in itertools.product(*(range(x + 1) for x in g)):
            if sum(a) == 0:
                continue
            b = tuple(x - y for x, y in zip(g, a))
            ai.append(spec.slot[a])
            bi.append(spec.slot[b])
            co.append(float(_binom_prod(g, a)))
        tgt.append(spec.slot[g])
        seg.append(len(ai))
    return (
        np.array(tgt, dtype=np.int64),
        np.array(seg, dtype=np.int64),
        np.array(ai, dtype=np.int64),
        np.array(bi, dtype=np.int64),
        np.array(co, dtype=np.float64),
    )


if _USE_NUMBA:

    @njit(cache=True)
    def _mul_kernel(a, b, tgt, seg, ai, bi, co, out):  # pragma: no cover - jitted
        n = a.shape[0]
        for c in range(n):
            for t in range(tgt.shape[0]):
                acc = 0.0
                for p in range(seg[t], seg[t + 1]):
                    acc += co[p] * a[c, ai[p]] * b[c, bi[p]]
                out[c, tgt[t]] = acc

    @njit(cache=True)
    def _recip_kernel(a, tgt, seg, ai, bi, co, out):  # pragma: no cover
        n = a.shape[0]
        for c in range(n):
            r0 = 1.0 / a[c, 0]
            out[c, 0] = r0
            for t in range(tgt.shape[0]):
                acc = 0.0
                for p in range(seg[t], seg[t + 1]):
                    acc += co[p] * a[c, ai[p]] * out[c, bi[p]]
                out[c, tgt[t]] = -r0 * acc


def _mul_numpy(a, b, tgt, seg, ai, bi, co, out):
    for t in range(tgt.shape[0]):
        acc = co[seg[t]] * a[:, ai[seg[t]]] * b[:, bi[seg[t]]]
        for p in range(seg[t] + 1, seg[t + 1]):
            acc += co[p] * a[:, ai[p]] * b[:, bi[p]]
        out[:, tgt[t]] = acc


def _recip_numpy(a, tgt, seg, ai, bi, co, out):
    out[:, 0] = 1.0 / a[:, 0]
    for t in range(tgt.shape[0]):
        acc = np.zeros(a.shape[0])
        for p in range(seg[t], seg[t + 1]):
            acc += co[p] * a[:, ai[p]] * out[:, bi[p]]
        out[:, tgt[t]] = -out[:, 0] * acc


class Jet:
    """A stack of truncated space-time Taylor jets.

    ``c`` has shape ``(..., spec.nslots)``; leading axes index cells (or are
    empty for a single jet).  Arithmetic with floats touches only the
    constant slot for +/- and rescales everything for *.
    """

    __slots__ = ("spec", "c")

    def __init__(self, spec, c):
        c = np.asarray(c, dtype=np.float64)
        if c.shape[-1] != spec.nslots:
            raise ShapeError(
                f"expected last axis {spec.nslots}, got {c.shape[-1]}"
            )
        self.spec = spec
        self.c = c

    @classmethod
    def zeros(cls, spec, shape=()):
        return cls(spec, np.zeros((*shape, spec.nslots)))

    @classmethod
    def constant(cls, spec, value):
        value = np.asarray(value, dtype=np.float64)
        c = np.zeros((*value.shape, spec.nslots))
        c[..., 0] = value
        return cls(spec, c)

    def copy(self):
        return Jet(self.spec, self.c.copy())

    def _check(self, other):
        if self.spec is not other.spec:
            if (self.spec.sdim, self.spec.p) != (other.spec.sdim, other.spec.p):
                raise ShapeError(
                    f"jet mismatch: {self.spec!r} vs {other.spec!r}"
                )

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.spec, self.c + other.c)
        out = self.c.copy()
        out[..., 0] += other
        return Jet(self.spec, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.spec, self.c - other.c)
        out = self.c.copy()
        out[..., 0] -= other
        return Jet(self.spec, out)

    def __rsub__(self, other):
        out = -self.c
        out[..., 0] += other
        return Jet(self.spec, out)

    def __neg__(self):
        return Jet(self.spec, -self.c)

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return jet_mul(self, other)
        return Jet(self.spec, self.c * other)

    __rmul__ = __mul__

    def reciprocal(self):
        return jet_recip(self)


def jet_add(a, b):
    """Coefficient-wise sum of two jets of identical shape."""
    return a + b


def jet_mul(a, b):
    """Truncated Leibniz product; terms of total order > P are dropped."""
    a._check(b)
    spec = a.spec
    ca, cb = np.broadcast_arrays(a.c, b.c)
    shape = ca.shape
    ca = np.ascontiguousarray(ca).reshape(-1, spec.nslots)
    cb = np.ascontiguousarray(cb).reshape(-1, spec.nslots)
    out = np.empty_like(ca)
    if _USE_NUMBA:
        _mul_kernel(ca, cb, *spec._mul, out)
    else:
        _mul_numpy(ca, cb, *spec._mul, out)
    return Jet(spec, out.reshape(shape))


def jet_recip(a):
    """Jet r with a * r = 1 up to truncation (order-by-order recursion)."""
    spec = a.spec
    a0 = a.c[..., 0]
    bad = np.abs(a0) < 1e-300
    if np.any(bad):
        flat = int(np.argmax(bad.reshape(-1)))
        raise JetDivisionError(
            "reciprocal of a jet with (numerically) zero constant part",
            flat_cell=flat,
            cell_shape=a0.shape,
        )
    ca = np.ascontiguousarray(a.c).reshape(-1, spec.nslots)
    out = np.empty_like(ca)
    if _USE_NUMBA:
        _recip_kernel(ca, *spec._recip, out)
    else:
        _recip_numpy(ca, *spec._recip, out)
    return Jet(spec, out.reshape(a.c.shape))


def _inject_spatial(dofs, spec):
    """Start a space-time jet stack from spatial derivative data.

    ``dofs`` has shape (ncomp, *cells, spec.ndof) in the spatial slot order
    of ``spec``; the result has the full slot axis with time levels zeroed.
    """
    ncomp = dofs.shape[0]
    cells = dofs.shape[1:-1]
    full = np.zeros((ncomp, *cells, spec.nslots))
    full[..., spec.spatial_slots] = dofs
    return full


def ck_1d(dofs, flux_jets, nu_x, spec):
    """Cauchy-Kovalewski fill in 1D, returning state and flux jet stacks.

    Level b of the state jet is obtained from the flux jet of the levels
    below via the conservation law:  u_(k)x,(b)t = -nu_x * f_(k+1)x,(b-1)t
    in scaled variables, with nu_x = dt/dx.  ``flux_jets`` maps a list of
    per-component jets to the list of flux component jets.  The returned
    flux stack is complete up to time order P (it feeds the time-averaged
    fluxes of the cell update).
    """
    p = spec.p
    full = _inject_spatial(np.asarray(dofs, dtype=np.float64), spec)
    ncomp = full.shape[0]
    fc = None
    for b in range(1, p + 1):
        f = flux_jets([Jet(spec, full[c]) for c in range(ncomp)])
        for c in range(ncomp):
            for k in range(p - b + 1):
                full[c, ..., spec.slot[(k, b)]] = (
                    -nu_x * f[c].c[..., spec.slot[(k + 1, b - 1)]]
                )
    f = flux_jets([Jet(spec, full[c]) for c in range(ncomp)])
    fc = np.stack([j.c for j in f])
    return full, fc


def cauchy_kovalewski_1d(dofs, flux_jets, nu_x, spec):
    """State jets with all mixed space-time derivatives, k + b <= P."""
    return ck_1d(dofs, flux_jets, nu_x, spec)[0]


def ck_2d(dofs, flux_jets, nu_x, nu_y, spec):
    """Cauchy-Kovalewski fill in 2D; returns (state, f, g) jet stacks.

    u_(k)x,(l)y,(b)t = -nu_x * f_(k+1)x,(l)y,(b-1)t
                       -nu_y * g_(k)x,(l+1)y,(b-1)t.
    ``flux_jets`` maps component jets to (f components, g components).
    """
    p = spec.p
    full = _inject_spatial(np.asarray(dofs, dtype=np.float64), spec)
    ncomp = full.shape[0]
    for b in range(1, p + 1):
        f, g = flux_jets([Jet(spec, full[c]) for c in range(ncomp)])
        for c in range(ncomp):
            for k in range(p - b + 1):
                for l in range(p - b - k + 1):
                    full[c, ..., spec.slot[(k, l, b)]] = -nu_x * f[c].c[
                        ..., spec.slot[(k + 1, l, b - 1)]
                    ] - nu_y * g[c].c[..., spec.slot[(k, l + 1, b - 1)]]
    f, g = flux_jets([Jet(spec, full[c]) for c in range(ncomp)])
    return full, np.stack([j.c for j in f]), np.stack([j.c for j in g])


def cauchy_kovalewski_2d(dofs, flux_jets, nu_x, nu_y, spec):
    """State jets with all mixed space-time derivatives, k + l + b <= P."""
    return ck_2d(dofs, flux_jets, nu_x, nu_y, spec)[0]
