"""Precomputed coefficient tables for the compact central schemes.

Everything here is an exact rational evaluated once per polynomial degree
``p`` and cached: half/quarter-cell average weights, time-averaged flux
weights, vertex time-expansion matrices, derivative-update corrections,
point-value recovery weights, polynomial edge/corner evaluation weights and
the closed-form smoothness quadratic forms.  All tables address the packed
DOF/jet slot orders of :mod:`wccs.jets`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .jets import jet_spec


def _R(k):
    """Average of xi^k/k! over the right half-cell xi in [0, 1/2], times 2."""
    return Fraction(1, factorial(k + 1) * 2**k)


def _L(k):
    return (-1) ** k * _R(k)


def _A(k):
    """Average of xi^k/k! over the full cell xi in [-1/2, 1/2]."""
    return Fraction(1 + (-1) ** k, factorial(k + 1) * 2 ** (k + 1))


def _T(b):
    """Average of tau^b/b! over tau in [0, 1]."""
    return Fraction(1, factorial(b + 1))


def _to_f(fracs):
    return np.array([float(f) for f in fracs])


# --- 1D ------------------------------------------------------------------

@lru_cache(maxsize=None)
def avg_weights_1d(p):
    """Cell average of the solution polynomial from its scaled DOFs."""
    return _to_f([_A(k) for k in range(p + 1)])


@lru_cache(maxsize=None)
def half_weights_1d(p):
    """(right-half, left-half) cell averages from scaled DOFs."""
    return _to_f([_R(k) for k in range(p + 1)]), _to_f([_L(k) for k in range(p + 1)])


@lru_cache(maxsize=None)
def flux_time_avg_1d(p):
    """Jet-slot weights giving the time-averaged flux at a cell center."""
    spec = jet_spec(1, p)
    w = np.zeros(spec.nslots)
    for b in range(p + 1):
        w[spec.slot[(0, b)]] = float(_T(b))
    return w


@lru_cache(maxsize=None)
def vertex_matrix_1d(p):
    """M with V[..., k] = sum_b jet[..., (k, b)] / b! (half-step vertex values)."""
    spec = jet_spec(1, p)
    M = np.zeros((p + 1, spec.nslots))
    for k in range(p + 1):
        for b in range(p + 1 - k):
            M[k, spec.slot[(k, b)]] = 1.0 / factorial(b)
    return M


@lru_cache(maxsize=None)
def deriv_corrections_1d(p):
    """For target derivative k+1: list of (source k+m, coefficient) to subtract."""
    out = {}
    for k in range(p):
        terms = []
        for m in range(3, p - k + 1):
            c = Fraction(1 - (-1) ** m, factorial(m) * 2**m)
            if c != 0:
                terms.append((k + m, float(c)))
        out[k] = tuple(terms)
    return out


@lru_cache(maxsize=None)
def recover_weights_1d(p):
    """u(center) = ubar - recover_w . dofs (even-derivative correction)."""
    w = avg_weights_1d(p).copy()
    w[0] = 0.0
    return w


@lru_cache(maxsize=None)
def edge_eval_1d(p, side):
    """Polynomial evaluation weights at xi = +-1/2 (side = +1 or -1)."""
    s = Fraction(side, 2)
    return _to_f([s**k / factorial(k) for k in range(p + 1)])


@lru_cache(maxsize=None)
def smoothness_form_1d(p):
    """Quadratic form B with beta = q . B . q over scaled DOFs.

    beta sums, over derivative orders d = 1..p, the cell integral of the
    squared d-th derivative; in scaled variables all mesh powers cancel.
    """
    B = [[Fraction(0)] * (p + 1) for _ in range(p + 1)]
    for d in range(1, p + 1):
        for k1 in range(d, p + 1):
            for k2 in range(d, p + 1):
                m = k1 + k2 - 2 * d
                if m % 2 == 0:
                    integ = Fraction(1, 2**m * (m + 1))
                    B[k1][k2] += integ / (factorial(k1 - d) * factorial(k2 - d))
    return np.array([[float(x) for x in row] for row in B])


# --- 2D ------------------------------------------------------------------

@lru_cache(maxsize=None)
def avg_weights_2d(p):
    spec = jet_spec(2, p)
    return _to_f([_A(k) * _A(l) for k, l in spec.spatial_indices])


@lru_cache(maxsize=None)
def quarter_weights_2d(p):
    """Quarter-cell averages (RU, RD, LU, LD); first letter is the x half."""
    spec = jet_spec(2, p)
    idx = spec.spatial_indices
    ru = _to_f([_R(k) * _R(l) for k, l in idx])
    rd = _to_f([_R(k) * _L(l) for k, l in idx])
    lu = _to_f([_L(k) * _R(l) for k, l in idx])
    ld = _to_f([_L(k) * _L(l) for k, l in idx])
    return ru, rd, lu, ld


@lru_cache(maxsize=None)
def flux_profile_weights_2d(p):
    """Side-and-time averaged flux weights over jet slots.

    fU/fD: x-flux at a cell center, averaged over the upper/lower half in y
    and over the half-step in time; gR/gL likewise for the y-flux over x
    halves.  Only slots with zero derivative order in the flux direction
    contribute.
    """
    spec = jet_spec(2, p)
    fU = np.zeros(spec.nslots)
    fD = np.zeros(spec.nslots)
    gR = np.zeros(spec.nslots)
    gL = np.zeros(spec.nslots)
    for (k, l, b), s in spec.slot.items():
        if k == 0:
            fU[s] = float(_R(l) * _T(b))
            fD[s] = float(_L(l) * _T(b))
        if l == 0:
            gR[s] = float(_R(k) * _T(b))
            gL[s] = float(_L(k) * _T(b))
    return fU, fD, gR, gL


@lru_cache(maxsize=None)
def vertex_matrix_2d(p):
    spec = jet_spec(2, p)
    M = np.zeros((spec.ndof, spec.nslots))
    for q, (k, l) in enumerate(spec.spatial_indices):
        for b in range(p + 1 - k - l):
            M[q, spec.slot[(k, l, b)]] = 1.0 / factorial(b)
    return M


@lru_cache(maxsize=None)
def deriv_corrections_2d(p):
    """Correction terms of the 2D derivative central differences.

    Keyed by (k, l, axis): the terms subtracted when producing the
    derivative of order (k+1, l) (axis 0) or (k, l+1) (axis 1) from the
    vertex values of order (k, l).  Each term is (dof_slot, coefficient).
    """
    spec = jet_spec(2, p)
    out = {}
    for k, l in spec.spatial_indices:
        rem = p - k - l
        if rem < 1:
            continue
        xs = []
        for s in range(3, rem + 1):
            c = Fraction(1 - (-1) ** s, factorial(s) * 2**s)
            if c != 0:
                xs.append((spec.dof_slot[(k + s, l)], float(c)))
        for t in range(2, rem + 1):
            for s in range(1, rem - t + 1):
                num = (1 - (-1) ** s) * (1 + (-1) ** t)
                c = Fraction(num, 2 * factorial(s) * factorial(t) * 2 ** (s + t))
                if c != 0:
                    xs.append((spec.dof_slot[(k + s, l + t)], float(c)))
        out[(k, l, 0)] = tuple(xs)
        ys = []
        for t in range(3, rem + 1):
            c = Fraction(1 - (-1) ** t, factorial(t) * 2**t)
            if c != 0:
                ys.append((spec.dof_slot[(k, l + t)], float(c)))
        for t in range(1, rem + 1):
            for s in range(2, rem - t + 1):
                num = (1 + (-1) ** s) * (1 - (-1) ** t)
                c = Fraction(num, 2 * factorial(s) * factorial(t) * 2 ** (s + t))
                if c != 0:
                    ys.append((spec.dof_slot[(k + s, l + t)], float(c)))
        out[(k, l, 1)] = tuple(ys)
    return out


@lru_cache(maxsize=None)
def recover_weights_2d(p):
    w = avg_weights_2d(p).copy()
    w[0] = 0.0
    return w


@lru_cache(maxsize=None)
def corner_eval_2d(p, sx, sy):
    """Polynomial evaluation weights at (xi, eta) = (sx/2, sy/2), s = +-1."""
    spec = jet_spec(2, p)
    fx = Fraction(sx, 2)
    fy = Fraction(sy, 2)
    return _to_f(
        [fx**k * fy**l / (factorial(k) * factorial(l)) for k, l in spec.spatial_indices]
    )


@lru_cache(maxsize=None)
def smoothness_form_2d(p):
    """2D smoothness quadratic form over packed spatial DOF slots."""
    spec = jet_spec(2, p)
    idx = spec.spatial_indices
    n = len(idx)
    B = [[Fraction(0)] * n for _ in range(n)]

    def integ(m):
        return Fraction(1, 2**m * (m + 1)) if m % 2 == 0 else Fraction(0)

    for dk, dl in idx:
        if dk + dl == 0:
            continue
        for a, (k1, l1) in enumerate(idx):
            if k1 < dk or l1 < dl:
                continue
            for b, (k2, l2) in enumerate(idx):
                if k2 < dk or l2 < dl:
                    continue
                ix = integ(k1 + k2 - 2 * dk) / (factorial(k1 - dk) * factorial(k2 - dk))
                iy = integ(l1 + l2 - 2 * dl) / (factorial(l1 - dl) * factorial(l2 - dl))
                B[a][b] += ix * iy
    return np.array([[float(x) for x in row] for row in B])


@lru_cache(maxsize=None)
def highest_order_slots(sdim, p):
    spec = jet_spec(sdim, p)
    return np.array(
        [s for s, t in enumerate(spec.spatial_indices) if sum(t) == p],
        dtype=np.int64,
    )
