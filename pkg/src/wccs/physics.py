"""Flux evaluators for scalar conservation laws.

A physics object provides fluxes on plain arrays and on jets, wave speeds
for the CFL policy, and (for systems) an eigensystem used by the
characteristic limiter.  Conserved arrays carry the component axis first:
``U[c, ...cells]``.  Scalar laws return ``None`` from ``eigensystem`` which
the limiter treats as the identity projection.
"""

from __future__ import annotations

import numpy as np


class LinearAdvection1D:
    """u_t + a u_x = 0."""

    ncomp = 1
    names = ("u",)

    def __init__(self, a=1.0):
        self.a = float(a)

    def flux(self, U):
        return self.a * U

    def flux_jets(self, U):
        return [self.a * U[0]]

    def max_wave_speed(self, U, t=None):
        return np.full(U.shape[1:], abs(self.a))

    def eigensystem(self, U):
        return None


class LinearAdvection2D:
    """u_t + a u_x + b u_y = 0."""

    ncomp = 1
    names = ("u",)

    def __init__(self, a=1.0, b=1.0):
        self.a = float(a)
        self.b = float(b)

    def flux_x(self, U):
        return self.a * U

    def flux_y(self, U):
        return self.b * U

    def flux_jets(self, U):
        return [self.a * U[0]], [self.b * U[0]]

    def max_wave_speed(self, U, t=None):
        shape = U.shape[1:]
        return np.full(shape, abs(self.a)), np.full(shape, abs(self.b))

    def eigensystem(self, U, theta=None):
        return None


class Burgers1D:
    """u_t + (u^2 / 2)_x = 0."""

    ncomp = 1
    names = ("u",)

    def flux(self, U):
        return 0.5 * U * U

    def flux_jets(self, U):
        return [0.5 * (U[0] * U[0])]

    def max_wave_speed(self, U, t=None):
        return np.abs(U[0])

    def eigensystem(self, U):
        return None
