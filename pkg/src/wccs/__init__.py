"""Weighted compact central schemes for hyperbolic conservation laws.

A staggered-mesh finite-volume library: per-cell polynomial DOFs, one-step
space-time evolution via truncated Taylor jets, a weighted nonlinear
limiter with characteristic projection, a von Neumann stability analyzer,
and a benchmark suite for scalar advection and the compressible Euler
equations in 1D and 2D.
"""

from .config import SchemeConfig
from .errors import ConfigError, PhysicsError, ShapeError, UnsupportedError, WccsError

__all__ = [
    "SchemeConfig",
    "WccsError",
    "ShapeError",
    "PhysicsError",
    "ConfigError",
    "UnsupportedError",
]

__version__ = "0.1.0"
