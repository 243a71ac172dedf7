"""Run-time configuration of the schemes."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ConfigError
from .limiter import LimiterParams

DEFAULT_CFL = {2: 0.4, 3: 0.3, 4: 0.25}

# Largest half-step Courant numbers for which the linear schemes are stable
# (full-degree candidate); used only to warn on user overrides.
STABILITY_CFL = {2: 0.5, 3: 0.384, 4: 0.304}


@dataclass(frozen=True)
class SchemeConfig:
    """Order and limiter switches of a scheme run.

    ``order`` is the formal accuracy (2, 3 or 4); the per-cell polynomial
    degree is ``order - 1``.  ``weighted`` selects the limited scheme,
    ``characteristic`` enables characteristic-space limiting for systems
    (ignored for scalar laws).
    """

    order: int = 3
    cfl: float | None = None
    weighted: bool = True
    characteristic: bool = True
    alpha: float = 2.0
    eps: float = 1e-40

    def __post_init__(self):
        if self.order not in (2, 3, 4):
            raise ConfigError(f"unsupported order {self.order} (expected 2, 3 or 4)")

    @property
    def p(self):
        return self.order - 1

    @property
    def cfl_value(self):
        return DEFAULT_CFL[self.order] if self.cfl is None else self.cfl

    @property
    def limiter_params(self):
        return LimiterParams(alpha=self.alpha, eps=self.eps)

    def with_(self, **kw):
        return replace(self, **kw)
