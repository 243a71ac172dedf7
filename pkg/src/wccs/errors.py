"""Exception types shared across the package."""


class WccsError(Exception):
    """Base class for solver errors."""


class ShapeError(WccsError):
    """Operands have incompatible jet shape (dimension or degree)."""


class ConfigError(WccsError):
    """Invalid configuration (unknown case, unsupported order, bad flags)."""


class UnsupportedError(WccsError):
    """Requested a feature the case does not provide (e.g. exact solution)."""


class JetDivisionError(WccsError, ZeroDivisionError):
    """Reciprocal of a jet whose constant part is (numerically) zero.

    ``flat_cell`` is the offending position in the flattened trailing axes,
    ``cell_shape`` the trailing shape it refers to.
    """

    def __init__(self, msg, flat_cell=None, cell_shape=None):
        super().__init__(msg)
        self.flat_cell = flat_cell
        self.cell_shape = cell_shape


class PhysicsError(WccsError):
    """Inadmissible state (nonpositive density/pressure, NaN) during a run.

    Carries the cell index and simulation time where the failure occurred,
    when known.
    """

    def __init__(self, msg, cell=None, time=None):
        if cell is not None or time is not None:
            msg = f"{msg} (cell={cell}, t={time})"
        super().__init__(msg)
        self.cell = cell
        self.time = time
