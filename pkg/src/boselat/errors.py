"""Exception hierarchy shared by all modules."""


class BoselatError(Exception):
    """Base class for every error raised by the package."""


class CapacityError(BoselatError):
    """A Fock sector would exceed the configured dimension cap."""


class NonHermitianError(BoselatError):
    pass


class NonDiagonalError(BoselatError):
    """Fock states are not eigenvectors (nonzero tunneling)."""


class UnsupportedSectorError(BoselatError):
    pass


class LayoutError(BoselatError):
    """Sector or coupling map is inconsistent with the qubit layout."""


class WindowError(BoselatError):
    """Pulse evaluated outside its gate window."""


class ShapeError(BoselatError):
    """Pulse parameters cannot realize the requested shape."""


class DegeneracyError(BoselatError):
    """Baseline parameters violate the logical-level degeneracy condition."""


class InfeasibleError(BoselatError):
    """No leakage-free gate exists for the requested quantization integers."""


class StepSizeError(BoselatError):
    pass


class ScheduleError(BoselatError):
    """Schedule does not follow the dependence pattern of its gate type."""


class ConfigError(BoselatError):
    pass


class ToleranceError(BoselatError):
    """A numerical check exceeded its threshold."""
