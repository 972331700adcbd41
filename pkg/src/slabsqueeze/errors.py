"""Exception hierarchy.

Everything raised deliberately by the package derives from
:class:`SlabSqueezeError` so callers (notably the CLI) can separate physics
failures from programming errors.
"""


class SlabSqueezeError(Exception):
    """Base class for package errors."""


class PhysicsError(SlabSqueezeError):
    """The requested configuration has no well-defined steady-state spectrum."""


class OutOfRange(SlabSqueezeError, ValueError):
    pass


class MalformedTable(SlabSqueezeError, ValueError):
    pass


class BranchPointHit(PhysicsError):
    """1 + chi vanishes (or the tracked root leaves Re n > 0)."""


class LasingThreshold(PhysicsError):
    """|1 - r^2| fell below the lasing guard; the slab self-oscillates."""

    def __init__(self, message, energies=()):
        super().__init__(message)
        self.energies = tuple(energies)


class NonConvergent(PhysicsError):
    pass


class CrossoverSingularity(PhysicsError):
    pass


class TransparentMedium(PhysicsError):
    pass


class ZeroTransmission(PhysicsError):
    pass


class InconsistentMedium(PhysicsError):
    """Sign of chi'' disagrees with the sign of the occupation b."""


class InconsistentGrids(SlabSqueezeError, ValueError):
    pass


class ParseError(SlabSqueezeError):
    pass


class ValidationError(SlabSqueezeError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
