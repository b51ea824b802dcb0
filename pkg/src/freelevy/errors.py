"""Exception hierarchy shared by all modules."""


class FreeLevyError(Exception):
    """Base class for errors raised by this package."""


class SizeLimitError(FreeLevyError, ValueError):
    """A requested size exceeds a hard enumeration or storage cap."""


class ShapeError(FreeLevyError, ValueError):
    """Array or sequence dimensions do not match."""


class DepthError(FreeLevyError, ValueError):
    """A word needs more Fock depth than the space was built with."""


class MixedSpaceError(FreeLevyError, ValueError):
    """Operators living on different Fock spaces were combined."""


class MissingLawError(FreeLevyError, KeyError):
    """A marginal moment required by a mixed-moment evaluation is unknown."""


class RecursionCapError(FreeLevyError, RuntimeError):
    """The centering recursion went deeper than its configured cap."""


class PreconditionError(FreeLevyError, ValueError):
    """An input violates a documented precondition (e.g. symmetry)."""


class IntervalError(FreeLevyError, ValueError):
    """Time intervals overlap, are empty, or do not abut as required."""
