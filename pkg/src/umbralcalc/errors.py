"""Exception taxonomy for the engine.

Every guard in the package raises one of these; nothing raises a bare
ValueError for a contract violation, so callers (and the CLI) can map
failures to stable diagnostic names.
"""


class UmbralError(Exception):
    """Base class for all engine errors."""


class UndefinedIndexError(UmbralError):
    """A generalized integer was requested beyond the validated bound."""


class DegenerateFamilyError(UmbralError):
    """A coefficient family has a zero generalized integer in range."""


class IndexOrderError(UmbralError):
    """Binomial-style indices out of order (k < 0 or k > n)."""


class BadModulusError(UmbralError):
    """Sector decomposition requested with modulus < 2."""


class DegreeOverflowError(UmbralError):
    """An operation would exceed the working degree bound."""


class BadParameterError(UmbralError):
    """A family or operator parameter is outside its admissible range."""


class NotDegreeLoweringError(UmbralError):
    """An operator expected to lower degree by exactly one does not."""


class BasisMismatchError(UmbralError):
    """A polynomial table is not a basic sequence for the given operator."""


class SingularOperatorError(UmbralError):
    """A triangular solve hit a zero pivot."""


class NotDeltaError(UmbralError):
    """A series needed constant term 0 and nonzero linear term."""


class NotInvertibleError(UmbralError):
    """A series needed a nonzero constant term."""


class MismatchedPairError(UmbralError):
    """An integral operator was paired with the wrong difference operator."""


class WrongFamilyError(UmbralError):
    """An operation is only defined for a specific coefficient family."""


class EigenSeriesError(UmbralError):
    """Eigenseries construction failed (operator not suitable)."""


class ConstantTermError(UmbralError):
    """Inverse raising requested on input with nonzero constant term."""
