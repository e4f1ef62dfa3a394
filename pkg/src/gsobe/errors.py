"""Exception types shared across the package."""


class GsobeError(Exception):
    """Base class for all package errors."""


class StructuralError(GsobeError, ValueError):
    """Inputs do not fit together (length mismatch, different grids or lattices)."""


class ParameterError(GsobeError, ValueError):
    """A numeric parameter is outside its admissible range."""


class UnsupportedRegionError(ParameterError):
    """No closed form is known for the requested sign region."""


class VerificationFailure(GsobeError):
    """An identity that should hold exactly did not.

    ``terms`` holds the offending ``(term, coefficient)`` pairs.
    """

    def __init__(self, message, terms=()):
        super().__init__(message)
        self.terms = list(terms)
