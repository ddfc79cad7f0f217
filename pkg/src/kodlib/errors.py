"""Exception hierarchy shared by all kodlib modules."""


class KodlibError(Exception):
    """Base class for every error raised by kodlib."""


class ValidationError(KodlibError, ValueError):
    """Input data is malformed or describes no admissible object."""


class UnsupportedError(ValidationError):
    """The configuration is outside the range the formulas cover."""


class ConsistencyError(KodlibError):
    """A proven identity or inequality failed on the supplied data.

    On genuine symplectic data this cannot happen, so the input is
    inconsistent (or was truncated by an enumeration bound).
    """


class UniquenessViolation(ConsistencyError):
    """The -1 classes orthogonal to a positive-genus surface are not pairwise orthogonal."""
