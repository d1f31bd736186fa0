"""Exception hierarchy shared by all catqfi modules."""


class CatqfiError(Exception):
    """Base class for all catqfi errors."""


class TruncationError(CatqfiError):
    """A Fock-space truncation bound cannot hold the requested state."""


class ParameterError(CatqfiError):
    """An argument is outside its admissible range."""


class ShapeError(CatqfiError):
    """Operands have incompatible mode counts or dimensions."""


class DomainError(CatqfiError):
    """A target value lies outside the domain of an inversion."""


class NumericalError(CatqfiError):
    """An iterative or spectral computation failed to converge."""


class ApproximationDomainError(CatqfiError):
    """Inputs are outside the validity domain of an approximate form."""
