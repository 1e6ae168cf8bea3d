"""Exception types shared across the package."""


class HyperCSError(Exception):
    """Base class for numerical failures raised by hypercs."""


class ConvergenceError(HyperCSError, RuntimeError):
    """A series, contour integral or quadrature did not reach its tolerance."""


class DivergenceError(HyperCSError, ValueError):
    """A hypergeometric series was requested outside its convergence domain."""


class TruncationError(HyperCSError, ValueError):
    """The Fock truncation is too small for the requested accuracy."""


class TruncationWarning(UserWarning):
    """The dropped tail of a truncated sum may exceed the working tolerance."""
