"""Exceptions raised by biunimodular.

They extend the built-in `ValueError` (bad input) and `RuntimeError`
(numerical failure) so callers can keep catching the usual types.
"""

from typing_extensions import Optional


class DimensionError(ValueError):
    """Invalid dimension, non-square input or mismatched sizes."""


class ValidationError(ValueError):
    """An input violates a domain invariant (unitarity, unimodularity, ...)."""


class NotBiunimodularError(ValueError):
    """The vector is not (near-)biunimodular for the matrix."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class ConvergenceError(RuntimeError):
    """An iterative numerical kernel did not converge."""

    def __init__(self, message: str, iterations: Optional[int] = None) -> None:
        if iterations is not None:
            message = f"{message} after {iterations} iteration(s)"
        super().__init__(message)
        self.iterations = iterations


class AnalysisError(RuntimeError):
    """The analysis of a matrix produced a block too far from unitary."""


class CertificateError(RuntimeError):
    """A proven bound on a near-biunimodular vector failed at runtime."""


class QuantizationError(RuntimeError):
    """An orbit grew past the group order; the quantization is too fine."""


class SearchFailedError(RuntimeError):
    """No biunimodular vector was found where one was needed."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (best residual={residual:.3e})")
        self.residual = residual
