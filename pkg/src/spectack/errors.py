"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 2, file
problems exit 3, numerical failures exit 4.
"""

__all__ = [
    "GraphFormatError",
    "ConvergenceError",
    "DegenerateSpectrumError",
    "RestartRequired",
]


class GraphFormatError(ValueError):
    """An edge-list or CSV file is structurally invalid."""


class ConvergenceError(RuntimeError):
    """An iterative numerical routine failed to converge within its budget."""


class DegenerateSpectrumError(ValueError):
    """Eigenvalue gaps are too small for a formula that needs distinct eigenvalues."""


class RestartRequired(RuntimeError):
    """The incremental eigenvector update produced a zero column; the caller
    must recompute the eigensolution exactly."""
