"""Alternating spectral sums of two Hermitian matrices.

The core object is F_N(f), the operator obtained by alternating N spectral
measurements of A and B, averaging the outcomes and applying f.  As N grows it
approaches f(aA + bB).  The subpackages evaluate it exactly, study its
convergence, reconstruct spectral projectors, and explore the signed
"pseudo-measures" behind it.
"""

__version__ = "0.1.0"

from .altint import AlternatingIntegral, alt_integral, converge_study  # noqa: E402
from .fourier import FourierFunction, fourier_measure, parse_function_spec  # noqa: E402
from .linalg import HermitianMatrix, SpectralData, eig_hermitian  # noqa: E402

__all__ = [
    "__version__",
    "AlternatingIntegral",
    "alt_integral",
    "converge_study",
    "FourierFunction",
    "fourier_measure",
    "parse_function_spec",
    "HermitianMatrix",
    "SpectralData",
    "eig_hermitian",
]
