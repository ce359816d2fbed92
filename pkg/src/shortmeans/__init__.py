"""Short-interval mean-squares of arithmetic functions.

Exact tables of arithmetic functions, truncated weights and their Fourier
transforms, sporadic functions, Selberg-type integrals, autocorrelations of
sieve functions and mean values of the ternary divisor function.
"""

from .arith_tables import (ArithTable, LogPolynomial, SieveSpec, build_table, eratosthenes_transform,
                           log_polynomial, sieve_function_table)
from .errors import (DomainError, InsufficientDataError, RangeError, ShortMeansError,
                     UnsupportedParameterError)
from .integrals import (IntegralResult, MeanMode, modified_selberg, required_window, selberg, symmetry,
                        theorem4_report, weighted_selberg)
from .weights import TruncatedWeight, WeightSpec

__version__ = "0.1.0"

__all__ = [
    "ArithTable", "LogPolynomial", "SieveSpec", "build_table", "eratosthenes_transform", "log_polynomial",
    "sieve_function_table", "DomainError", "InsufficientDataError", "RangeError", "ShortMeansError",
    "UnsupportedParameterError", "IntegralResult", "MeanMode", "modified_selberg", "required_window",
    "selberg", "symmetry", "theorem4_report", "weighted_selberg", "TruncatedWeight", "WeightSpec",
]
