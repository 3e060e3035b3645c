"""Exact period averages on definite quaternion algebras over Q.

Class sets and Brandt matrices of special orders, ideal class maps from
imaginary quadratic fields, Hecke eigensystems, and the average-value
identities and lower bounds built from toric periods.
"""

from .errors import *  # noqa: F401,F403
from .arith import factorize, kronecker, hilbert_symbol, short_vectors  # noqa: F401
from .quadfield import make_field, class_group, characters, splitting  # noqa: F401
from .quatalg import LevelType, validate_level, mass, class_set, brandt  # noqa: F401
from .embeddings import admissible, class_map_for, balanced_criterion, stability_status  # noqa: F401
from .spectra import spectral_data, period, eigensystems  # noqa: F401
from .formulas import (  # noqa: F401
    C_constant, c_constant, lambda_factor, predicted_lvalue, verify_double_average,
    verify_theorem_prime, verify_thm2, verify_stable_single, semistable_bounds_check,
    lower_bounds_and_certificates, SymbolicLValue, VerificationReport,
)

__version__ = "0.1.0"
