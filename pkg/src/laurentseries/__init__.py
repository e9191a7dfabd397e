"""Laurent series of holomorphic functions on Reinhardt domains in C^n.

Coefficients come from torus quadrature, seminorms from exact monomial
formulas or sampled suprema, and the convergence checks compare exactly
computed term seminorms.
"""

from .bounds import (BoundCertificate, factor_M, factor_M_corrected, global_constant_increments,
                     global_constant_sum, kernel_U, mu, prop6_bound_check)
from .coefficients import CoefficientTable, aliasing_estimate, coefficients_dft, derivative_shift_check
from .config import ExperimentConfig
from .errors import ConfigurationError, DataInconsistencyError, DomainError, LaurentError
from .geometry import AxisRange, DomainSpec, Polyannulus, ReinhardtCover, rational_cover, sample_grid, shadow
from .multiindex import box_index_bound, box_points, linf_norm, sigma, sigma_inverse
from .seminorms import (DerivativeSups, SeminormReport, box_seminorm, ck_seminorm, lemma5_check,
                        monomial_box_seminorm_exact)
from .series import (box_partial_sum_error, net_cauchy_check, partial_sum, permuted_convergence_check,
                     tail_seminorm_sum)
from .testfns import (AnalyticTestFunction, Lacunary, LaurentPolynomial, Rational2D, builtin_suite, geometric,
                      make_function, monomial, reciprocal)

__version__ = "0.1.0"

__all__ = [
    "AnalyticTestFunction", "AxisRange", "BoundCertificate", "CoefficientTable", "ConfigurationError",
    "DataInconsistencyError", "DerivativeSups", "DomainError", "DomainSpec", "ExperimentConfig", "Lacunary",
    "LaurentError", "LaurentPolynomial", "Polyannulus", "Rational2D", "ReinhardtCover", "SeminormReport",
    "aliasing_estimate", "box_index_bound", "box_partial_sum_error", "box_points", "box_seminorm", "builtin_suite",
    "ck_seminorm", "coefficients_dft", "derivative_shift_check", "factor_M", "factor_M_corrected", "geometric",
    "global_constant_increments", "global_constant_sum", "kernel_U", "lemma5_check", "linf_norm", "make_function",
    "monomial", "monomial_box_seminorm_exact", "mu", "net_cauchy_check", "partial_sum",
    "permuted_convergence_check", "prop6_bound_check", "rational_cover", "reciprocal", "sample_grid", "shadow",
    "sigma", "sigma_inverse", "tail_seminorm_sum",
]
