"""Isotropic positive definite kernels on compact two-point homogeneous spaces.

Kernels are Jacobi expansions K(t) = sum_k a_k P_k^{alpha,beta}(t) in the
variable t = cos(|xy|/2).  The package classifies strict positive
definiteness from the support of (a_k), evaluates kernels with certified
truncation, builds Gram matrices and explicit degenerate configurations, and
recovers coefficients by Gauss-Jacobi quadrature.
"""

from .errors import (
    CapExceeded,
    DegreeCapExceeded,
    DuplicateIndex,
    DuplicatePoint,
    InvalidField,
    LcmOverflow,
    NegativeCoefficient,
    NonSummable,
    SpecError,
    TruncationError,
)
from .jacobi import (
    JacobiParams,
    addition_constant,
    derivative_jacobi,
    eval_gegenbauer,
    eval_jacobi,
    eval_normalized,
    jacobi_at_one,
    jacobi_table,
    norm_squared,
    ratio_at_one,
    reflect,
)
from .spaces import (
    Family,
    GeometryUnsupported,
    Point,
    Space,
    antipodal_sample,
    catalog,
    embed_circle,
    make_point,
    random_point,
    random_points,
    zonal_argument,
    zonal_matrix,
)
from .kernels import (
    FiniteCoefficients,
    FiniteSupport,
    GeometricCoefficients,
    KernelExpansion,
    Status,
    StructuredSupport,
    Verdict,
    classify_spd,
    rp_gegenbauer_view,
    eval_kernel,
    meets_all_arithmetic_progressions,
    truncation_degree,
    validate_expansion,
    value_at_one,
)
from .gram import (
    antipodal_rank_degeneracy,
    build_gram,
    empirical_strictness_probe,
    finite_support_degeneracy,
    numerical_rank,
    parity_degeneracy,
    psd_report,
    roots_of_unity_degeneracy,
)
from .projection import (
    derivative_check,
    gauss_jacobi_rule,
    project_coefficient,
    recover_expansion,
)
from .formats import load_spec, read_points, write_points

__version__ = "0.1.0"
