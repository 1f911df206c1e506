"""Polynomial approximation of quaternionic slice functions.

Quaternions, slice functions, trigonometric kernels, convolution operators
along slice circles, compact axially symmetric domains and the explicit
error bounds that go with them.
"""

from .approximation import (
    ApproximationReport,
    cassini_operator_closed,
    convolve_pointwise,
    delayed_mean_operator,
    dvp_operator_closed,
    generalized_jackson_closed,
    generalized_jackson_operator,
    laurent_approx_on_sphere,
)
from .error_analysis import (
    AnalyticModulus,
    SampledModulus,
    best_approx_estimate,
    cassini_bound,
    dvp_bound,
    modulus_estimate,
    sup_error,
    verify_bound,
)
from .exceptions import BranchError, CertificationError, ConfigError, DomainError, SliceApproxError
from .geometry import (
    Ball,
    CassiniCell,
    StarlikeCompletion,
    UnitSphere,
    contains,
    example_boundary,
    sample,
    starlike_check,
)
from .kernels import DVP, FejerDelayed, GenJackson, Jackson, multipliers
from .quaternion import DEFAULT_UNIT, I, J, K, ONE, Quaternion, slice_decompose
from .slice_functions import (
    CassiniSeries,
    LaurentPolynomial,
    PowerSeries,
    RightPolynomial,
    SliceFunction,
    SphereSliceFunction,
    evaluate,
    extend_from_slice,
    is_intrinsic,
    representation_formula,
)

__version__ = "0.1.0"
