"""Volume entropy of metric roses and the length bounds it controls."""

__version__ = "0.1.0"

from .core import (
    CollarReport,
    ConvergenceError,
    EntropySolution,
    GroupSample,
    RoseLengths,
    ValidationError,
    validate_lengths,
)
from .entropy import (
    LimMatrix,
    lim_entropy,
    lim_matrix,
    perron_pair,
    positive_solution,
    rose_entropy,
    spectral_radius,
    theorem_sum,
)
from .census import (
    CensusCurve,
    ScaledLengths,
    census_curve,
    exact_ball_count,
    growth_rate_estimate,
)
from .bounds import (
    CertificateResult,
    bcgs_bound,
    certify,
    collar2_asymptotic,
    collar2_closed_form,
    collar_report,
    collark_asymptotic,
    exact_min_last_length,
    hyperbolic_collar_check,
)
