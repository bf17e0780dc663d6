"""Mehler-Heine asymptotics of q-hypergeometric polynomials and the zeros of their q-Bessel limits.

Modules
-------
numerics     precision contexts and conversions
qcore        q-numbers, q-Pochhammer symbols, q-Gamma, normalized ratios
qhyper       basic hypergeometric series and Jackson's second q-Bessel function
mehler       polynomial families, scaled polynomials and their limits
roots        polynomial root finding and zero location for entire functions
experiments  built-in zero experiments, convergence tables, zero census
cli          command-line front end
"""

from .errors import (
    BoundaryZeroError,
    BoxInstabilityError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    HypothesisError,
    MatchingError,
    PoleError,
    QMHError,
    TruncationError,
)
from .experiments import (
    ConvergenceRow,
    ExperimentConfig,
    ZeroCensus,
    builtin_experiment,
    convergence_table,
    imaginary_zero_census,
    limit_zeros,
    scaled_zeros,
)
from .mehler import (
    GeneralizedFamily,
    MHFamily,
    ScaledPolynomial,
    generalized_limit,
    kappa,
    mh_limit,
    mh_scale_factor,
    qn_limit,
    qn_scaled_polynomial,
    scaled_polynomial,
)
from .numerics import NumericContext, default_context, make_context
from .qcore import q_gamma, q_number, q_pochhammer, q_pochhammer_inf
from .qhyper import PhiSpec, eval_phi, limit_fn_bessel_form, limit_fn_z, phi_coefficients, q_bessel_j2
from .roots import Rect, ZeroRecord, count_zeros_rectangle, find_zeros_in_box, real_axis_zero_scan, solve_all_roots

__version__ = "0.1.0"
