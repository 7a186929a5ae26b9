"""Ramanujan sums of integer and real arguments, expansion diagnostics, and
locally interpolating divisor-function expansions."""

from .arith import (
    PrimeFactorization,
    SieveTable,
    divisors,
    elementary_symmetric,
    factorize,
    mobius,
    mobius_range,
    sigma,
    sigma0_range,
    sigma1_range,
    totient,
    totient_range,
)
from .local import (
    N_MAX,
    DivisorPolynomial,
    ImpureCoefficients,
    LocalityReport,
    NTooLarge,
    divisor_polynomial,
    impure_coefficients,
    locality_report,
    recurrence_residual,
    sigma0_local,
    sigma1_local,
    sigma_local,
    sigma_via_recurrence,
)
from .series import (
    CoefficientRule,
    DivergentRequest,
    PartialSumTrace,
    SlopeFit,
    TailBound,
    coefficient,
    divergence_slope,
    expected_slope,
    geometric_checkpoints,
    partial_sum_trace,
    sigma_tilde,
    tail_bound,
    zeta,
    zeta_weighted_sum,
)
from .sums import (
    TAU_DENOM,
    TAU_INT,
    AsymptoticReport,
    NearSingularDenominator,
    asymptotic_residual_report,
    csum_int,
    csum_int_range,
    csum_real_direct,
    csum_real_divisor,
    csum_real_range,
    is_integer_argument,
    main_term_factor,
    pole_term_residual,
)

__version__ = "0.1.0"
