"""Credibilistic portfolio choice: fuzzy returns, credibilistic moments, risk
attitudes and optimal allocation of one risky and one riskless asset."""

from .errors import (
    CapabilityError,
    ConfigError,
    DomainError,
    ModelError,
    NumericFailure,
    PortkitError,
    SingularityError,
)
from .fuzzy import (
    Event,
    FuzzyNumber,
    Interval,
    alpha_cut,
    credibility,
    distribution,
    make_point,
    make_trapezoidal,
    make_triangular,
    membership_at,
    necessity,
    possibility,
    shift_scale,
)
from .moments import (
    BACKENDS,
    Integrand,
    MomentSet,
    central_moment,
    choquet_expectation,
    distributional_expectation,
    expectation,
    expected_value,
    kurtosis,
    moment_set,
    shifted_raw_moment,
    skewness,
    triangular_closed_moments,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .solver import (
    AllocationReport,
    PortfolioProblem,
    SmallRiskDecomposition,
    SweepRow,
    approx_allocation_order1,
    approx_allocation_order2,
    approx_allocation_order3,
    decompose_small_risk,
    exact_allocation,
    excess_return,
    foc_taylor_polynomial,
    hara_triangular_allocation,
    solve,
    sweep,
    total_utility,
)
from .utility import (
    RiskIndices,
    UtilityFunction,
    arrow_pratt,
    prudence,
    risk_indices,
    temperance,
)
