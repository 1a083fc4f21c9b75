"""Generalized information functionals over finite Markov dynamics.

The package groups into five layers: chains and their evolution
(`markov`), convex functions and perspectives (`convexity`), information
functionals (`measures`), monotonicity traces and verdicts
(`monotonicity`), and the worked distortion-bound example (`bounds`).
File formats live in `io`, the command line in `cli`.
"""

from .errors import (
    ArityMismatchError,
    BadCoefficientsError,
    BadGridError,
    BadParamsError,
    DimensionMismatchError,
    DomainError,
    EmptySeriesError,
    MissingInitError,
    NonErgodicError,
    NotMarkovError,
    NotStationaryError,
    NotSymmetricError,
    OutOfValidityRangeError,
    ParseError,
    PsiAboveOneError,
    SupportMismatchError,
    TooManyLettersError,
    UnstableStepError,
    ZeroProbabilityError,
)
from .markov import (
    BalanceReport,
    Distribution,
    MeasureFamily,
    RateMatrix,
    StochasticMatrix,
    backward_matrix,
    build_example_chain,
    check_balance,
    evolve_distribution,
    evolve_measures,
    integrate_master_equation,
    stationary_distribution,
)
from .convexity import (
    BUILTIN_NAMES,
    ConvexFunction,
    ConvexityResult,
    PerspectiveFunction,
    builtin,
    parse_q_spec,
    perspective,
    verify_convexity,
)
from .measures import (
    JointDistribution,
    PairMeasure,
    embed_markov_triple,
    expected_mixed_measure_information,
    f_divergence,
    generalized_lautum_information,
    generalized_mutual_information,
    kl_divergence,
    measure_family_functional,
    mixed_measure_information,
    shannon_entropy,
    simple_extension_coefficients,
    zakai_ziv_functional,
)
from .monotonicity import (
    TRACE_KINDS,
    MonotonicityVerdict,
    TimeSeries,
    h_theorem_rate,
    trace_functional,
    verdict,
)
from .bounds import (
    BoundReport,
    EpsilonChannel,
    ExampleConfig,
    GridSpec,
    binary_entropy_bits,
    binary_entropy_nats,
    capacity_value,
    classical_bound,
    distortion_bound,
    optimize_s,
    oracle_channel_value,
    oracle_source_value,
    psi_exact,
    psi_limit,
    psi_lower,
    rate_distortion_value,
    report_to_dict,
    source_joint,
)

__version__ = "0.1.0"
