"""Divisors in prescribed intervals: exact counters for integers, shifted
primes, and multiplication tables, plus the analytic scaffolding (derived
parameters, order-of-magnitude brackets, density sums, sieve weights) needed
to check them against first-order predictions.
"""

from .arith import (
    Factorization,
    PrimeTable,
    build_prime_table,
    divisors,
    factorize,
    factorize_spf,
    has_divisor_in,
    is_in_script_p,
    mobius,
    omega_between,
    big_omega_between,
    pi_ap,
    prime_extremes,
    spf_sieve,
    tau_interval,
    tau_k,
    totient,
)
from .counting import (
    CountResult,
    QueryWindow,
    count_A,
    count_A_shifted,
    count_H,
    count_H_brute,
    count_H_shifted,
    count_H_shifted_window,
    sum_pi_ap_range,
)
from .errors import (
    CorruptCacheError,
    InvalidArgumentError,
    ResourceLimitError,
    TableTooSmallError,
    UnsupportedVersionError,
)
from .estimators import (
    AnalyticConstants,
    C315,
    DELTA,
    ParamPoint,
    c315_partial,
    derive_params,
    f_factor,
    ford_order,
    g_factor,
    G_function,
    phi_ratio_main,
    phi_ratio_main_with_interval,
    phi_ratio_sum,
    phi_sieve,
    prime_recip_tail_bound,
    shifted_main,
    sum_inv_phi_range,
    tenenbaum_main,
)
from .harness import (
    EXACT_EXPERIMENTS,
    EXPERIMENT_NAMES,
    ExperimentSpec,
    ReportRow,
    default_spec,
    emit_report,
    fnv1a64,
    get_prime_table,
    load_prime_cache,
    run_experiment,
    save_prime_cache,
    weighted_shifted_sum,
)
from .intervals import (
    DivisorPairDecomposition,
    IntervalUnion,
    decompose_pairs,
    divisor_log_union,
    measure_L,
    sum_L_density,
    triple,
    vitali_subcover,
)
from .weights import (
    SieveWeights,
    convolve_unit,
    convolve_unit_array,
    density_sum,
    lower_beta_weights,
    sifted_indicator_array,
    upper_beta_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticConstants",
    "C315",
    "CorruptCacheError",
    "CountResult",
    "DELTA",
    "DivisorPairDecomposition",
    "EXACT_EXPERIMENTS",
    "EXPERIMENT_NAMES",
    "ExperimentSpec",
    "Factorization",
    "G_function",
    "IntervalUnion",
    "InvalidArgumentError",
    "ParamPoint",
    "PrimeTable",
    "QueryWindow",
    "ReportRow",
    "ResourceLimitError",
    "SieveWeights",
    "TableTooSmallError",
    "UnsupportedVersionError",
    "big_omega_between",
    "build_prime_table",
    "c315_partial",
    "convolve_unit",
    "convolve_unit_array",
    "count_A",
    "count_A_shifted",
    "count_H",
    "count_H_brute",
    "count_H_shifted",
    "count_H_shifted_window",
    "decompose_pairs",
    "default_spec",
    "density_sum",
    "derive_params",
    "divisor_log_union",
    "divisors",
    "emit_report",
    "f_factor",
    "factorize",
    "factorize_spf",
    "fnv1a64",
    "ford_order",
    "g_factor",
    "get_prime_table",
    "has_divisor_in",
    "is_in_script_p",
    "load_prime_cache",
    "lower_beta_weights",
    "measure_L",
    "mobius",
    "omega_between",
    "phi_ratio_main",
    "phi_ratio_main_with_interval",
    "phi_ratio_sum",
    "phi_sieve",
    "pi_ap",
    "prime_extremes",
    "prime_recip_tail_bound",
    "run_experiment",
    "save_prime_cache",
    "shifted_main",
    "sifted_indicator_array",
    "spf_sieve",
    "sum_L_density",
    "sum_inv_phi_range",
    "sum_pi_ap_range",
    "tau_interval",
    "tau_k",
    "tenenbaum_main",
    "totient",
    "triple",
    "upper_beta_weights",
    "vitali_subcover",
    "weighted_shifted_sum",
]
