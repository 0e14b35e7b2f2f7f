"""Exact distributions of prime-factor counts, an independent-factor model of
the exponent vector, and numerical diagnostics for their Poisson limits."""

from .dist import (
    BinomialTailBounds,
    JointPmf,
    Pmf,
    TvResult,
    binomial_pmf,
    binomial_tail_bound,
    poisson_pmf,
    product_joint,
    tv_distance,
    tv_distance_joint,
)
from .errors import CapError, DomainError, EmptyConditionError
from .factorstats import (
    CountMode,
    JointCounts,
    SetSpec,
    iter_segment_counts,
    joint_factor_counts,
    joint_pmf_of,
    oracle_factor_counts,
    smooth_part_distribution,
)
from .kubilius import (
    model_exact_pmf,
    model_sample_vector,
    model_tv_exact,
    sample_exponent_matrix,
)
from .primesets import (
    HarmonicSums,
    PrimeSet,
    count_primes,
    expexp_block,
    expexp_cutoff,
    harmonic_sums,
    is_prime,
    load_prime_set,
    primes_in_interval,
    save_prime_set,
    sieve_primes,
)
from .theorems import (
    TheoremReport,
    Thm1Config,
    Thm2Config,
    Thm3Config,
    check_cor32,
    check_corollary1,
    check_halasz,
    check_thm1,
    check_thm2,
    check_thm3,
    check_thm4_local,
)

__version__ = "0.1.0"

__all__ = [
    "BinomialTailBounds",
    "CapError",
    "CountMode",
    "DomainError",
    "EmptyConditionError",
    "HarmonicSums",
    "JointCounts",
    "JointPmf",
    "Pmf",
    "PrimeSet",
    "SetSpec",
    "TheoremReport",
    "Thm1Config",
    "Thm2Config",
    "Thm3Config",
    "TvResult",
    "binomial_pmf",
    "binomial_tail_bound",
    "check_cor32",
    "check_corollary1",
    "check_halasz",
    "check_thm1",
    "check_thm2",
    "check_thm3",
    "check_thm4_local",
    "count_primes",
    "expexp_block",
    "expexp_cutoff",
    "harmonic_sums",
    "is_prime",
    "iter_segment_counts",
    "joint_factor_counts",
    "joint_pmf_of",
    "load_prime_set",
    "model_exact_pmf",
    "model_sample_vector",
    "model_tv_exact",
    "oracle_factor_counts",
    "poisson_pmf",
    "primes_in_interval",
    "product_joint",
    "sample_exponent_matrix",
    "save_prime_set",
    "sieve_primes",
    "smooth_part_distribution",
    "tv_distance",
    "tv_distance_joint",
]
