"""Inverse Euler totients, sparsely totient numbers and the extremal maps N1, N2, N3."""
from .arith import divisors, euler_phi, factorize, is_prime, nth_prime, primes_up_to, primorial, valuation
from .errors import (
    CorruptCacheError,
    CriterionViolatedError,
    DomainError,
    HorizonTooSmallError,
    HypothesisError,
    NoProgressionError,
    NotATotientError,
    Overflow64Error,
    ResourceError,
    TotientError,
    VerificationError,
)
from .inverse_totient import (
    PreimageSet,
    check_preimage_bounds,
    inverse_phi,
    inverse_phi_oracle,
    is_totient,
    klee_classify,
    multiplicity,
    n2,
    n3,
    ratio_n2_n3,
)
from .progressions import ProgressionRecord, erdos_scaling_test, longest_ap, longest_gp
from .sieve import HorizonPolicy, PhiSieve, build_phi_sieve, safe_horizon
from .sparsely_totient import masser_shiu_generate, n1_of, n1_set_up_to, n1_values, sieve_for

__version__ = "0.1.0"
