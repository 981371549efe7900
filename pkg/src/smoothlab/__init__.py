"""smoothlab: exact smooth-number counting, Dickman rho evaluation, and
shifted-totient sum experiments at desk scale."""

from .census import (
    SmoothQuery,
    SmoothRange,
    enumerate_smooth,
    psi,
    psi_coprime,
    psi_enum_oracle,
    psi_progression,
    smooth_flags,
)
from .dickman import (
    PsiEstimate,
    RhoTable,
    build_rho_table,
    psi_estimate,
    rho,
    rho_asymptotic,
    rho_log,
    rho_prime,
    write_rho_csv,
)
from .errors import (
    AccuracyError,
    CapacityError,
    DomainError,
    NonDifferentiableError,
    SmoothlabError,
)
from .experiments import (
    DiscrepancyReport,
    ErrorFit,
    FtRatioRow,
    RangeFlags,
    ScanConfig,
    ScanRecord,
    convergence_scan,
    error_fit,
    ft_ratio_scan,
    granville_discrepancy,
    range_check,
)
from .shifted import (
    AuxAverages,
    DeltaPolicy,
    IntegralResult,
    MainTerms,
    MobiusSplit,
    ShiftedSumQuery,
    ZETA2_INV,
    aux_averages,
    i_integral,
    main_terms,
    t_exact,
    t_exact_fraction,
    t_via_mobius,
    v_exact,
    v_via_abel,
)
from .sieve import (
    DEFAULT_SEGMENT_CAPACITY,
    ArithTable,
    is_smooth,
    sieve_range,
)

__version__ = "0.1.0"

__all__ = [
    "ArithTable",
    "AuxAverages",
    "AccuracyError",
    "CapacityError",
    "DEFAULT_SEGMENT_CAPACITY",
    "DeltaPolicy",
    "DiscrepancyReport",
    "DomainError",
    "ErrorFit",
    "FtRatioRow",
    "IntegralResult",
    "MainTerms",
    "MobiusSplit",
    "NonDifferentiableError",
    "PsiEstimate",
    "RangeFlags",
    "RhoTable",
    "ScanConfig",
    "ScanRecord",
    "ShiftedSumQuery",
    "SmoothQuery",
    "SmoothRange",
    "SmoothlabError",
    "ZETA2_INV",
    "aux_averages",
    "build_rho_table",
    "convergence_scan",
    "enumerate_smooth",
    "error_fit",
    "ft_ratio_scan",
    "granville_discrepancy",
    "i_integral",
    "is_smooth",
    "main_terms",
    "psi",
    "psi_coprime",
    "psi_enum_oracle",
    "psi_estimate",
    "psi_progression",
    "range_check",
    "rho",
    "rho_asymptotic",
    "rho_log",
    "rho_prime",
    "sieve_range",
    "smooth_flags",
    "t_exact",
    "t_exact_fraction",
    "t_via_mobius",
    "v_exact",
    "v_via_abel",
    "write_rho_csv",
]
