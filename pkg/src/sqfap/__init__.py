"""Squarefree numbers in arithmetic progressions: exact error terms,
exponential sums, a sawtooth Fourier approximation, and a Selberg sieve for
square detection, with a CLI for desk-scale experiments."""

from .arith import (
    IntervalTooLargeError,
    MobiusTable,
    Modulus,
    is_prime,
    mobius_sieve,
    mod_inverse,
    squarefree_indicator,
    tau3,
)
from .backend import BACKEND
from .decomposition import (
    DecompositionRecord,
    ParameterSchedule,
    RegimeError,
    bound_envelope,
    decompose,
    head_psi_parts,
    parameter_schedule,
    split_count,
    tail_pair_counts,
)
from .distribution import (
    ErrorRecord,
    MainTermValue,
    ScanCapExceededError,
    count_squarefree_in_progression,
    error_term,
    least_squarefree_in_progression,
    main_term,
    reference_term,
    variance_over_residues,
)
from .expsums import (
    ExpSumValue,
    complete_mixed_sum,
    inverse_square_phase_sum,
    linear_phase_sum,
    max_twisted_mobius_sum,
    short_kloosterman_sum,
    twisted_mobius_sum,
    weil_constant_scan,
)
from .sawtooth import PsiApproximation, build_approximation, psi, psi_exact, psi_progression_sum
from .sieve import (
    SieveInstance,
    SieveReport,
    sieve_upper_bound,
    square_detection_instance,
    square_pair_count_bruteforce,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DecompositionRecord",
    "ErrorRecord",
    "ExpSumValue",
    "IntervalTooLargeError",
    "MainTermValue",
    "MobiusTable",
    "Modulus",
    "ParameterSchedule",
    "PsiApproximation",
    "RegimeError",
    "ScanCapExceededError",
    "SieveInstance",
    "SieveReport",
    "bound_envelope",
    "build_approximation",
    "complete_mixed_sum",
    "count_squarefree_in_progression",
    "decompose",
    "error_term",
    "head_psi_parts",
    "inverse_square_phase_sum",
    "is_prime",
    "least_squarefree_in_progression",
    "linear_phase_sum",
    "main_term",
    "max_twisted_mobius_sum",
    "mobius_sieve",
    "mod_inverse",
    "parameter_schedule",
    "psi",
    "psi_exact",
    "psi_progression_sum",
    "reference_term",
    "short_kloosterman_sum",
    "sieve_upper_bound",
    "split_count",
    "square_detection_instance",
    "square_pair_count_bruteforce",
    "squarefree_indicator",
    "tail_pair_counts",
    "tau3",
    "twisted_mobius_sum",
    "variance_over_residues",
    "weil_constant_scan",
]
