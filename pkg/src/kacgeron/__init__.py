"""Real zeros of random polynomials in the Kac-Geronimus family.

The orthonormal polynomials phi_m on the unit circle with constant
real Verblunsky coefficient alpha serve as the basis; random
combinations with i.i.d. standard Gaussian weights generalize the Kac
ensemble, which is the alpha = 0 slice.  core evaluates the basis,
intensity turns it into the expected density of real zeros, and
expectation integrates that density to the expected count together
with its growth law.  montecarlo estimates the same count by sampling
and root counting, and cli wires everything to the command line.
"""

from .core import (
    BranchValues,
    CancellationWarning,
    GeronimusParams,
    PolyPair,
    ScaledPolyPair,
    branch_values,
    chebyshev_u,
    eval_pair_closed_form,
    eval_pair_recurrence,
    eval_pair_scaled,
)
from .errors import (
    BranchCutError,
    DegenerateKernelError,
    EmptyRangeError,
    IllConditionedFitError,
    MissingCoefficientError,
    PoleError,
    QuadratureError,
    RootCountDiagnosticError,
)
from .expectation import (
    ExpansionReport,
    QuadratureConfig,
    a0_alpha,
    asymptotic_estimate,
    expected_real_zeros,
    fit_expansion,
    kac_expected_zeros,
    wilkins_a0,
)
from .intensity import (
    BasisFamily,
    IntensityProfile,
    b_limit,
    b_ratio,
    cd_ratio_intensity,
    geronimus_basis,
    h_limit,
    h_n,
    h_n_direct,
    kernel_intensity,
    monomial_basis,
    sample_profile,
    verify_h_error_envelope,
)
from .montecarlo import (
    RootCountConfig,
    SimulationReport,
    colleague_matrix,
    count_real_roots,
    run_simulation,
    sample_polynomial,
)
from .sturm import count_real_roots_exact

__version__ = "0.1.0"

__all__ = [
    "BranchValues",
    "CancellationWarning",
    "GeronimusParams",
    "PolyPair",
    "ScaledPolyPair",
    "branch_values",
    "chebyshev_u",
    "eval_pair_closed_form",
    "eval_pair_recurrence",
    "eval_pair_scaled",
    "BranchCutError",
    "DegenerateKernelError",
    "EmptyRangeError",
    "IllConditionedFitError",
    "MissingCoefficientError",
    "PoleError",
    "QuadratureError",
    "RootCountDiagnosticError",
    "ExpansionReport",
    "QuadratureConfig",
    "a0_alpha",
    "asymptotic_estimate",
    "expected_real_zeros",
    "fit_expansion",
    "kac_expected_zeros",
    "wilkins_a0",
    "BasisFamily",
    "IntensityProfile",
    "b_limit",
    "b_ratio",
    "cd_ratio_intensity",
    "geronimus_basis",
    "h_limit",
    "h_n",
    "h_n_direct",
    "kernel_intensity",
    "monomial_basis",
    "sample_profile",
    "verify_h_error_envelope",
    "RootCountConfig",
    "SimulationReport",
    "colleague_matrix",
    "count_real_roots",
    "run_simulation",
    "sample_polynomial",
    "count_real_roots_exact",
    "__version__",
]
