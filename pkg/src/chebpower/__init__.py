"""chebpower: randomized power iteration on Chebyshev-filtered spin
Hamiltonians, with exact, shot-noise, and Trotter-Fourier matrix-element
oracles and the diagnostics to audit convergence and perturbation behavior."""

from .chebyshev import (
    FilterSpec,
    affine_transform,
    apply_poly,
    bounds_from_fractions,
    chebyshev_value,
    gap_growth_report,
    normalization_C,
)
from .engine import (
    GradientSample,
    IterateState,
    RunTrace,
    StepSchedule,
    run_power_method,
    sample_gradient,
    step,
)
from .fejer import FejerExpansion, build_expansion, moment, reconstruction_error
from .diagnostics import (
    PerturbationReport,
    fidelity_with_subspace,
    growing_rate,
    perturbation_report,
    weyl_audit,
)
from .models import (
    SpectralReference,
    build_hubbard_jw,
    build_tfim,
    build_xxz,
    exact_reference,
)
from .oracle import (
    ElementCache,
    ElementEstimate,
    ExactOracle,
    HadamardBlockOracle,
    TrotterFourierOracle,
    cache_get_or_estimate,
    exact_filter_matrix,
    theorem_shot_count,
)
from .pauli import PauliHamiltonian, PauliString

__version__ = "0.1.0"

__all__ = [
    "FilterSpec",
    "affine_transform",
    "apply_poly",
    "bounds_from_fractions",
    "chebyshev_value",
    "gap_growth_report",
    "normalization_C",
    "GradientSample",
    "IterateState",
    "RunTrace",
    "StepSchedule",
    "run_power_method",
    "sample_gradient",
    "step",
    "FejerExpansion",
    "build_expansion",
    "moment",
    "reconstruction_error",
    "PerturbationReport",
    "fidelity_with_subspace",
    "growing_rate",
    "perturbation_report",
    "weyl_audit",
    "SpectralReference",
    "build_hubbard_jw",
    "build_tfim",
    "build_xxz",
    "exact_reference",
    "ElementCache",
    "ElementEstimate",
    "ExactOracle",
    "HadamardBlockOracle",
    "TrotterFourierOracle",
    "cache_get_or_estimate",
    "exact_filter_matrix",
    "theorem_shot_count",
    "PauliHamiltonian",
    "PauliString",
]
