"""Chebyshev spectral filter: affine window transform, polynomial evaluation
valid on the whole real line, normalization constant, and the filtered-gap
growth report."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import SpectralReference
from .pauli import AffineOperator, LinearOperator, PauliHamiltonian

MAX_EXACT_DEGREE = 20


@dataclass(frozen=True)
class FilterSpec:
    """Spectral window [lambda_lb, lambda_ub] and Chebyshev degree.

    Eigenvalues inside the window map into [-1, 1] under the affine transform;
    anything below lambda_lb maps left of -1, where |T_ell| grows
    exponentially with the degree.
    """

    lambda_lb: float
    lambda_ub: float
    degree: int

    def __post_init__(self) -> None:
        if not self.lambda_lb < self.lambda_ub:
            raise ValueError("need lambda_lb < lambda_ub")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")

    @property
    def scale(self) -> float:
        """Multiplier of H in the affine transform."""
        return 2.0 / (self.lambda_ub - self.lambda_lb)

    @property
    def shift(self) -> float:
        """Identity coefficient of the affine transform."""
        return 1.0 - self.scale * self.lambda_ub


def affine_transform(lam: float, spec: FilterSpec) -> float:
    """lambda_bar = 2(lambda - lambda_ub)/(lambda_ub - lambda_lb) + 1.

    Maps lambda_ub -> 1 and lambda_lb -> -1.
    """
    return spec.scale * (lam - spec.lambda_ub) + 1.0


def transformed_operator(H: PauliHamiltonian, spec: FilterSpec) -> AffineOperator:
    """The affinely transformed Hamiltonian as a lazy operator."""
    return AffineOperator(H, spec.scale, spec.shift)


def bounds_from_fractions(
    ref: SpectralReference, f_ub: float, f_lb: float, degree: int
) -> FilterSpec:
    """Window offsets as fractions of the spectral span:

        lambda_ub = lambda_max + f_ub * (lambda_max - lambda_min)
        lambda_lb = lambda_min + f_lb * (lambda_max - lambda_min)
    """
    lam_min = float(ref.eigenvalues[0])
    lam_max = float(ref.eigenvalues[-1])
    span = lam_max - lam_min
    lb = lam_min + f_lb * span
    ub = lam_max + f_ub * span
    if lb >= ub:
        raise ValueError(f"fractions give lambda_lb={lb} >= lambda_ub={ub}")
    return FilterSpec(lb, ub, degree)


def chebyshev_value(ell: int, x: float) -> float:
    """T_ell(x) for any real x.

    Inside [-1, 1] the cosine form is used; outside, the closed-form identity
    ((x - sqrt(x^2-1))^ell + (x + sqrt(x^2-1))^ell) / 2, which avoids arccos
    domain errors and is stable for the amplified region.
    """
    if ell == 0:
        return 1.0
    if abs(x) <= 1.0:
        return math.cos(ell * math.acos(x))
    s = math.sqrt(x * x - 1.0)
    a = abs(x)
    value = 0.5 * ((a - s) ** ell + (a + s) ** ell)
    if x < 0.0 and ell % 2 == 1:
        value = -value
    return value


def chebyshev_monomial_coeffs(ell: int) -> np.ndarray:
    """Monomial coefficients d_j of T_ell(x) = sum_j d_j x^j, exact integers.

    Refuses ell > MAX_EXACT_DEGREE: the leading coefficient 2**(ell-1) and the
    alternating sums below it start costing float precision well before they
    overflow, and the benchmarks never need degree above 8.
    """
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    if ell > MAX_EXACT_DEGREE:
        raise ValueError(f"monomial expansion limited to degree {MAX_EXACT_DEGREE}")
    if ell == 0:
        return np.array([1.0])
    prev, cur = [1], [0, 1]
    for _ in range(2, ell + 1):
        nxt = [0] * (len(cur) + 1)
        for j, c in enumerate(cur):
            nxt[j + 1] += 2 * c
        for j, c in enumerate(prev):
            nxt[j] -= c
        prev, cur = cur, nxt
    return np.array(cur, dtype=float)


def filtered_eigenvalues(spec: FilterSpec, ref: SpectralReference) -> np.ndarray:
    """T_ell applied to every affinely transformed eigenvalue."""
    return np.array(
        [chebyshev_value(spec.degree, affine_transform(lam, spec)) for lam in ref.eigenvalues]
    )


def normalization_C(spec: FilterSpec, ref: SpectralReference) -> float:
    """C = max_lambda |T_ell(lambda_bar)| = operator norm of the filter."""
    return float(np.max(np.abs(filtered_eigenvalues(spec, ref))))


def gap_growth_report(
    spec: FilterSpec, ref: SpectralReference, ell_max: int = 10
) -> list[tuple[int, float]]:
    """Filtered gap |T_ell(lam_1) - T_ell(lam_2)| for ell = 1..ell_max.

    With lam_bar_1 < -1 the log-gap grows asymptotically linearly in ell with
    slope log(|lam_bar_1| + sqrt(lam_bar_1^2 - 1)).
    """
    lam1 = float(ref.eigenvalues[0])
    lam2 = float(ref.eigenvalues[ref.degeneracy])
    x1 = affine_transform(lam1, spec)
    if x1 >= -1.0:
        raise ValueError(
            f"ground state maps to {x1:.4f} >= -1; the filter does not separate it"
        )
    x2 = affine_transform(lam2, spec)
    return [
        (ell, abs(chebyshev_value(ell, x1) - chebyshev_value(ell, x2)))
        for ell in range(1, ell_max + 1)
    ]


def gap_growth_slope(spec: FilterSpec, ref: SpectralReference) -> float:
    """Theoretical asymptotic slope log(|lam_bar_1| + sqrt(lam_bar_1^2 - 1))."""
    x1 = abs(affine_transform(float(ref.eigenvalues[0]), spec))
    if x1 <= 1.0:
        raise ValueError("slope defined only for ground state mapped outside [-1, 1]")
    return math.log(x1 + math.sqrt(x1 * x1 - 1.0))


def apply_poly(op: LinearOperator, coeffs: np.ndarray, v: np.ndarray) -> np.ndarray:
    """p(A) v for p = sum_k coeffs[k] T_k via the backward (Clenshaw)
    recurrence; len(coeffs)-1 matvecs, no dense materialization."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.size == 0:
        raise ValueError("empty Chebyshev coefficient list")
    v = np.asarray(v, dtype=np.complex128)
    b1 = np.zeros_like(v)
    b2 = np.zeros_like(v)
    for k in range(len(coeffs) - 1, 0, -1):
        b1, b2 = coeffs[k] * v + 2.0 * op.matvec(b1) - b2, b1
    return coeffs[0] * v + op.matvec(b1) - b2


def apply_chebyshev_filter(
    H: PauliHamiltonian, spec: FilterSpec, v: np.ndarray
) -> np.ndarray:
    """T_ell(Hbar) v with Hbar the affinely transformed Hamiltonian."""
    coeffs = np.zeros(spec.degree + 1)
    coeffs[spec.degree] = 1.0
    return apply_poly(transformed_operator(H, spec), coeffs, v)
