"""Ground-truth comparisons and audits: subspace fidelity, eigenvalue
perturbation reports (interval filtering, Weyl inequality), and the
fidelity-growth-rate constant of the randomized iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import SpectralReference, reference_from_dense

# Re-exported: fidelity lives with the engine's hot loop but is a diagnostic.
from .engine import fidelity_with_subspace  # noqa: F401


@dataclass
class PerturbationReport:
    """Spectral comparison of a perturbed matrix against its noise-free
    counterpart.

    interval is [lambda_1 - ||E||, lambda_1 + ||E||]; when ||E|| is below half
    the spectral gap of the noise-free matrix, that interval isolates the
    perturbed smallest eigenvalue from the second one.
    """

    E_norm: float
    half_gap: float
    lam1: float
    lam2: float
    lam1_tilde: float
    lam2_tilde: float
    interval: tuple[float, float]
    overlaps: list[float]  # perturbed ground state(s) against the true ground projector
    hypothesis_holds: bool  # E_norm < half_gap
    interval_isolates: bool  # lam1_tilde inside, lam2_tilde outside

    def to_table_row(self, parameter: float) -> list:
        """Row in the order: parameter, LHS, RHS, lam1~, lam2~, lam1-LHS,
        lam1+LHS, min overlap."""
        return [
            parameter,
            self.E_norm,
            self.half_gap,
            self.lam1_tilde,
            self.lam2_tilde,
            self.interval[0],
            self.interval[1],
            min(self.overlaps) if self.overlaps else float("nan"),
        ]


def spectral_norm(matrix: np.ndarray) -> float:
    """Largest |eigenvalue| of a Hermitian matrix by dense decomposition."""
    if matrix.shape[0] > 2**14:
        raise ValueError("dense spectral norm capped at dimension 2**14")
    return float(np.max(np.abs(np.linalg.eigvalsh(matrix))))


def perturbation_report(
    p_dense: np.ndarray, p_tilde_dense: np.ndarray, gap_tol: float | None = None
) -> PerturbationReport:
    """Compare the noise-free filtered matrix with a cached perturbed one."""
    if p_dense.shape != p_tilde_dense.shape:
        raise ValueError("dimension mismatch between matrices")
    ref = reference_from_dense(p_dense, gap_tol)
    ref_tilde = reference_from_dense(p_tilde_dense, gap_tol)
    E_norm = spectral_norm(p_tilde_dense - p_dense)
    lam1 = float(ref.eigenvalues[0])
    lam2 = float(ref.eigenvalues[ref.degeneracy])
    half_gap = 0.5 * abs(lam1 - lam2)
    lam1_t = float(ref_tilde.eigenvalues[0])
    lam2_t = float(ref_tilde.eigenvalues[1])
    interval = (lam1 - E_norm, lam1 + E_norm)
    projector = ref.ground_projector()
    overlaps = [
        float(np.real(np.vdot(v, projector @ v)))
        for v in ref_tilde.ground_states().T
    ]
    inside = interval[0] - 1e-12 <= lam1_t <= interval[1] + 1e-12
    outside = not (interval[0] - 1e-12 <= lam2_t <= interval[1] + 1e-12)
    return PerturbationReport(
        E_norm=E_norm,
        half_gap=half_gap,
        lam1=lam1,
        lam2=lam2,
        lam1_tilde=lam1_t,
        lam2_tilde=lam2_t,
        interval=interval,
        overlaps=overlaps,
        hypothesis_holds=E_norm < half_gap,
        interval_isolates=inside and outside,
    )


def weyl_audit(A: np.ndarray, E: np.ndarray) -> float:
    """max_k |lambda_k(A+E) - lambda_k(A)| - ||E||; never positive beyond
    numerical error for Hermitian inputs."""
    lam_a = np.linalg.eigvalsh(A)
    lam_ae = np.linalg.eigvalsh(A + E)
    return float(np.max(np.abs(lam_ae - lam_a)) - spectral_norm(E))


def growth_coefficients(
    ref: SpectralReference, a: float, m_r: int, m_c: int
) -> tuple[float, float]:
    """The pair (A, B) controlling one-step average-fidelity growth for the
    operator whose spectrum ref holds."""
    N = ref.dim
    lam = ref.eigenvalues
    lam1 = float(lam[0])
    g = ref.degeneracy
    lam2 = float(lam[g])
    max_sq = float(np.max(lam[g:] ** 2))
    A = (1.0 - a * m_r * m_c * lam1 / N**2) ** 2
    b2 = 1.0 - 2.0 * a * lam2 * m_r * m_c / N**2 + a * a * lam2**2 * m_c * (m_c - 1) / (
        N * (N - 1)
    )
    B = b2 + m_c * (N - m_c) * a * a / (N * (N - 1)) * max_sq
    return A, B


def admissible_step_bound(ref: SpectralReference, m_r: int, m_c: int) -> float:
    """Largest guaranteed-admissible step from the gap condition."""
    N = ref.dim
    lam = ref.eigenvalues
    g = ref.degeneracy
    lam1, lam2 = float(lam[0]), float(lam[g])
    max_sq = float(np.max(lam[g:] ** 2))
    denom = abs(N * lam2**2 * (m_c - 1) / (N - 1) + N * (N - m_c) / (N - 1) * max_sq)
    if denom == 0:
        return float("inf")
    return m_r * (lam2 - lam1) / denom


def growing_rate(
    ref: SpectralReference, a: float, m_r: int, m_c: int, epsilon: float
) -> float:
    """Guaranteed per-step growth factor of the average squared fidelity,
    A / (A(1 - eps/2) + B eps/2), valid while the fidelity is <= 1 - eps.

    Raises for steps outside the admissible range (gap condition, norm floor,
    and the quadratic-remainder condition a^2 * S <= (A - B) eps / 2 with
    S = (1 - m_r^2 m_c/N^3) m_c lam1^2/N + (N - m_r)/N * ||op||^2).
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    N = ref.dim
    lam1 = float(ref.eigenvalues[0])
    op_norm = float(np.max(np.abs(ref.eigenvalues)))
    if a <= 0:
        raise ValueError("step size must be positive")
    if a >= admissible_step_bound(ref, m_r, m_c):
        raise ValueError("step size violates the gap admissibility condition")
    if a >= 1.0 / op_norm:
        raise ValueError("step size violates the norm-floor condition a < 1/||op||")
    A, B = growth_coefficients(ref, a, m_r, m_c)
    if A <= B:
        raise ValueError("A <= B; no guaranteed growth at this step size")
    remainder = (1.0 - m_r**2 * m_c / N**3) * m_c * lam1**2 / N + (
        N - m_r
    ) / N * op_norm**2
    if a * a * remainder > (A - B) * epsilon / 2.0:
        raise ValueError("step size too large for the quadratic-remainder condition")
    return A / (A * (1.0 - epsilon / 2.0) + B * epsilon / 2.0)


def norm_floor(op_norm: float, a: float, t: int) -> float:
    """Deterministic lower bound (1 - a ||op||)^(t-1) on ||x_t|| for a < 1/||op||."""
    if a >= 1.0 / op_norm:
        raise ValueError("floor requires a < 1/||op||")
    return (1.0 - a * op_norm) ** max(t - 1, 0)
