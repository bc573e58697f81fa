"""Matrix-element oracles for the filtered Hamiltonian: exact values,
simulated Hadamard-test shot noise, and the Trotter-Fourier pipeline, plus
the persistent per-(i, j) cache that fixes the perturbed matrix each run
works with."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .chebyshev import FilterSpec, apply_chebyshev_filter, transformed_operator
from .fejer import FejerExpansion, alpha_for_operator, build_expansion
from .pauli import PauliHamiltonian
from .trotter import default_steps_rule, trotter_unitary

REGIMES = ("exact", "hadamard_block", "trotter_fourier")


@dataclass(frozen=True)
class ElementEstimate:
    i: int
    j: int
    value: complex
    shots_used: int
    regime: str


def hadamard_shot_estimate(
    w: complex, scale: float, shots: int, rng: np.random.Generator
) -> complex:
    """Simulated Hadamard test for a normalized element w with |Re w|, |Im w| <= 1.

    Real branch: shots draws in {+scale, -scale} with P(+) = (1 + Re w)/2;
    imaginary branch analogous.  The mean is scale * w, so the estimate is
    unbiased for the unnormalized element.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    if max(abs(w.real), abs(w.imag)) > 1.0 + 1e-9:
        raise ValueError(f"normalized element {w} lies outside the unit box")
    p_re = 0.5 * (1.0 + min(1.0, max(-1.0, w.real)))
    p_im = 0.5 * (1.0 + min(1.0, max(-1.0, w.imag)))
    k_re = rng.binomial(shots, p_re)
    k_im = rng.binomial(shots, p_im)
    re = scale * (2.0 * k_re / shots - 1.0)
    im = scale * (2.0 * k_im / shots - 1.0)
    return complex(re, im)


def theorem_shot_count(C: float, eps: float, delta: float) -> int:
    """Shots guaranteeing P(|xi - true| >= eps) <= delta: ceil(4C^2/eps^2 ln(4/delta))."""
    return math.ceil(4.0 * C * C / (eps * eps) * math.log(4.0 / delta))


class ExactOracle:
    """xi(i, j) = <i|T_ell(Hbar)|j> computed by the Clenshaw filter."""

    regime = "exact"

    def __init__(self, H: PauliHamiltonian, spec: FilterSpec):
        self.H = H
        self.spec = spec
        self._columns: dict[int, np.ndarray] = {}

    @property
    def dim(self) -> int:
        return self.H.dim

    def filtered_column(self, j: int) -> np.ndarray:
        col = self._columns.get(j)
        if col is None:
            e = np.zeros(self.dim, dtype=np.complex128)
            e[j] = 1.0
            col = apply_chebyshev_filter(self.H, self.spec, e)
            self._columns[j] = col
        return col

    def exact_value(self, i: int, j: int) -> complex:
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise IndexError(f"indices ({i}, {j}) out of range for dimension {self.dim}")
        return complex(self.filtered_column(j)[i])

    def estimate_fresh(self, i: int, j: int, rng: np.random.Generator) -> ElementEstimate:
        return ElementEstimate(i, j, self.exact_value(i, j), 0, self.regime)


class HadamardBlockOracle(ExactOracle):
    """Shot-noisy estimates of <i|T_ell(Hbar)|j>/C via the simulated single-
    ancilla interference test, scaled back by the filter normalization C."""

    regime = "hadamard_block"

    def __init__(self, H: PauliHamiltonian, spec: FilterSpec, C: float, shots: int):
        super().__init__(H, spec)
        if C <= 0:
            raise ValueError("normalization C must be positive")
        self.C = C
        self.shots = shots

    def estimate_fresh(self, i: int, j: int, rng: np.random.Generator) -> ElementEstimate:
        w = self.exact_value(i, j) / self.C
        value = hadamard_shot_estimate(w, self.C, self.shots, rng)
        return ElementEstimate(i, j, value, 2 * self.shots, self.regime)


class TrotterFourierOracle:
    """Estimates <i|p(Hbar)|j> as sum_k c_k xi_k, where xi_k is a Hadamard-test
    estimate of the (i, j) entry of the first-order-Trotterized e^{ik Hbar/alpha}
    and the c_k come from the Fejer-weighted Fourier expansion of the filter.

    The k = 0 term is the identity and contributes delta_ij exactly.  Unitaries
    are built once per oracle; each entry is bounded by 1, so the per-term
    Hadamard scale is 1.
    """

    regime = "trotter_fourier"

    def __init__(
        self,
        H: PauliHamiltonian,
        spec: FilterSpec,
        kernel_order: int = 30,
        shots_per_term: int = 400_000,
        steps_rule: Callable[[int], int] = default_steps_rule,
        alpha: float | None = None,
    ):
        self.H = H
        self.spec = spec
        hbar = transformed_operator(H, spec)
        if alpha is None:
            alpha = alpha_for_operator(hbar.coefficient_norm_bound())
        self.alpha = alpha
        self.expansion: FejerExpansion = build_expansion(spec.degree, alpha, kernel_order)
        self.shots_per_term = shots_per_term
        self.steps_rule = steps_rule
        self._unitaries: dict[int, np.ndarray] = {0: np.eye(H.dim, dtype=np.complex128)}
        for k in range(1, kernel_order + 1):
            steps = steps_rule(k)
            self._unitaries[k] = trotter_unitary(hbar, k / alpha, steps)
            self._unitaries[-k] = trotter_unitary(hbar, -k / alpha, steps)

    @property
    def dim(self) -> int:
        return self.H.dim

    def systematic_matrix(self) -> np.ndarray:
        """sum_k c_k U_k with zero sampling noise (the sampling-free limit of
        this regime, including Fourier truncation and Trotter error)."""
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for k in self.expansion.ks:
            out += self.expansion.coefficient(int(k)) * self._unitaries[int(k)]
        return out

    def estimate_fresh(self, i: int, j: int, rng: np.random.Generator) -> ElementEstimate:
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise IndexError(f"indices ({i}, {j}) out of range for dimension {self.dim}")
        total = 0.0 + 0.0j
        shots = 0
        for k in self.expansion.ks:
            k = int(k)
            c = self.expansion.coefficient(k)
            if k == 0:
                total += c * (1.0 if i == j else 0.0)
                continue
            w = complex(self._unitaries[k][i, j])
            total += c * hadamard_shot_estimate(w, 1.0, self.shots_per_term, rng)
            shots += 2 * self.shots_per_term
        return ElementEstimate(i, j, total, shots, self.regime)


Oracle = ExactOracle | HadamardBlockOracle | TrotterFourierOracle


@dataclass
class ElementCache:
    """Persistent map (i, j) -> estimate.

    The first query of a pair estimates and stores; every later query returns
    the identical value, so one cache instance defines one fixed perturbed
    matrix.  Substreams are derived from (seed, i, j), making stored values
    independent of query order.  With hermitian_fill the (j, i) entry is
    stored as the conjugate of the canonical (i, j) estimate (i <= j), so the
    cached matrix is exactly Hermitian.
    """

    oracle: Oracle
    seed: int
    hermitian_fill: bool = False
    store: dict[tuple[int, int], ElementEstimate] = field(default_factory=dict)

    def _rng_for(self, i: int, j: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence((self.seed, i, j))))

    def get(self, i: int, j: int) -> complex:
        hit = self.store.get((i, j))
        if hit is not None:
            return hit.value
        if not self.hermitian_fill:
            est = self.oracle.estimate_fresh(i, j, self._rng_for(i, j))
            self.store[(i, j)] = est
            return est.value
        # Estimate the canonical ordered pair, then fill both triangles, so the
        # stored values do not depend on which of (i, j), (j, i) came first.
        a, b = (i, j) if i <= j else (j, i)
        est = self.oracle.estimate_fresh(a, b, self._rng_for(a, b))
        if a == b:
            est = ElementEstimate(a, b, complex(est.value.real, 0.0), est.shots_used, est.regime)
            self.store[(a, b)] = est
        else:
            self.store[(a, b)] = est
            self.store[(b, a)] = ElementEstimate(
                b, a, est.value.conjugate(), est.shots_used, est.regime
            )
        return self.store[(i, j)].value

    def dense(self) -> np.ndarray:
        """Full N x N fill (defines the perturbed matrix for diagnostics)."""
        N = self.oracle.dim
        out = np.empty((N, N), dtype=np.complex128)
        for i in range(N):
            for j in range(N):
                out[i, j] = self.get(i, j)
        return out

    def save(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "j", "re", "im", "shots", "regime"])
            for (i, j), est in sorted(self.store.items()):
                writer.writerow(
                    [i, j, f"{est.value.real:.17g}", f"{est.value.imag:.17g}",
                     est.shots_used, est.regime]
                )

    def load(self, path: str | Path) -> None:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                i, j = int(row["i"]), int(row["j"])
                value = complex(float(row["re"]), float(row["im"]))
                self.store[(i, j)] = ElementEstimate(
                    i, j, value, int(row["shots"]), row["regime"]
                )


def cache_get_or_estimate(cache: ElementCache, i: int, j: int) -> complex:
    """First query estimates and stores; later queries return the stored value."""
    return cache.get(i, j)


def exact_filter_matrix(H: PauliHamiltonian, spec: FilterSpec) -> np.ndarray:
    """Dense T_ell(Hbar), the unperturbed matrix the estimates target."""
    oracle = ExactOracle(H, spec)
    cols = [oracle.filtered_column(j) for j in range(H.dim)]
    return np.column_stack(cols)
