"""Fourier-series approximation of the Chebyshev filter with Fejer-kernel
weighting.

The target function is T_ell(alpha * x) on x in [-pi, pi]; substituting
x -> Hbar/alpha (with alpha chosen so the transformed spectrum fits in
[-pi, pi]) turns the truncated series sum_k c_k e^{ikx} into a sum of
time-evolution unitaries, which is what the Hadamard-test oracle samples.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chebyshev import chebyshev_monomial_coeffs, chebyshev_value


def moment(k: int, n: int) -> complex:
    """c(k, n) = (1/2pi) integral_{-pi}^{pi} x^n e^{-ikx} dx.

    Computed by the integration-by-parts recursion

        c(k, n+1) = (i/2pik)[pi^{n+1} e^{-ikpi} - (-pi)^{n+1} e^{ikpi}]
                    + ((n+1)/ik) c(k, n)

    with base cases c(0, n) = 0 (n odd), pi^n/(n+1) (n even), c(k, 0) = 0.
    """
    if k == 0:
        return 0.0 + 0.0j if n % 2 else complex(math.pi**n / (n + 1))
    sign = (-1.0) ** (k % 2)  # e^{+-ikpi} for integer k
    c = 0.0 + 0.0j
    for m in range(n):
        boundary = (1j / (2 * math.pi * k)) * sign * (
            math.pi ** (m + 1) - (-math.pi) ** (m + 1)
        )
        c = boundary + ((m + 1) / (1j * k)) * c
    return c


@dataclass
class FejerExpansion:
    """Truncated weighted Fourier series approximating T_ell(alpha x)."""

    ell: int
    alpha: float
    K: int
    coeffs: np.ndarray  # index k+K holds c_k, k = -K..K

    @property
    def ks(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def coefficient(self, k: int) -> complex:
        return complex(self.coeffs[k + self.K])

    def evaluate(self, x: np.ndarray | float) -> np.ndarray | complex:
        """sum_k c_k e^{ikx}; approximates T_ell(alpha x) for x in (-pi, pi)."""
        x = np.asarray(x, dtype=float)
        phases = np.exp(1j * np.multiply.outer(x, self.ks))
        out = phases @ self.coeffs
        return out if out.shape else complex(out)

    def evaluate_at_eigenvalue(self, lam_bar: float) -> complex:
        """Value the expansion assigns to a transformed eigenvalue lam_bar
        under the substitution x -> Hbar/alpha."""
        return complex(self.evaluate(lam_bar / self.alpha))

    def target(self, x: np.ndarray | float) -> np.ndarray | float:
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        vals = np.array([chebyshev_value(self.ell, self.alpha * xx) for xx in xs])
        return vals if np.ndim(x) else float(vals[0])


def build_expansion(ell: int, alpha: float, K: int) -> FejerExpansion:
    """Coefficients c_k = w_k sum_j alpha^j d_j c(k, j) with Fejer-style
    weight w_k = (K - |k| + 1)/K and d_j the monomial coefficients of T_ell.

    |k| is used in the weight so that c_{-k} = conj(c_k) (real target).
    """
    if K < 1:
        raise ValueError("kernel order K must be >= 1")
    d = chebyshev_monomial_coeffs(ell)
    if alpha > 1.0 and (len(d) - 1) * math.log(alpha) > 250:
        raise ValueError("alpha^degree overflows; reduce degree or alpha")
    coeffs = np.zeros(2 * K + 1, dtype=np.complex128)
    for k in range(0, K + 1):
        raw = sum(alpha**j * d[j] * moment(k, j) for j in range(len(d)))
        c = (K - k + 1) / K * raw
        coeffs[K + k] = c
        coeffs[K - k] = np.conjugate(c)
    return FejerExpansion(ell, alpha, K, coeffs)


def alpha_for_operator(norm_bound: float) -> float:
    """Scaling with ||Hbar/alpha|| <= pi, from a coefficient norm bound."""
    if norm_bound <= 0:
        raise ValueError("norm bound must be positive")
    return norm_bound / math.pi


def reconstruction_error(exp: FejerExpansion, grid: np.ndarray) -> float:
    """max |sum_k c_k e^{ikx} - T_ell(alpha x)| over an interior grid."""
    grid = np.asarray(grid, dtype=float)
    if np.any(np.abs(grid) >= math.pi):
        raise ValueError("grid points must lie strictly inside (-pi, pi)")
    approx = exp.evaluate(grid)
    exact = exp.target(grid)
    return float(np.max(np.abs(approx - exact)))


def dump_coefficients(exp: FejerExpansion, path: str | Path) -> None:
    """CSV dump (k, Re c_k, Im c_k) for inspection."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "re", "im"])
        for k in exp.ks:
            c = exp.coefficient(int(k))
            writer.writerow([int(k), f"{c.real:.17g}", f"{c.imag:.17g}"])
