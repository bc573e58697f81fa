"""Benchmark spin models (TFIM, XXZ, 1-D Hubbard after Jordan-Wigner) and
exact spectral references at desk scale."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliHamiltonian, PauliString, check_hermitian

DENSE_QUBIT_CAP = 14


def _string(n: int, sites: dict[int, str], coeff: float) -> PauliString:
    ops = ["I"] * n
    for j, p in sites.items():
        ops[j] = p
    return PauliString(n, "".join(ops), coeff)


def build_tfim(n: int, J: float, D: float) -> PauliHamiltonian:
    """Open-chain transverse-field Ising model:

        H = J sum_{j<n-1} Z_j Z_{j+1} + D sum_j X_j

    2n - 1 terms.
    """
    if n < 2:
        raise ValueError("TFIM needs at least 2 qubits")
    terms = [_string(n, {j: "Z", j + 1: "Z"}, J) for j in range(n - 1)]
    terms += [_string(n, {j: "X"}, D) for j in range(n)]
    return PauliHamiltonian(n, terms)


def build_xxz(n: int, J: float, D: float) -> PauliHamiltonian:
    """Open-chain XXZ model:

        H = J sum_j (X_j X_{j+1} + Y_j Y_{j+1}) - D sum_j Z_j Z_{j+1}

    3(n - 1) terms.
    """
    if n < 2:
        raise ValueError("XXZ needs at least 2 qubits")
    terms = []
    for j in range(n - 1):
        terms.append(_string(n, {j: "X", j + 1: "X"}, J))
        terms.append(_string(n, {j: "Y", j + 1: "Y"}, J))
        terms.append(_string(n, {j: "Z", j + 1: "Z"}, -D))
    return PauliHamiltonian(n, terms)


def qubit_of(site: int, spin: str) -> int:
    """Spin-orbital layout: site-major, spin-up before spin-down."""
    return 2 * site + (0 if spin == "up" else 1)


def build_hubbard_jw(sites: int, t: float, U: float) -> PauliHamiltonian:
    """One-dimensional Hubbard chain in its 2-local qubit form (one qubit per
    spin-orbital, 2*sites qubits total):

        H = -(t/2) sum_sigma sum_j (X_{j+1,s} X_{j,s} + Y_{j+1,s} Y_{j,s})
            + (U/4) sum_j (-Z_{j,up} - Z_{j,dn} + Z_{j,up} Z_{j,dn})

    The constant U*sites/4 shift is dropped; it does not move eigenvectors.
    """
    if sites < 2:
        raise ValueError("Hubbard chain needs at least 2 sites")
    n = 2 * sites
    terms = []
    for spin in ("up", "down"):
        for j in range(sites - 1):
            a, b = qubit_of(j + 1, spin), qubit_of(j, spin)
            terms.append(_string(n, {a: "X", b: "X"}, -t / 2))
            terms.append(_string(n, {a: "Y", b: "Y"}, -t / 2))
    for j in range(sites):
        up, dn = qubit_of(j, "up"), qubit_of(j, "down")
        terms.append(_string(n, {up: "Z"}, -U / 4))
        terms.append(_string(n, {dn: "Z"}, -U / 4))
        terms.append(_string(n, {up: "Z", dn: "Z"}, U / 4))
    return PauliHamiltonian(n, terms)


@dataclass
class SpectralReference:
    """Full ascending spectrum with orthonormal eigenvectors and the ground
    degeneracy g (eigenvalues within gap_tol of the minimum)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column k <-> eigenvalues[k]
    degeneracy: int
    gap_tol: float

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def ground_states(self) -> np.ndarray:
        """Columns spanning the ground subspace."""
        return self.eigenvectors[:, : self.degeneracy]

    def ground_projector(self) -> np.ndarray:
        g = self.ground_states()
        return g @ g.conj().T


def reference_from_dense(matrix: np.ndarray, gap_tol: float | None = None) -> SpectralReference:
    """Eigendecompose an explicitly Hermitian matrix."""
    check_hermitian(matrix, tol=1e-10)
    vals, vecs = np.linalg.eigh(matrix)
    if gap_tol is None:
        gap_tol = 1e-8 * max(1.0, float(np.max(np.abs(vals))))
    g = int(np.sum(vals <= vals[0] + gap_tol))
    return SpectralReference(vals, vecs, g, gap_tol)


def exact_reference(H: PauliHamiltonian, gap_tol: float | None = None) -> SpectralReference:
    """Dense diagonalization of a Pauli Hamiltonian (n <= 14)."""
    if H.n > DENSE_QUBIT_CAP:
        raise ValueError(
            f"n={H.n} exceeds the dense diagonalization cap of {DENSE_QUBIT_CAP}"
        )
    if gap_tol is None:
        gap_tol = 1e-8 * max(1.0, H.coefficient_norm_bound())
    return reference_from_dense(H.dense(), gap_tol)
