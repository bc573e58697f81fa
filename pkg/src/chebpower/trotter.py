"""First-order Trotterization of e^{iHt} for Pauli-sum Hamiltonians, as dense
unitaries at desk scale (n <= 10)."""

from __future__ import annotations

import numpy as np

from .pauli import AffineOperator, PauliHamiltonian, PauliString

TROTTER_QUBIT_CAP = 10


def default_steps_rule(k: int) -> int:
    """Trotter step count max(k^2 + 20, 50) for evolution label k."""
    return max(k * k + 20, 50)


def _term_exponential(term: PauliString, theta: float, dim: int) -> np.ndarray:
    """Dense e^{i theta P} = cos(theta) I + i sin(theta) P (P^2 = I)."""
    single = PauliHamiltonian(term.n, [PauliString(term.n, term.ops, 1.0)])
    return np.cos(theta) * np.eye(dim) + 1j * np.sin(theta) * single.dense()


def trotter_step_matrix(H: PauliHamiltonian | AffineOperator, dt: float) -> np.ndarray:
    """Product of per-term exponentials for one step of duration dt.

    Terms are applied in builder order; for AffineOperator the identity shift
    contributes an exact global phase factor e^{i shift dt}.
    """
    if isinstance(H, AffineOperator):
        base, scale, shift = H.base, H.scale, H.shift
    else:
        base, scale, shift = H, 1.0, 0.0
    if base.n > TROTTER_QUBIT_CAP:
        raise ValueError(f"n={base.n}: dense Trotter unitaries capped at n={TROTTER_QUBIT_CAP}")
    dim = base.dim
    step = np.eye(dim, dtype=np.complex128)
    for term in base.terms:
        step = _term_exponential(term, scale * term.coeff * dt, dim) @ step
    if shift != 0.0:
        step = np.exp(1j * shift * dt) * step
    return step


def trotter_unitary(
    H: PauliHamiltonian | AffineOperator, t: float, steps: int
) -> np.ndarray:
    """First-order product formula for e^{iHt} with the given step count."""
    if steps < 1:
        raise ValueError("need at least one Trotter step")
    step = trotter_step_matrix(H, t / steps)
    return np.linalg.matrix_power(step, steps)


def exact_unitary(H: PauliHamiltonian | AffineOperator, t: float) -> np.ndarray:
    """e^{iHt} by eigendecomposition (reference for Trotter-error studies)."""
    dense = H.dense()
    vals, vecs = np.linalg.eigh(dense)
    return (vecs * np.exp(1j * t * vals)) @ vecs.conj().T
