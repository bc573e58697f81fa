"""Pauli-string Hamiltonians and the dense/sparse operator arithmetic built on them.

A Hamiltonian is a real-weighted sum of n-qubit Pauli strings.  Every string
maps a computational basis state to exactly one basis state with a phase, so
matvecs, single sparse columns, and dense materialization all reduce to bit
manipulation on basis indices.  Qubit j acts on bit j of the basis index
(little-endian).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PAULI_CHARS = "IXYZ"


def _parity_of_masked_bits(indices: np.ndarray, mask: int, n: int) -> np.ndarray:
    """(-1)**popcount(index & mask) for every basis index, as a float array."""
    acc = np.zeros(len(indices), dtype=np.int64)
    for bit in range(n):
        if mask >> bit & 1:
            acc ^= (indices >> bit) & 1
    return 1.0 - 2.0 * acc


@dataclass(frozen=True)
class PauliString:
    """One weighted Pauli string, e.g. coeff * Z0 Z1 on n qubits.

    ops is a length-n string over {I, X, Y, Z}; ops[j] acts on qubit j.
    """

    n: int
    ops: str
    coeff: float

    def __post_init__(self) -> None:
        if len(self.ops) != self.n:
            raise ValueError(f"ops has {len(self.ops)} entries, expected {self.n}")
        bad = set(self.ops) - set(PAULI_CHARS)
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)!r}")
        if not np.isfinite(self.coeff):
            raise ValueError("coefficient must be finite")

    @property
    def flip_mask(self) -> int:
        """Bits toggled by this string (X and Y sites)."""
        return sum(1 << j for j, p in enumerate(self.ops) if p in "XY")

    @property
    def phase_mask(self) -> int:
        """Bits whose value contributes a (-1) phase (Y and Z sites)."""
        return sum(1 << j for j, p in enumerate(self.ops) if p in "YZ")

    @property
    def y_count(self) -> int:
        return sum(1 for p in self.ops if p == "Y")

    def apply_to_index(self, b: int) -> tuple[int, complex]:
        """Image basis index and amplitude of (coeff * P)|b>."""
        phase = (1j) ** self.y_count
        if bin(b & self.phase_mask).count("1") % 2:
            phase = -phase
        return b ^ self.flip_mask, self.coeff * phase


@dataclass
class PauliHamiltonian:
    """Sum of Pauli strings sharing one qubit count; dimension N = 2**n."""

    n: int
    terms: list[PauliString]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        for t in self.terms:
            if t.n != self.n:
                raise ValueError("all terms must share the same qubit count")

    @property
    def dim(self) -> int:
        return 2**self.n

    def coefficient_norm_bound(self) -> float:
        """Triangle-inequality bound sum|coeff| >= operator 2-norm."""
        return float(sum(abs(t.coeff) for t in self.terms))

    def _term_tables(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per term: (target indices, amplitudes) for all basis columns."""
        tables = self._cache.get("tables")
        if tables is None:
            idx = np.arange(self.dim, dtype=np.int64)
            tables = []
            for t in self.terms:
                amp = t.coeff * (1j) ** t.y_count * _parity_of_masked_bits(
                    idx, t.phase_mask, self.n
                )
                tables.append((idx ^ t.flip_mask, amp.astype(np.complex128)))
            self._cache["tables"] = tables
        return tables

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """H @ v by per-term bit manipulation; O(terms * N)."""
        v = np.asarray(v)
        if v.shape != (self.dim,):
            raise ValueError(f"vector has shape {v.shape}, expected ({self.dim},)")
        out = np.zeros(self.dim, dtype=np.complex128)
        scratch = np.empty(self.dim, dtype=np.complex128)
        for target, amp in self._term_tables():
            scratch[target] = amp * v
            out += scratch
        return out

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """Sparse column H e_j as (row indices, values); O(terms)."""
        if not 0 <= j < self.dim:
            raise IndexError(f"column {j} out of range for dimension {self.dim}")
        rows: dict[int, complex] = {}
        for t in self.terms:
            r, a = t.apply_to_index(j)
            rows[r] = rows.get(r, 0.0) + a
        idx = np.fromiter(rows.keys(), dtype=np.int64, count=len(rows))
        val = np.fromiter(rows.values(), dtype=np.complex128, count=len(rows))
        return idx, val

    def entry(self, i: int, j: int) -> complex:
        """<i|H|j> from the sparse column."""
        rows, vals = self.column(j)
        hit = np.nonzero(rows == i)[0]
        return complex(vals[hit[0]]) if len(hit) else 0.0 + 0.0j

    def dense(self) -> np.ndarray:
        """Dense N x N matrix; refuse above 2**14 (memory budget)."""
        if self.n > 14:
            raise ValueError(f"n={self.n}: dense materialization capped at n=14")
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        cols = np.arange(self.dim)
        for target, amp in self._term_tables():
            out[target, cols] += amp
        return out

    def scaled_shifted(self, scale: float, shift: float) -> "PauliHamiltonian":
        """Pauli form of scale*H + shift*I (identity absorbed as an I...I term)."""
        terms = [PauliString(self.n, t.ops, scale * t.coeff) for t in self.terms]
        if shift != 0.0:
            terms.append(PauliString(self.n, "I" * self.n, shift))
        return PauliHamiltonian(self.n, terms)


class LinearOperator:
    """Minimal matvec interface shared by Pauli, affine, and dense operators."""

    dim: int

    def matvec(self, v: np.ndarray) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass
class AffineOperator(LinearOperator):
    """scale * H + shift * I without materializing anything."""

    base: PauliHamiltonian
    scale: float
    shift: float

    @property
    def dim(self) -> int:
        return self.base.dim

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.scale * self.base.matvec(v) + self.shift * np.asarray(
            v, dtype=np.complex128
        )

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        rows, vals = self.base.column(j)
        vals = self.scale * vals
        hit = np.nonzero(rows == j)[0]
        if len(hit):
            vals[hit[0]] += self.shift
        else:
            rows = np.append(rows, j)
            vals = np.append(vals, self.shift + 0.0j)
        return rows, vals

    def coefficient_norm_bound(self) -> float:
        return abs(self.scale) * self.base.coefficient_norm_bound() + abs(self.shift)

    def dense(self) -> np.ndarray:
        return self.scale * self.base.dense() + self.shift * np.eye(self.base.dim)


@dataclass
class DenseOperator(LinearOperator):
    """Wrapper giving a dense matrix the same interface."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=np.complex128)

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        col = self.matrix[:, j]
        rows = np.nonzero(col)[0]
        return rows, col[rows].astype(np.complex128)

    def dense(self) -> np.ndarray:
        return self.matrix


def check_hermitian(matrix: np.ndarray, tol: float = 1e-12) -> float:
    """Max |M - M^dagger| entry; raises if above tol."""
    dev = float(np.max(np.abs(matrix - matrix.conj().T)))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e}")
    return dev
