"""The randomized power iteration: sparse gradient samples from cached matrix
elements, the constant-cost recursive update of ||x||^2, (x, Hx), and Hx, and
the replica driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .models import SpectralReference
from .oracle import ElementCache
from .pauli import PauliHamiltonian

NORM_FLOOR = 1e-300


def sample_without_replacement(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """m distinct indices uniform over [0, n) by partial Fisher-Yates;
    O(m) time and memory."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= {n}, got {m}")
    swap: dict[int, int] = {}
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        j = int(rng.integers(i, n))
        out[i] = swap.get(j, j)
        swap[j] = swap.get(i, i)
    return out


@dataclass(frozen=True)
class StepSchedule:
    """Step size a0 * decay^(t // period)."""

    a0: float
    decay: float = 1.0
    period: int = 1

    def __post_init__(self) -> None:
        if self.a0 <= 0:
            raise ValueError("a0 must be positive")
        if not 0 < self.decay <= 1:
            raise ValueError("decay must lie in (0, 1]")
        if self.period < 1:
            raise ValueError("period must be >= 1")

    def at(self, t: int) -> float:
        return self.a0 * self.decay ** (t // self.period)


@dataclass
class GradientSample:
    """Sparse estimate with support on cols: g = sum_c (sum_r x_r xi(r, c)) e_c."""

    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray  # complex, aligned with cols


def sample_gradient(
    x: np.ndarray,
    element: Callable[[int, int], complex],
    m_r: int,
    m_c: int,
    rng: np.random.Generator,
) -> GradientSample:
    """Draw row/column index sets (each uniform without replacement,
    independently) and assemble the sparse estimator."""
    n = len(x)
    rows = sample_without_replacement(n, m_r, rng)
    cols = sample_without_replacement(n, m_c, rng)
    values = np.empty(m_c, dtype=np.complex128)
    for ci, c in enumerate(cols):
        acc = 0.0 + 0.0j
        for r in rows:
            xr = x[r]
            if xr != 0.0:
                acc += xr * element(int(r), int(c))
        values[ci] = acc
    return GradientSample(rows, cols, values)


@dataclass
class IterateState:
    """The unnormalized iterate with its recursively tracked companions:
    Hx (raw-Hamiltonian image), ||x||^2, and (x, Hx)."""

    x: np.ndarray
    Hx: np.ndarray
    norm_sq: float
    quad: float
    t: int = 0

    @classmethod
    def initialize(cls, H: PauliHamiltonian, x0: np.ndarray) -> "IterateState":
        x = np.asarray(x0, dtype=np.complex128).copy()
        Hx = H.matvec(x)
        return cls(
            x=x,
            Hx=Hx,
            norm_sq=float(np.real(np.vdot(x, x))),
            quad=float(np.real(np.vdot(x, Hx))),
            t=0,
        )

    @property
    def rayleigh(self) -> float:
        return self.quad / self.norm_sq

    def resync(self, H: PauliHamiltonian) -> None:
        """Recompute the tracked quantities directly (O(terms * N))."""
        self.Hx = H.matvec(self.x)
        self.norm_sq = float(np.real(np.vdot(self.x, self.x)))
        self.quad = float(np.real(np.vdot(self.x, self.Hx)))

    def renormalize(self) -> None:
        """Rescale x to unit norm; a no-op for Rayleigh quotient and fidelity."""
        s = np.sqrt(self.norm_sq)
        if s <= NORM_FLOOR:
            raise FloatingPointError("iterate norm underflow; reduce the step size")
        self.x /= s
        self.Hx /= s
        self.quad /= s * s
        self.norm_sq = 1.0


def step(state: IterateState, sample: GradientSample, a: float, H: PauliHamiltonian) -> None:
    """x <- x - a g, with ||x||^2, (x, Hx), Hx updated by the one-step
    recursions at O(m_c * terms) cost (no dense recomputation).

    H is the raw Hamiltonian used for energy tracking; it enters only through
    its sparse columns at the support of g.
    """
    if a < 0:
        raise ValueError("step size must be nonnegative")
    x, Hx = state.x, state.Hx
    cols, g = sample.cols, sample.values

    # (g, x) and ||g||^2 from the m_c support.
    g_dot_x = complex(np.vdot(g, x[cols]))
    g_norm_sq = float(np.real(np.vdot(g, g)))
    # Hg assembled from sparse columns of H.
    Hg: dict[int, complex] = {}
    for ci, c in enumerate(cols):
        gc = g[ci]
        if gc == 0.0:
            continue
        rows, vals = H.column(int(c))
        for r, v in zip(rows.tolist(), vals.tolist()):
            Hg[r] = Hg.get(r, 0.0) + gc * v
    g_dot_Hx = 0.0 + 0.0j
    for ci, c in enumerate(cols):
        g_dot_Hx += np.conjugate(g[ci]) * Hx[c]
    g_dot_Hg = 0.0 + 0.0j
    col_pos = {int(c): ci for ci, c in enumerate(cols)}
    for r, v in Hg.items():
        ci = col_pos.get(r)
        if ci is not None:
            g_dot_Hg += np.conjugate(g[ci]) * v

    state.norm_sq = state.norm_sq - 2.0 * a * g_dot_x.real + a * a * g_norm_sq
    state.quad = state.quad - 2.0 * a * g_dot_Hx.real + a * a * g_dot_Hg.real
    x[cols] -= a * g
    for r, v in Hg.items():
        Hx[r] -= a * v
    state.t += 1
    if state.norm_sq <= NORM_FLOOR:
        raise FloatingPointError("iterate norm underflow; reduce the step size")


@dataclass
class RunTrace:
    """Per-iteration record for one replica."""

    rayleigh: np.ndarray
    fidelity: np.ndarray
    norm: np.ndarray
    step_size: np.ndarray
    sampled_rows: list[np.ndarray] = field(default_factory=list)
    sampled_cols: list[np.ndarray] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.rayleigh)

    def final_fidelity(self) -> float:
        return float(self.fidelity[-1])


def uniform_state(n_dim: int) -> np.ndarray:
    return np.full(n_dim, 1.0 / np.sqrt(n_dim), dtype=np.complex128)


def random_state(n_dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=n_dim) + 1j * rng.normal(size=n_dim)
    return v / np.linalg.norm(v)


def fidelity_with_subspace(x: np.ndarray, ref: SpectralReference) -> float:
    """sqrt(sum_j |<psi_j, x>|^2) / ||x|| over the ground multiplet."""
    overlaps = ref.ground_states().conj().T @ x
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise ValueError("zero vector has no fidelity")
    return float(np.linalg.norm(overlaps) / nrm)


def run_power_method(
    H: PauliHamiltonian,
    cache: ElementCache,
    m_r: int,
    m_c: int,
    schedule: StepSchedule,
    iterations: int,
    rng: np.random.Generator,
    x0: np.ndarray,
    ref: SpectralReference | None = None,
    renorm_period: int = 1000,
    keep_indices: bool = False,
) -> RunTrace:
    """Execute the randomized iteration for one replica.

    The gradient is built from cached filtered-matrix elements; the Rayleigh
    quotient of the raw H is tracked recursively.  Fidelity is recorded when a
    spectral reference is supplied (and the initial guess is then required to
    overlap the ground subspace).
    """
    state = IterateState.initialize(H, x0)
    if ref is not None and fidelity_with_subspace(x0, ref) == 0.0:
        raise ValueError("initial guess has zero overlap with the ground subspace")
    rayleigh = np.empty(iterations)
    fid = np.full(iterations, np.nan)
    norms = np.empty(iterations)
    steps = np.empty(iterations)
    trace = RunTrace(rayleigh, fid, norms, steps)
    for t in range(iterations):
        a = schedule.at(t)
        sample = sample_gradient(state.x, cache.get, m_r, m_c, rng)
        step(state, sample, a, H)
        if renorm_period and state.t % renorm_period == 0:
            state.resync(H)
            state.renormalize()
        rayleigh[t] = state.rayleigh
        norms[t] = np.sqrt(state.norm_sq)
        steps[t] = a
        if ref is not None:
            fid[t] = fidelity_with_subspace(state.x, ref)
        if keep_indices:
            trace.sampled_rows.append(sample.rows)
            trace.sampled_cols.append(sample.cols)
    return trace


def replica_rng(seed: int, replica: int) -> np.random.Generator:
    """Disjoint engine substream for one replica."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 0x5E, replica))))


def expected_gradient(M: np.ndarray, x: np.ndarray, m_r: int, m_c: int) -> np.ndarray:
    """Closed-form E[g] = (m_r m_c / N^2) M^T x for exact cached elements M."""
    N = M.shape[0]
    return (m_r * m_c / N**2) * (M.T @ x)


def expected_second_moment_trace(M: np.ndarray, x: np.ndarray, m_r: int, m_c: int) -> float:
    """Closed-form E||g||^2 for the without-replacement index sampling:

        E||g||^2 = mc*mr*(N-mr)/(N^2(N-1)) * sum_{r,c} |x_r M_{rc}|^2
                 + mc*mr*(mr-1)/(N^2(N-1)) * ||M^T x||^2
    """
    N = M.shape[0]
    s1 = float(np.sum(np.abs(x[:, None] * M) ** 2))
    s2 = float(np.linalg.norm(M.T @ x) ** 2)
    c1 = m_c * m_r * (N - m_r) / (N**2 * (N - 1))
    c2 = m_c * m_r * (m_r - 1) / (N**2 * (N - 1))
    return c1 * s1 + c2 * s2


def second_moment_trace_bound(M: np.ndarray, x: np.ndarray, m_r: int, m_c: int) -> float:
    """Structured-terms trace plus the residual bound:

        (m_c/N) ||M^T x||^2 + ((N - m_r)/N) ||M||^2 ||x||^2
    """
    N = M.shape[0]
    norm_M = float(np.linalg.norm(M, ord=2))
    structured = (m_c / N) * float(np.linalg.norm(M.T @ x) ** 2)
    residual = (N - m_r) / N * norm_M**2 * float(np.linalg.norm(x) ** 2)
    return structured + residual


def conditional_mean_check(
    M: np.ndarray,
    x: np.ndarray,
    m_r: int,
    m_c: int,
    trials: int,
    rng: np.random.Generator,
) -> dict:
    """Monte Carlo audit of the estimator moments against the closed forms
    and the trace bound.  Returns a report dict; no assertion here."""
    N = M.shape[0]
    x = np.asarray(x, dtype=np.complex128)

    def element(i: int, j: int) -> complex:
        return complex(M[i, j])

    acc = np.zeros(N, dtype=np.complex128)
    acc_norm_sq = 0.0
    acc_norm_4 = 0.0
    for _ in range(trials):
        s = sample_gradient(x, element, m_r, m_c, rng)
        acc[s.cols] += s.values
        nsq = float(np.real(np.vdot(s.values, s.values)))
        acc_norm_sq += nsq
        acc_norm_4 += nsq * nsq
    mean = acc / trials
    mean_norm_sq = acc_norm_sq / trials
    var_norm_sq = max(acc_norm_4 / trials - mean_norm_sq**2, 0.0)
    return {
        "mc_mean": mean,
        "exact_mean": expected_gradient(M, x, m_r, m_c),
        "mc_trace": mean_norm_sq,
        "exact_trace": expected_second_moment_trace(M, x, m_r, m_c),
        "trace_bound": second_moment_trace_bound(M, x, m_r, m_c),
        "trace_stderr": np.sqrt(var_norm_sq / trials),
        "trials": trials,
    }


def exhaustive_gradient_mean(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Average of g over all N^2 equiprobable (row, col) pairs at m_r = m_c = 1."""
    N = M.shape[0]
    acc = np.zeros(N, dtype=np.complex128)
    for r in range(N):
        for c in range(N):
            acc[c] += x[r] * M[r, c]
    return acc / N**2
