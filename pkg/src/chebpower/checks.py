"""Self-contained property suites behind the `check` CLI subcommand.

Each suite returns a machine-readable verdict dict with a boolean `passed`;
they are deliberately small so a failing install can be triaged quickly."""

from __future__ import annotations

import numpy as np

from .chebyshev import bounds_from_fractions, transformed_operator
from .diagnostics import weyl_audit
from .engine import (
    IterateState,
    exhaustive_gradient_mean,
    expected_gradient,
    sample_gradient,
    step,
)
from .fejer import alpha_for_operator, build_expansion, reconstruction_error
from .models import build_tfim, exact_reference
from .oracle import ExactOracle
from .trotter import exact_unitary, trotter_unitary


def check_estimator(seed: int = 0) -> dict:
    """Exhaustive m_r = m_c = 1 mean at N = 4 equals (1/16) p(H)^T x."""
    H = build_tfim(2, 1.0, 1.0)
    ref = exact_reference(H)
    spec = bounds_from_fractions(ref, 0.2, 0.2, 3)
    oracle = ExactOracle(H, spec)
    M = np.array([[oracle.exact_value(i, j) for j in range(4)] for i in range(4)])
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        worst = max(
            worst,
            float(np.max(np.abs(exhaustive_gradient_mean(M, x) - expected_gradient(M, x, 1, 1)))),
        )
    return {"suite": "estimator", "max_abs_error": worst, "passed": worst < 1e-12}


def check_weyl(seed: int = 0) -> dict:
    """200 random Hermitian pairs at N = 32: no violation beyond 1e-9."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(200):
        A = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
        A = 0.5 * (A + A.conj().T)
        E = 0.3 * (rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32)))
        E = 0.5 * (E + E.conj().T)
        worst = max(worst, weyl_audit(A, E))
    return {"suite": "weyl", "max_violation": float(worst), "passed": worst <= 1e-9}


def check_fejer(seed: int = 0) -> dict:
    """Reconstruction error decreases over K in {10, 30, 100} for the degree-3
    filter at the TFIM n=2 scaling."""
    H = build_tfim(2, 1.0, 1.0)
    ref = exact_reference(H)
    spec = bounds_from_fractions(ref, 0.2, 0.2, 3)
    alpha = alpha_for_operator(transformed_operator(H, spec).coefficient_norm_bound())
    grid = np.linspace(-2.0, 2.0, 801)
    errs = [reconstruction_error(build_expansion(3, alpha, K), grid) for K in (10, 30, 100)]
    passed = errs[2] < errs[1] < errs[0]
    return {"suite": "fejer", "errors": errs, "passed": bool(passed)}


def check_trotter(seed: int = 0) -> dict:
    """First-order product formula: log-log slope of the entrywise error vs
    step count is -1 +- 0.15 at n = 4."""
    H = build_tfim(4, 1.0, 1.2)
    t = 1.3
    exact = exact_unitary(H, t)
    steps = [4, 8, 16, 32, 64, 128]
    errs = [float(np.max(np.abs(trotter_unitary(H, t, s) - exact))) for s in steps]
    slope = float(np.polyfit(np.log(steps), np.log(errs), 1)[0])
    return {"suite": "trotter", "slope": slope, "passed": bool(abs(slope + 1.0) <= 0.15)}


def check_recursion(seed: int = 0) -> dict:
    """Recursive norm/quadratic-form/Hx tracking matches direct recomputation
    to 1e-8 relative over 200 random steps at N = 16."""
    H = build_tfim(4, 1.0, 0.8)
    rng = np.random.default_rng(seed)
    x0 = rng.normal(size=16) + 1j * rng.normal(size=16)
    state = IterateState.initialize(H, x0)
    M = 0.1 * (rng.normal(size=(16, 16)))
    M = M + M.T
    worst = 0.0
    for _ in range(200):
        sample = sample_gradient(state.x, lambda i, j: complex(M[i, j]), 2, 2, rng)
        step(state, sample, 0.05, H)
        direct_norm = float(np.real(np.vdot(state.x, state.x)))
        direct_Hx = H.matvec(state.x)
        direct_quad = float(np.real(np.vdot(state.x, direct_Hx)))
        worst = max(
            worst,
            abs(state.norm_sq - direct_norm) / direct_norm,
            abs(state.quad - direct_quad) / max(abs(direct_quad), 1e-12),
            float(np.max(np.abs(state.Hx - direct_Hx)) / np.max(np.abs(direct_Hx))),
        )
    return {"suite": "recursion", "max_rel_error": worst, "passed": worst < 1e-8}


SUITES = {
    "estimator": check_estimator,
    "weyl": check_weyl,
    "fejer": check_fejer,
    "trotter": check_trotter,
    "recursion": check_recursion,
}
