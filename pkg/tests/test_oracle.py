"""Element oracles: exact values, Hadamard shot statistics, the
Trotter-Fourier pipeline, cache semantics, and persistence."""

import numpy as np
import pytest

from chebpower.chebyshev import bounds_from_fractions
from chebpower.models import build_tfim, exact_reference
from chebpower.chebyshev import normalization_C, transformed_operator
from chebpower.oracle import (
    ElementCache,
    ExactOracle,
    HadamardBlockOracle,
    TrotterFourierOracle,
    cache_get_or_estimate,
    exact_filter_matrix,
    hadamard_shot_estimate,
    theorem_shot_count,
)
from chebpower.trotter import default_steps_rule, exact_unitary, trotter_unitary


@pytest.fixture(scope="module")
def tfim_stack():
    H = build_tfim(2, 1.0, 1.0)
    ref = exact_reference(H)
    spec = bounds_from_fractions(ref, 0.2, 0.2, 3)
    C = normalization_C(spec, ref)
    return H, ref, spec, C


class TestExactOracle:
    def test_degree_zero_is_identity(self, tfim_stack):
        H, ref, spec, _ = tfim_stack
        oracle = ExactOracle(H, bounds_from_fractions(ref, 0.2, 0.2, 0))
        for i in range(4):
            for j in range(4):
                assert oracle.exact_value(i, j) == pytest.approx(1.0 if i == j else 0.0)

    def test_degree_one_diagonal_is_transformed_hamiltonian(self, tfim_stack):
        H, ref, spec, _ = tfim_stack
        spec1 = bounds_from_fractions(ref, 0.2, 0.2, 1)
        oracle = ExactOracle(H, spec1)
        hbar = transformed_operator(H, spec1).dense()
        for i in range(4):
            assert oracle.exact_value(i, i) == pytest.approx(complex(hbar[i, i]))

    def test_degree_three_matches_eigendecomposition(self, tfim_stack):
        H, ref, spec, _ = tfim_stack
        from chebpower.chebyshev import filtered_eigenvalues

        filt = filtered_eigenvalues(spec, ref)
        dense = (ref.eigenvectors * filt) @ ref.eigenvectors.conj().T
        oracle = ExactOracle(H, spec)
        for i in range(4):
            for j in range(4):
                assert oracle.exact_value(i, j) == pytest.approx(
                    complex(dense[i, j]), abs=1e-10
                )
        assert np.allclose(exact_filter_matrix(H, spec), dense, atol=1e-10)

    def test_index_bounds(self, tfim_stack):
        H, _, spec, _ = tfim_stack
        oracle = ExactOracle(H, spec)
        with pytest.raises(IndexError):
            oracle.exact_value(0, 4)


class TestHadamardEstimate:
    def test_deterministic_limit(self):
        rng = np.random.default_rng(0)
        est = hadamard_shot_estimate(1.0 + 1j, 2.5, 100, rng)
        assert est == pytest.approx(2.5 + 2.5j)

    def test_balanced_coin_for_zero_element(self):
        rng = np.random.default_rng(1)
        draws = np.array(
            [hadamard_shot_estimate(0.0 + 0.0j, 1.0, 1, rng).real for _ in range(4000)]
        )
        # single-shot outcomes are +-1 with P = 1/2 each
        assert set(np.unique(draws)) == {-1.0, 1.0}
        assert abs(np.mean(draws)) < 5 / np.sqrt(4000)

    def test_out_of_range_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            hadamard_shot_estimate(1.5 + 0j, 1.0, 10, rng)

    def test_unbiased_against_exact(self, tfim_stack):
        H, ref, spec, C = tfim_stack
        oracle = HadamardBlockOracle(H, spec, C, shots=64)
        exact = oracle.exact_value(1, 2)
        rng = np.random.default_rng(7)
        draws = np.array(
            [oracle.estimate_fresh(1, 2, rng).value for _ in range(100_000)]
        )
        stderr_re = np.std(draws.real) / np.sqrt(len(draws))
        stderr_im = np.std(draws.imag) / np.sqrt(len(draws))
        assert abs(np.mean(draws.real) - exact.real) < 5 * stderr_re
        assert abs(np.mean(draws.imag) - exact.imag) < 5 * max(stderr_im, 1e-12)

    def test_theorem_shot_count(self):
        assert theorem_shot_count(1.0, 0.1, 0.05) == 1753

    def test_hoeffding_small_scale(self, tfim_stack):
        # eps = 0.3, delta = 0.1 keeps this cheap; the acceptance suite runs
        # the full-size version
        H, ref, spec, C = tfim_stack
        eps, delta = 0.3 * C, 0.1
        S = theorem_shot_count(C, eps, delta)
        oracle = HadamardBlockOracle(H, spec, C, shots=S)
        exact = oracle.exact_value(0, 0)
        rng = np.random.default_rng(11)
        fails = sum(
            abs(oracle.estimate_fresh(0, 0, rng).value - exact) >= eps
            for _ in range(2000)
        )
        assert fails / 2000 <= delta


class TestTrotter:
    def test_steps_rule(self):
        assert default_steps_rule(6) == 56
        assert default_steps_rule(2) == 50
        assert default_steps_rule(30) == 920

    def test_single_term_is_exact(self):
        from chebpower.pauli import PauliHamiltonian, PauliString

        H = PauliHamiltonian(2, [PauliString(2, "ZX", 0.7)])
        t = 1.3
        assert np.allclose(trotter_unitary(H, t, 1), exact_unitary(H, t), atol=1e-12)

    def test_first_order_error_slope(self):
        H = build_tfim(4, 1.0, 1.2)
        exact = exact_unitary(H, 1.1)
        steps = [4, 8, 16, 32, 64, 128, 256]
        errs = [np.max(np.abs(trotter_unitary(H, 1.1, s) - exact)) for s in steps]
        slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
        assert slope == pytest.approx(-1.0, abs=0.15)

    def test_unitarity(self):
        H = build_tfim(3, 1.0, 0.5)
        U = trotter_unitary(H, 2.0, 17)
        assert np.allclose(U @ U.conj().T, np.eye(8), atol=1e-12)

    def test_affine_shift_is_global_phase(self):
        from chebpower.pauli import AffineOperator

        H = build_tfim(2, 1.0, 1.0)
        plain = trotter_unitary(H, 1.0, 20)
        shifted = trotter_unitary(AffineOperator(H, 1.0, 0.75), 1.0, 20)
        assert np.allclose(shifted, np.exp(0.75j) * plain, atol=1e-12)


class TestTrotterFourierOracle:
    def test_zero_mode_is_exact_identity(self, tfim_stack):
        # With K = 1 and a single shot per term, every estimate lies on the
        # finite lattice c0*delta_ij + c1*(r1 + i s1) + c_{-1}*(r2 + i s2)
        # with r, s in {+-1}; membership pins the k = 0 contribution as the
        # deterministic delta term.
        H, ref, spec, _ = tfim_stack
        oracle = TrotterFourierOracle(H, spec, kernel_order=1, shots_per_term=1)
        c0 = oracle.expansion.coefficient(0)
        c1 = oracle.expansion.coefficient(1)
        cm1 = oracle.expansion.coefficient(-1)
        lattice = [
            c1 * complex(r1, s1) + cm1 * complex(r2, s2)
            for r1 in (-1, 1)
            for s1 in (-1, 1)
            for r2 in (-1, 1)
            for s2 in (-1, 1)
        ]
        for seed in range(30):
            rng = np.random.default_rng(seed)
            diag = oracle.estimate_fresh(0, 0, rng).value - c0
            off = oracle.estimate_fresh(0, 1, rng).value
            assert min(abs(diag - p) for p in lattice) < 1e-12
            assert min(abs(off - p) for p in lattice) < 1e-12

    def test_systematic_matrix_near_exact_filter(self, tfim_stack):
        H, ref, spec, _ = tfim_stack
        oracle = TrotterFourierOracle(H, spec, kernel_order=30, shots_per_term=10)
        systematic = oracle.systematic_matrix()
        exact = exact_filter_matrix(H, spec)
        # Fourier truncation at K=30 dominates; entries agree to ~0.5
        assert np.max(np.abs(systematic - exact)) < 0.6

    def test_unbiased_for_systematic_matrix(self, tfim_stack):
        H, ref, spec, _ = tfim_stack
        oracle = TrotterFourierOracle(H, spec, kernel_order=6, shots_per_term=32)
        target = oracle.systematic_matrix()[2, 1]
        rng = np.random.default_rng(5)
        draws = np.array(
            [oracle.estimate_fresh(2, 1, rng).value for _ in range(60_000)]
        )
        se = np.std(draws.real) / np.sqrt(len(draws))
        assert np.mean(draws.real) == pytest.approx(target.real, abs=5 * se)
        se_im = np.std(draws.imag) / np.sqrt(len(draws))
        assert np.mean(draws.imag) == pytest.approx(target.imag, abs=5 * max(se_im, 1e-12))


class TestElementCache:
    def test_repeat_queries_identical(self, tfim_stack):
        H, ref, spec, C = tfim_stack
        oracle = HadamardBlockOracle(H, spec, C, shots=100)
        cache = ElementCache(oracle, seed=9)
        first = cache_get_or_estimate(cache, 3, 1)
        for _ in range(3):
            assert cache_get_or_estimate(cache, 3, 1) == first

    def test_query_order_independent(self, tfim_stack):
        H, ref, spec, C = tfim_stack
        oracle = HadamardBlockOracle(H, spec, C, shots=100)
        a = ElementCache(oracle, seed=9, hermitian_fill=True)
        b = ElementCache(oracle, seed=9, hermitian_fill=True)
        a.get(1, 2), a.get(2, 1), a.get(0, 0)
        b.get(2, 1), b.get(0, 0), b.get(1, 2)
        assert a.get(1, 2) == b.get(1, 2)
        assert a.get(2, 1) == b.get(2, 1)

    def test_hermitian_fill(self, tfim_stack):
        H, ref, spec, C = tfim_stack
        oracle = HadamardBlockOracle(H, spec, C, shots=50)
        cache = ElementCache(oracle, seed=1, hermitian_fill=True)
        v = cache.get(0, 3)
        assert cache.get(3, 0) == np.conj(v)
        dense = cache.dense()
        assert np.max(np.abs(dense - dense.conj().T)) == 0.0

    def test_dense_defines_perturbation(self, tfim_stack):
        H, ref, spec, C = tfim_stack
        oracle = HadamardBlockOracle(H, spec, C, shots=10_000)
        cache = ElementCache(oracle, seed=2, hermitian_fill=True)
        E = cache.dense() - exact_filter_matrix(H, spec)
        assert 0 < np.linalg.norm(E, ord=2) < 1.5

    def test_csv_roundtrip_bitwise(self, tmp_path, tfim_stack):
        H, ref, spec, C = tfim_stack
        oracle = HadamardBlockOracle(H, spec, C, shots=123)
        cache = ElementCache(oracle, seed=3, hermitian_fill=True)
        cache.dense()
        path = tmp_path / "cache.csv"
        cache.save(path)
        clone = ElementCache(oracle, seed=3, hermitian_fill=True)
        clone.load(path)
        for key, est in cache.store.items():
            got = clone.store[key]
            assert got.value == est.value  # exact equality via 17 digits
            assert got.shots_used == est.shots_used
            assert got.regime == est.regime

    def test_exact_regime_cache_matches_filter(self, tfim_stack):
        H, ref, spec, _ = tfim_stack
        cache = ElementCache(ExactOracle(H, spec), seed=0)
        assert np.allclose(cache.dense(), exact_filter_matrix(H, spec), atol=1e-10)
