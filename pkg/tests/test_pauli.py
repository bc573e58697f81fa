"""Pauli-string operator arithmetic: single-string actions, matvec against
dense kron products, sparse columns, and norm bounds."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chebpower.pauli import (
    AffineOperator,
    PauliHamiltonian,
    PauliString,
    check_hermitian,
)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_string(ops: str) -> np.ndarray:
    """Reference dense matrix with qubit j on bit j of the index."""
    out = np.array([[1.0 + 0j]])
    for p in reversed(ops):  # bit 0 is the least significant factor
        out = np.kron(out, SINGLE[p])
    return out


def dense_reference(H: PauliHamiltonian) -> np.ndarray:
    return sum(t.coeff * kron_string(t.ops) for t in H.terms)


def test_x_flips_single_qubit():
    H = PauliHamiltonian(1, [PauliString(1, "X", 1.0)])
    v = np.array([1.0, 0.0], dtype=complex)
    assert np.allclose(H.matvec(v), [0.0, 1.0])


def test_z_signs_excited_state():
    H = PauliHamiltonian(1, [PauliString(1, "Z", 1.0)])
    v = np.array([0.0, 1.0], dtype=complex)
    assert np.allclose(H.matvec(v), [0.0, -1.0])


def test_y_phases():
    H = PauliHamiltonian(1, [PauliString(1, "Y", 1.0)])
    assert np.allclose(H.matvec(np.array([1.0, 0.0])), [0.0, 1j])
    assert np.allclose(H.matvec(np.array([0.0, 1.0])), [-1j, 0.0])


def test_tfim_matvec_on_first_basis_vector():
    # ZZ + X0 + X1 applied to e_0 has unit amplitude on e_0 (ZZ), e_1, e_2.
    from chebpower.models import build_tfim

    H = build_tfim(2, 1.0, 1.0)
    e0 = np.zeros(4, dtype=complex)
    e0[0] = 1.0
    assert np.allclose(H.matvec(e0), [1.0, 1.0, 1.0, 0.0])


def test_invalid_strings_rejected():
    with pytest.raises(ValueError):
        PauliString(2, "XYZ", 1.0)
    with pytest.raises(ValueError):
        PauliString(2, "XQ", 1.0)
    with pytest.raises(ValueError):
        PauliString(2, "XZ", float("nan"))
    with pytest.raises(ValueError):
        PauliHamiltonian(2, [PauliString(3, "XZI", 1.0)])


@st.composite
def random_hamiltonians(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    n_terms = draw(st.integers(min_value=1, max_value=6))
    terms = []
    for _ in range(n_terms):
        ops = "".join(draw(st.sampled_from("IXYZ")) for _ in range(n))
        coeff = draw(
            st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
        )
        terms.append(PauliString(n, ops, coeff))
    return PauliHamiltonian(n, terms)


@settings(max_examples=60, deadline=None)
@given(random_hamiltonians(), st.integers(0, 2**31 - 1))
def test_matvec_matches_dense_reference(H, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=H.dim) + 1j * rng.normal(size=H.dim)
    ref = dense_reference(H)
    assert np.allclose(H.matvec(v), ref @ v, atol=1e-10)
    assert np.allclose(H.dense(), ref, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(random_hamiltonians(), st.integers(0, 2**31 - 1))
def test_matvec_linearity(H, seed):
    rng = np.random.default_rng(seed)
    u = rng.normal(size=H.dim) + 1j * rng.normal(size=H.dim)
    v = rng.normal(size=H.dim) + 1j * rng.normal(size=H.dim)
    a, b = 1.7 - 0.3j, -0.4 + 2.1j
    lhs = H.matvec(a * u + b * v)
    rhs = a * H.matvec(u) + b * H.matvec(v)
    assert np.allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(random_hamiltonians())
def test_columns_match_dense(H):
    ref = dense_reference(H)
    for j in range(H.dim):
        rows, vals = H.column(j)
        col = np.zeros(H.dim, dtype=complex)
        col[rows] = vals
        assert np.allclose(col, ref[:, j], atol=1e-12)


def test_coefficient_norm_bound_dominates_spectrum():
    from chebpower.models import build_tfim, build_xxz, exact_reference

    for H in (build_tfim(3, 1.0, 0.7), build_xxz(3, 1.0, 0.4), build_tfim(2, 1.0, 1.0)):
        ref = exact_reference(H)
        assert H.coefficient_norm_bound() >= np.max(np.abs(ref.eigenvalues)) - 1e-12


def test_norm_bound_tight_for_single_term():
    H = PauliHamiltonian(1, [PauliString(1, "Z", 2.0)])
    assert H.coefficient_norm_bound() == pytest.approx(2.0)
    assert np.max(np.abs(np.linalg.eigvalsh(H.dense()))) == pytest.approx(2.0)


def test_tfim_norm_bound_vs_true_norm():
    from chebpower.models import build_tfim

    H = build_tfim(2, 1.0, 1.0)
    true_norm = np.max(np.abs(np.linalg.eigvalsh(H.dense())))
    assert true_norm == pytest.approx(np.sqrt(5.0))
    assert H.coefficient_norm_bound() == pytest.approx(3.0)
    assert true_norm <= H.coefficient_norm_bound()


def test_affine_operator_matches_dense():
    from chebpower.models import build_tfim

    H = build_tfim(3, 1.0, 0.5)
    op = AffineOperator(H, 0.7, -0.3)
    rng = np.random.default_rng(5)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    dense = 0.7 * H.dense() - 0.3 * np.eye(8)
    assert np.allclose(op.matvec(v), dense @ v, atol=1e-12)
    for j in range(8):
        rows, vals = op.column(j)
        col = np.zeros(8, dtype=complex)
        col[rows] = vals
        assert np.allclose(col, dense[:, j], atol=1e-12)


def test_check_hermitian_raises_on_asymmetry():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        check_hermitian(m)
