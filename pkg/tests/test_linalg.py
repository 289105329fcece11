import numpy as np
import pytest

from fmrabi.linalg import (EigenDecomposition, LinalgError, eig_hermitian,
                           eigvals_hermitian, expm_hermitian)


def random_hermitian(n, rng):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def test_diagonal_matrix_sorted_values():
    dec = eig_hermitian(np.diag([1.0, 3.0, 2.0]).astype(complex))
    assert np.allclose(dec.values, [1.0, 2.0, 3.0])
    # permutation vectors, phase-fixed to +1 pivots
    assert np.allclose(np.abs(dec.vectors), np.eye(3)[:, [0, 2, 1]])


def test_pauli_x_closed_form():
    dec = eig_hermitian(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(dec.values, [-1.0, 1.0])
    s = 1 / np.sqrt(2)
    assert np.allclose(np.abs(dec.vectors), [[s, s], [s, s]], atol=1e-12)
    for j in range(2):
        assert dec.vectors[:, j] @ dec.vectors[:, j] == pytest.approx(1.0)


def test_reconstruction_oracle_random_8x8():
    rng = np.random.default_rng(42)
    h = random_hermitian(8, rng)
    dec = eig_hermitian(h)
    scale = max(1.0, np.max(np.abs(h)))
    assert np.max(np.abs(dec.reconstruct() - h)) <= 1e-10 * scale


def test_orthonormality_and_ordering_across_sizes():
    rng = np.random.default_rng(7)
    for n in (2, 5, 16, 33, 64):
        h = random_hermitian(n, rng)
        dec = eig_hermitian(h)
        gram = dec.vectors.conj().T @ dec.vectors
        assert np.max(np.abs(gram - np.eye(n))) <= 1e-10
        assert np.all(np.diff(dec.values) >= -1e-13)
        residual = h @ dec.vectors - dec.vectors * dec.values
        assert np.max(np.abs(residual)) <= 1e-10 * max(1.0, np.max(np.abs(h)))


def test_eigvals_match_full_decomposition():
    rng = np.random.default_rng(3)
    h = random_hermitian(20, rng)
    assert np.allclose(eigvals_hermitian(h), eig_hermitian(h).values,
                       atol=1e-12)


def test_determinism_bit_identical():
    rng = np.random.default_rng(11)
    h = random_hermitian(12, rng)
    a = eig_hermitian(h)
    b = eig_hermitian(h)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.vectors, b.vectors)


def test_rejects_non_square():
    with pytest.raises(LinalgError, match="square"):
        eig_hermitian(np.ones((2, 3), dtype=complex))


def test_rejects_non_hermitian():
    m = np.array([[0.0, 1.0], [0.5, 0.0]], dtype=complex)
    with pytest.raises(LinalgError, match="Hermiticity"):
        eig_hermitian(m)


def test_expm_zero_is_identity():
    assert np.allclose(expm_hermitian(np.zeros((4, 4), dtype=complex), 1.0),
                       np.eye(4))


def test_expm_pauli_z_quarter_turn():
    sz = np.diag([1.0, -1.0]).astype(complex)
    u = expm_hermitian(sz, 1j * np.pi / 2)
    assert np.allclose(u, np.diag([1j, -1j]), atol=1e-14)


def test_expm_matches_taylor_series_oracle():
    rng = np.random.default_rng(5)
    h = random_hermitian(6, rng)
    scale = 1j * 0.37
    # scaled-and-squared Taylor oracle
    k = 6
    m = scale * h / 2 ** k
    series = np.eye(6, dtype=complex)
    term = np.eye(6, dtype=complex)
    for j in range(1, 25):
        term = term @ m / j
        series = series + term
    for _ in range(k):
        series = series @ series
    assert np.max(np.abs(expm_hermitian(h, scale) - series)) <= 1e-9


def test_expm_imaginary_scale_is_unitary():
    rng = np.random.default_rng(9)
    for n in (3, 10, 24):
        h = random_hermitian(n, rng)
        u = expm_hermitian(h, 1j * rng.uniform(0.1, 2.0))
        assert np.max(np.abs(u.conj().T @ u - np.eye(n))) <= 1e-10


def test_eigenvalues_invariant_under_random_unitary_conjugation():
    rng = np.random.default_rng(13)
    h = random_hermitian(10, rng)
    g = random_hermitian(10, rng)
    u = expm_hermitian(g, 1j * 0.83)
    before = eigvals_hermitian(h)
    after = eigvals_hermitian(u @ h @ u.conj().T)
    assert np.max(np.abs(before - after)) <= 1e-10


def test_degenerate_phase_gauge_deterministic():
    # two-fold degenerate block: pivot component must come out real positive
    h = np.diag([1.0, 1.0, 2.0]).astype(complex)
    dec = eig_hermitian(h)
    for j in range(3):
        k = np.argmax(np.abs(dec.vectors[:, j]))
        pivot = dec.vectors[k, j]
        assert pivot.real > 0 and abs(pivot.imag) <= 1e-14


def test_reconstruct_type():
    dec = eig_hermitian(np.eye(2, dtype=complex))
    assert isinstance(dec, EigenDecomposition)
