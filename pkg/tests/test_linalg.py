"""Tests for the classical linear algebra kernels."""

from __future__ import annotations

import numpy as np
import numpy.linalg as npl
import pytest

from semiop import (
    NegativeSpectrum,
    NotHermitian,
    herm_eig,
    num_radius,
    op_norm,
    pinv,
    psd_fn,
    rotation_max_eig,
    spec_radius,
)

from oracles import (
    num_radius_oracle,
    penrose_residuals,
    random_hermitian,
    random_matrix,
    random_psd,
    spec_radius_oracle,
)


class TestHermEig:
    def test_identity(self):
        eig = herm_eig(np.eye(2))
        assert np.allclose(eig.eigenvalues, [1.0, 1.0])
        assert np.allclose(eig.basis.conj().T @ eig.basis, np.eye(2), atol=1e-12)

    def test_diagonal(self):
        eig = herm_eig(np.diag([3.0, 1.0]))
        assert np.allclose(eig.eigenvalues, [3.0, 1.0])

    def test_exchange(self):
        eig = herm_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(eig.eigenvalues, [1.0, -1.0])

    def test_reconstruction_residual(self):
        rng = np.random.default_rng(101)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            H = random_hermitian(rng, n, scale=float(rng.uniform(0.1, 10)))
            eig = herm_eig(H)
            scale = max(1.0, op_norm(H))
            assert op_norm(eig.reconstruct() - H) <= 1e-12 * scale
            assert op_norm(eig.basis.conj().T @ eig.basis - np.eye(n)) <= 1e-12
            assert np.all(np.diff(eig.eigenvalues) <= 0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestPinv:
    def test_diagonal(self):
        assert np.allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))

    def test_identity(self):
        assert np.allclose(pinv(np.eye(3)), np.eye(3))

    def test_rank_one(self):
        # all-ones 2x2 has pseudoinverse with constant entry 1/4; the four
        # Penrose identities pin the value down
        A = np.ones((2, 2))
        Ap = pinv(A)
        assert np.allclose(Ap, 0.25 * np.ones((2, 2)), atol=1e-12)
        assert max(penrose_residuals(A, Ap)) <= 1e-10 * max(1.0, op_norm(A))

    def test_zero(self):
        assert np.allclose(pinv(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_penrose_identities(self):
        rng = np.random.default_rng(202)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            rank = int(rng.integers(1, n + 1))
            A = random_psd(rng, n, rank)
            Ap = pinv(A)
            assert max(penrose_residuals(A, Ap)) <= 1e-10 * max(1.0, op_norm(A))


class TestPsdFn:
    def test_diagonal_sqrt(self):
        assert np.allclose(psd_fn(np.diag([4.0, 9.0]), np.sqrt), np.diag([2.0, 3.0]))

    def test_identity_function(self):
        X = np.array([[2.0, 1.0], [1.0, 2.0]])
        assert np.allclose(psd_fn(X, lambda t: t), X, atol=1e-12)

    def test_sqrt_squares_back(self):
        H = np.array([[2.0, 1.0], [1.0, 2.0]])
        R = psd_fn(H, np.sqrt)
        assert op_norm(R @ R - H) <= 1e-9 * max(1.0, op_norm(H))

    def test_sqrt_squares_back_random(self):
        rng = np.random.default_rng(303)
        for _ in range(50):
            n = int(rng.integers(1, 7))
            H = random_psd(rng, n, int(rng.integers(1, n + 1)))
            R = psd_fn(H, np.sqrt)
            assert op_norm(R @ R - H) <= 1e-9 * max(1.0, op_norm(H))

    def test_zero_power_convention(self):
        # t^0 = 1 for every t >= 0, including t = 0
        out = psd_fn(np.diag([0.0, 2.0]), lambda t: t**0.0)
        assert np.allclose(out, np.eye(2), atol=1e-12)

    def test_rejects_negative_spectrum(self):
        with pytest.raises(NegativeSpectrum):
            psd_fn(np.diag([1.0, -1.0]), np.sqrt)

    def test_clamps_tiny_negative(self):
        out = psd_fn(np.diag([1.0, -1e-14]), np.sqrt)
        assert np.allclose(out, np.diag([1.0, 0.0]), atol=1e-7)


class TestOpNorm:
    def test_examples(self):
        assert op_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2.0, abs=1e-12)
        assert op_norm(np.eye(4)) == pytest.approx(1.0, abs=1e-12)
        assert op_norm(np.ones((2, 2))) == pytest.approx(2.0, abs=1e-12)

    def test_matches_svd(self):
        rng = np.random.default_rng(404)
        for _ in range(50):
            M = random_matrix(rng, int(rng.integers(1, 9)))
            assert op_norm(M) == pytest.approx(float(npl.norm(M, 2)), abs=1e-10)


class TestNumRadius:
    def test_nilpotent(self):
        assert num_radius(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(0.5, abs=1e-12)

    def test_normal(self):
        assert num_radius(np.diag([1.0, 1j])) == pytest.approx(1.0, abs=1e-12)

    def test_shifted_nilpotent(self):
        assert num_radius(np.array([[1.0, 1.0], [0.0, 1.0]])) == pytest.approx(1.5, abs=1e-10)

    def test_zero(self):
        assert num_radius(np.zeros((3, 3))) == 0.0

    def test_oracle_agreement(self):
        rng = np.random.default_rng(505)
        for _ in range(30):
            n = int(rng.integers(1, 6))
            M = random_matrix(rng, n, scale=float(rng.uniform(0.2, 3.0)))
            w = num_radius(M)
            bf = num_radius_oracle(M, rng, samples=20_000)
            assert abs(w - bf) <= 1e-3
            assert bf <= w + 1e-8

    def test_norm_equivalence(self):
        rng = np.random.default_rng(606)
        for _ in range(100):
            M = random_matrix(rng, int(rng.integers(1, 9)))
            w = num_radius(M)
            nm = op_norm(M)
            assert 0.5 * nm - 1e-9 <= w <= nm + 1e-9


class TestSpecRadius:
    def test_nilpotent(self):
        assert spec_radius(np.array([[0.0, 1.0], [0.0, 0.0]])) == 0.0

    def test_diagonal(self):
        assert spec_radius(np.diag([2.0, -3.0])) == pytest.approx(3.0, abs=1e-9)

    def test_antidiagonal(self):
        assert spec_radius(np.array([[0.0, 2.0], [1.0, 0.0]])) == pytest.approx(np.sqrt(2.0), abs=1e-9)

    def test_matches_eigenvalues(self):
        rng = np.random.default_rng(707)
        for _ in range(100):
            M = random_matrix(rng, int(rng.integers(1, 9)))
            r = spec_radius(M)
            assert r == pytest.approx(spec_radius_oracle(M), abs=1e-6 * max(1.0, r))

    def test_radius_chain(self):
        rng = np.random.default_rng(808)
        for _ in range(50):
            M = random_matrix(rng, int(rng.integers(1, 7)))
            assert spec_radius(M) <= num_radius(M) + 1e-8
            assert num_radius(M) <= op_norm(M) + 1e-8


class TestRotationMaxEig:
    def test_pure_cosine(self):
        one = np.array([[1.0]])
        zero = np.array([[0.0]])
        val, arg = rotation_max_eig(None, one, zero)
        assert val == pytest.approx(1.0, abs=1e-12)
        assert min(arg, 2 * np.pi - arg) <= 1e-4

    def test_shifted(self):
        val, _ = rotation_max_eig(2.0 * np.eye(1), np.eye(1), np.zeros((1, 1)))
        assert val == pytest.approx(3.0, abs=1e-12)

    def test_phase_mix(self):
        # lambda_max(cos t D + sin t E) with D=diag(1,0), E=diag(0,1) peaks at 1
        D = np.diag([1.0, 0.0])
        E = np.diag([0.0, 1.0])
        val, _ = rotation_max_eig(None, D, E)
        assert val == pytest.approx(1.0, abs=1e-10)
