"""Core numerics: SVD contracts, seeded streams, Hermitian square root, erf."""

import math

import numpy as np
import pytest

from hybeam.numerics import (
    NotPositiveSemidefiniteError,
    NumericalError,
    SeededRng,
    complex_gaussian,
    erf,
    hermitian_sqrt,
    svd,
)


def erf_series(x: float) -> float:
    """Independent reference: alternating Taylor series of erf, accurate to
    ~4e-14 on |x| <= 3."""
    sign = -1.0 if x < 0 else 1.0
    x = abs(x)
    total = 0.0
    term = x
    n = 0
    while True:
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) < 1e-20 * max(1.0, abs(total)):
            break
        n += 1
        term *= -x * x / n
    return sign * 2.0 / math.sqrt(math.pi) * total


class TestSvd:
    def test_identity(self):
        result = svd(np.eye(3, dtype=complex))
        assert np.allclose(result.singular_values, [1.0, 1.0, 1.0], atol=1e-12)
        # columns of U and V agree up to a per-column phase
        phases = np.sum(result.u.conj() * result.v, axis=0)
        assert np.allclose(np.abs(phases), 1.0, atol=1e-12)

    def test_diagonal(self):
        result = svd(np.diag([3.0, 2.0]).astype(complex))
        assert np.allclose(result.singular_values, [3.0, 2.0], atol=1e-12)

    def test_reconstruction_random(self):
        rng = SeededRng(11, 0)
        a = complex_gaussian(4, 8, 1.0, rng)
        result = svd(a)
        err = np.linalg.norm(result.reconstruct() - a) / np.linalg.norm(a)
        assert err < 1e-9

    @pytest.mark.parametrize("k", [2, 4, 8])
    @pytest.mark.parametrize("n", [8, 32, 128])
    def test_unitarity_and_reconstruction(self, k, n):
        a = complex_gaussian(k, n, 1.0, SeededRng(5, k * 1000 + n))
        result = svd(a)
        r = min(k, n)
        assert np.allclose(result.u.conj().T @ result.u, np.eye(r), atol=1e-10)
        assert np.allclose(result.v.conj().T @ result.v, np.eye(r), atol=1e-10)
        assert np.all(np.diff(result.singular_values) <= 1e-12)
        assert np.all(result.singular_values >= 0)
        err = np.linalg.norm(result.reconstruct() - a) / np.linalg.norm(a)
        assert err < 1e-9

    def test_singular_values_match_eigenvalues(self):
        # independent route: sigma_i^2 are the eigenvalues of H H^H
        a = complex_gaussian(4, 16, 1.0, SeededRng(21, 3))
        result = svd(a)
        eigs = np.sort(np.linalg.eigvalsh(a @ a.conj().T))[::-1]
        assert np.allclose(result.singular_values, np.sqrt(eigs), atol=1e-8)

    def test_rank_deficient(self):
        a = np.zeros((3, 5), dtype=complex)
        a[0] = 1.0
        result = svd(a)
        assert result.singular_values[0] > 0
        assert np.allclose(result.singular_values[1:], 0.0, atol=1e-12)

    def test_nonfinite_rejected(self):
        bad = np.full((2, 2), np.nan, dtype=complex)
        with pytest.raises(NumericalError):
            svd(bad)


class TestComplexGaussian:
    def test_unit_variance_large_sample(self):
        z = complex_gaussian(1000, 1000, 1.0, SeededRng(7, 0))
        assert 0.99 <= np.mean(np.abs(z) ** 2) <= 1.01

    def test_deterministic(self):
        a = complex_gaussian(2, 2, 1.0, SeededRng(42, 0))
        b = complex_gaussian(2, 2, 1.0, SeededRng(42, 0))
        assert np.array_equal(a, b)

    def test_requested_variance(self):
        z = complex_gaussian(100, 100, 4.0, SeededRng(1, 0))
        assert abs(np.mean(np.abs(z) ** 2) - 4.0) < 0.2

    def test_parts_split_variance(self):
        z = complex_gaussian(500, 500, 1.0, SeededRng(3, 0))
        assert abs(np.var(z.real) - 0.5) < 0.01
        assert abs(np.var(z.imag) - 0.5) < 0.01

    def test_invalid_variance(self):
        with pytest.raises(ValueError):
            complex_gaussian(2, 2, 0.0, SeededRng(1, 0))


class TestSeededRng:
    def test_streams_independent_of_creation_order(self):
        direct = SeededRng(9, 5).uniform(8)
        after_other_use = SeededRng(9, 5)
        assert np.array_equal(direct, after_other_use.uniform(8))

    def test_distinct_streams_differ(self):
        a = SeededRng(9, 0).uniform(16)
        b = SeededRng(9, 1).uniform(16)
        assert not np.array_equal(a, b)

    def test_spawn(self):
        assert np.array_equal(SeededRng(4, 7).uniform(4), SeededRng(4, 0).spawn(7).uniform(4))

    def test_negative_stream_rejected(self):
        with pytest.raises(ValueError):
            SeededRng(1, -1)


class TestHermitianSqrt:
    def test_identity(self):
        assert np.allclose(hermitian_sqrt(np.eye(3)), np.eye(3), atol=1e-12)

    def test_diagonal(self):
        assert np.allclose(hermitian_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-12)

    def test_reconstruction_exp_correlation(self):
        from hybeam.channel import exp_correlation_matrix

        r = exp_correlation_matrix(8, 0.7)
        b = hermitian_sqrt(r)
        assert np.linalg.norm(b @ b.conj().T - r) / np.linalg.norm(r) < 1e-9
        assert np.allclose(b, b.conj().T, atol=1e-10)

    def test_idempotent_up_to_psd_uniqueness(self):
        rng = SeededRng(13, 0)
        a = complex_gaussian(6, 6, 1.0, rng)
        b = hermitian_sqrt(a @ a.conj().T)  # Hermitian PSD by construction
        again = hermitian_sqrt(b @ b.conj().T)
        assert np.linalg.norm(again - b) / np.linalg.norm(b) < 1e-9

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveSemidefiniteError):
            hermitian_sqrt(np.diag([1.0, -1.0]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_sqrt(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestErf:
    def test_zero(self):
        assert erf(0.0) == 0.0

    def test_reference_value(self):
        # oracle: Taylor series evaluation (erf_series above)
        assert abs(erf(1.0) - 0.8427007929497149) < 1e-12

    def test_odd_symmetry_exact(self):
        for x in (0.5, 1.0, 2.0, 3.7, 10.0):
            assert erf(-x) == -erf(x)

    def test_against_series_oracle(self):
        for x in np.linspace(-3.0, 3.0, 121):
            assert abs(erf(float(x)) - erf_series(float(x))) < 1e-12

    def test_tail(self):
        assert abs(erf(6.0) - 1.0) < 1e-12
