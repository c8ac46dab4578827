import numpy as np
import pytest

from odnsparse import (
    NotCorrelationError,
    NotOdnError,
    ZeroVarianceColumnError,
    correlation_from_data,
    decompose,
    generate_odn,
    pca_compare,
    quadform_gap,
    reconstruct,
    sparsify_laplacian,
    validate_odn,
)

from conftest import random_odn


def factor_data(rng, samples=200, features=10, noise=0.3):
    """All-positive loadings make every pairwise correlation nonnegative."""
    loadings = rng.uniform(0.4, 1.0, features)
    factor = rng.standard_normal(samples)
    return np.outer(factor, loadings) + noise * rng.standard_normal(
        (samples, features)
    )


class TestQuadformGap:
    def test_zero_vector(self, rng):
        m = random_odn(rng, 6)
        rep = quadform_gap(m, m, [np.zeros(6)])
        assert rep.records[0].gap == 0.0
        assert rep.records[0].bound == 0.0

    def test_identical_matrices(self, rng):
        m = random_odn(rng, 6)
        xs = [rng.standard_normal(6) for _ in range(4)]
        rep = quadform_gap(m, m, xs)
        assert all(r.gap == 0.0 for r in rep.records)
        assert rep.inertia_match

    def test_diagonal_basis_vectors(self):
        m = validate_odn(np.diag([0.0, 10.0]))
        m_hat = validate_odn(np.diag([5.0, 5.0]))
        rep = quadform_gap(m, m_hat, list(np.eye(2)))
        for r in rep.records:
            assert r.gap == 5.0  # |M_ii - d| = (delta_max - delta_min) / 2
            assert r.gap <= r.bound + 1e-12

    def test_certified_bound_never_violated(self, rng):
        m = random_odn(rng, 20, density=0.5)
        d = decompose(m)
        res = sparsify_laplacian(d, 0.3, seed=8)
        m_hat = reconstruct(res.adjacency, d.center)
        xs = [rng.standard_normal(20) * float(rng.uniform(0.1, 10)) for _ in range(1000)]
        rep = quadform_gap(m, m_hat, xs)
        for r in rep.records:
            assert r.gap <= r.bound * (1 + 1e-9) + 1e-12


class TestCorrelationFromData:
    def test_identical_columns(self, rng):
        v = rng.standard_normal(50)
        m = correlation_from_data(np.column_stack([v, v]))
        np.testing.assert_array_equal(m.diag, [1.0, 1.0])
        np.testing.assert_allclose(m.vals[0], 1.0, rtol=1e-12)

    def test_anti_correlated_rejected(self, rng):
        v = rng.standard_normal(50)
        with pytest.raises(NotOdnError) as exc:
            correlation_from_data(np.column_stack([v, -v]))
        assert exc.value.pairs[0][:2] == (0, 1)

    def test_factor_model_accepted(self, rng):
        m = correlation_from_data(factor_data(rng))
        assert m.n == 10
        np.testing.assert_array_equal(m.diag, np.ones(10))
        assert np.all(m.vals > 0)
        assert np.all(m.vals <= 1.0)
        # oracle: plain covariance arithmetic
        data = factor_data(np.random.default_rng(123))
        m2 = correlation_from_data(data)
        np.testing.assert_allclose(m2.to_dense(), np.corrcoef(data.T), atol=1e-12)

    def test_zero_variance_rejected(self, rng):
        data = rng.standard_normal((30, 3))
        data[:, 1] = 4.2
        with pytest.raises(ZeroVarianceColumnError) as exc:
            correlation_from_data(data)
        assert exc.value.column == 1

    def test_zero_variance_with_rounding_residue(self, rng):
        # constant 0.1 over an odd sample count leaves std at rounding
        # level rather than exactly zero; still a rejection
        data = rng.standard_normal((37, 2))
        data[:, 0] = 0.1
        with pytest.raises(ZeroVarianceColumnError):
            correlation_from_data(data)

    def test_unbiased_flag(self, rng):
        data = factor_data(rng, samples=40, features=4)
        a = correlation_from_data(data)
        b = correlation_from_data(data, unbiased=True)
        np.testing.assert_allclose(a.to_dense(), b.to_dense(), rtol=1e-12)


class TestPcaCompare:
    def test_identity_matrix(self):
        m = validate_odn(np.eye(12))
        cmp = pca_compare(m, 0.25, 3, seed=1)
        np.testing.assert_array_equal(cmp.variances, np.ones(3))
        np.testing.assert_allclose(cmp.variances_hat, np.ones(3), rtol=1e-12)
        assert np.all(cmp.gaps <= 1e-12)
        assert cmp.status == "pass"

    def test_equicorrelation_closed_form(self):
        # off-diagonal 0.5 on n=20: top value 1 + 0.5*19, the rest 0.5
        m = generate_odn("equicorrelation", 20, correlation=0.5)
        cmp = pca_compare(m, 0.25, 3, seed=7)
        np.testing.assert_allclose(cmp.variances, [10.5, 0.5, 0.5], rtol=1e-12)
        assert cmp.status == "pass"
        assert np.all(cmp.gaps <= cmp.per_component_bound * (1 + 1e-9))
        assert cmp.cumulative_bound == 3 * cmp.per_component_bound
        assert cmp.cumulative_bound_literal == 6 * cmp.per_component_bound
        assert cmp.dense_seconds > 0
        assert cmp.iterative_seconds > 0
        assert cmp.iterative_converged

    def test_factor_model_end_to_end(self, rng):
        m = correlation_from_data(factor_data(rng, features=30))
        cmp = pca_compare(m, 0.25, 3, seed=11)
        if cmp.verification.passed:
            assert np.all(cmp.gaps <= cmp.per_component_bound * (1 + 1e-9))
        assert abs(cmp.cumulative - cmp.cumulative_hat) <= cmp.cumulative_bound_literal

    def test_not_correlation_rejected(self):
        m = validate_odn(np.diag([1.0, 2.0]))
        with pytest.raises(NotCorrelationError):
            pca_compare(m, 0.25, 1)

    def test_p_out_of_range(self):
        m = validate_odn(np.eye(4))
        with pytest.raises(ValueError):
            pca_compare(m, 0.25, 5)
        with pytest.raises(ValueError):
            pca_compare(m, 0.25, 0)

    def test_p_equal_n_falls_back_dense(self):
        m = generate_odn("equicorrelation", 6, correlation=0.4)
        cmp = pca_compare(m, 0.25, 6, seed=2)
        np.testing.assert_allclose(cmp.variances, cmp.variances_hat, atol=3.0)
        assert cmp.psd_ok
