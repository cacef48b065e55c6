import numpy as np
import pytest

from qcontrol_cost.core.linalg import (
    as_density_matrix,
    gibbs_state,
    haar_random_pure_state,
    hermitian_eig,
    is_density_matrix,
    kron,
    matrix_exp_hermitian,
    matrix_ln_hermitian,
    partial_trace,
    project_marginal,
    solve_linear,
)
from qcontrol_cost.core.types import (
    InvalidDensityMatrixError,
    InvalidInputError,
    SingularMatrixError,
)
from qcontrol_cost.tests.conftest import random_density, random_hermitian


def _characteristic_coefficients(a):
    """Faddeev-LeVerrier: coefficients of det(λI − A), highest power first"""
    n = a.shape[0]
    coeffs = [1.0]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_reconstructs_and_is_unitary(rng, method):
    for n in (1, 2, 5, 8):
        a = random_hermitian(rng, n)
        spec = hermitian_eig(a, method=method)
        scale = np.max(np.abs(a))
        assert np.max(np.abs(spec.reconstruct() - a)) <= 1e-10 * scale
        u = spec.eigenvectors
        assert np.max(np.abs(u.conj().T @ u - np.eye(n))) <= 1e-10
        assert np.all(np.diff(spec.eigenvalues) >= 0)


def test_eigenvalues_match_characteristic_polynomial_roots(rng):
    g = rng.standard_normal((6, 6))
    a = g + g.T
    roots = np.sort(np.roots(_characteristic_coefficients(a)).real)
    for method in ("lapack", "jacobi"):
        w = hermitian_eig(a, method=method).eigenvalues
        np.testing.assert_allclose(w, roots, rtol=0, atol=1e-6)


def test_jacobi_agrees_with_lapack(rng):
    a = random_hermitian(rng, 10)
    np.testing.assert_allclose(hermitian_eig(a, "jacobi").eigenvalues,
                               hermitian_eig(a, "lapack").eigenvalues, atol=1e-10)


def test_eig_method_follows_global_config(rng):
    from qcontrol_cost.config import QccConfig, set_global_config

    set_global_config(QccConfig(eig_method="jacobi"))
    a = random_hermitian(rng, 4)
    np.testing.assert_allclose(hermitian_eig(a).reconstruct(), a, atol=1e-10)


def test_non_hermitian_rejected():
    with pytest.raises(InvalidInputError):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        hermitian_eig(np.ones((2, 3)))


def test_log_round_trip_full_rank(rng):
    rho = random_density(rng, 4, min_weight=0.01)
    log = matrix_ln_hermitian(rho)
    assert not log.support_deficient
    np.testing.assert_allclose(matrix_exp_hermitian(log.matrix), rho, atol=1e-9)


def test_log_flags_support_deficiency():
    log = matrix_ln_hermitian(np.diag([1.0, 0.0]))
    assert log.support_deficient
    np.testing.assert_allclose(log.null_projector, np.diag([0.0, 1.0]), atol=1e-14)
    assert np.all(np.isfinite(log.matrix))


def test_log_rejects_negative_eigenvalue():
    with pytest.raises(InvalidDensityMatrixError):
        matrix_ln_hermitian(np.diag([1.1, -0.1]))
    with pytest.raises(InvalidInputError):
        matrix_ln_hermitian(np.eye(2) / 2, eig_floor=0.0)


def test_gibbs_state_limits():
    h = np.diag([0.0, 0.0, 1.0])
    np.testing.assert_allclose(gibbs_state(h, 0.0), np.diag([0.5, 0.5, 0.0]), atol=1e-15)
    hot = gibbs_state(h, 1e9)
    np.testing.assert_allclose(hot, np.eye(3) / 3, atol=1e-8)
    warm = np.real(np.diag(gibbs_state(np.diag([0.0, 1.0]), 1.0)))
    np.testing.assert_allclose(warm, [1 / (1 + np.exp(-1)), np.exp(-1) / (1 + np.exp(-1))])
    with pytest.raises(InvalidInputError):
        gibbs_state(h, -1.0)


def test_kron_index_formula(rng):
    a = random_hermitian(rng, 2)
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            for p in range(3):
                for q in range(3):
                    assert k[i * 3 + p, j * 3 + q] == a[i, j] * b[p, q]


def test_partial_trace_matches_double_sum(rng):
    d_s, d_a = 2, 2
    tau = random_density(rng, d_s * d_a)
    keep_s = np.zeros((d_s, d_s), dtype=complex)
    keep_a = np.zeros((d_a, d_a), dtype=complex)
    for i in range(d_s):
        for j in range(d_s):
            keep_s[i, j] = sum(tau[i * d_a + k, j * d_a + k] for k in range(d_a))
    for i in range(d_a):
        for j in range(d_a):
            keep_a[i, j] = sum(tau[k * d_a + i, k * d_a + j] for k in range(d_s))
    np.testing.assert_allclose(partial_trace(tau, (d_s, d_a), "S"), keep_s, atol=1e-15)
    np.testing.assert_allclose(partial_trace(tau, (d_s, d_a), "A"), keep_a, atol=1e-15)


def test_partial_trace_of_product(rng):
    rho, sigma = random_density(rng, 3), random_density(rng, 2)
    np.testing.assert_allclose(partial_trace(np.kron(rho, sigma), (3, 2), "S"), rho, atol=1e-12)
    np.testing.assert_allclose(partial_trace(np.kron(rho, sigma), (3, 2), "A"), sigma, atol=1e-12)
    with pytest.raises(InvalidInputError):
        partial_trace(np.kron(rho, sigma), (2, 2))


def test_project_marginal(rng):
    tau = random_density(rng, 4)
    rho_star = random_density(rng, 2)
    projected = project_marginal(tau, rho_star, (2, 2))
    np.testing.assert_allclose(partial_trace(projected, (2, 2), "S"), rho_star, atol=1e-14)


def test_solve_linear_residual(rng):
    a = rng.standard_normal((10, 10)) + 10 * np.eye(10)
    b = rng.standard_normal(10)
    x = solve_linear(a, b)
    assert x.shape == (10,)
    bound = 1e-10 * (np.max(np.abs(a)) * np.max(np.abs(x)) + np.max(np.abs(b)))
    assert np.max(np.abs(a @ x - b)) <= bound

    many = solve_linear(a, np.stack([b, 2 * b], axis=1))
    np.testing.assert_allclose(many[:, 1], 2 * x, rtol=1e-12)


def test_solve_linear_needs_pivoting():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(solve_linear(a, [2.0, 3.0]), [3.0, 2.0])


def test_solve_linear_singular():
    with pytest.raises(SingularMatrixError) as info:
        solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), [1.0, 2.0])
    assert info.value.condition_number is not None
    with pytest.raises(SingularMatrixError):
        solve_linear(np.zeros((3, 3)), np.ones(3))


def test_haar_state_is_pure_and_reproducible():
    first = haar_random_pure_state(3, seed=7)
    assert abs(np.trace(first) - 1) < 1e-12
    np.testing.assert_allclose(first @ first, first, atol=1e-12)
    np.testing.assert_array_equal(first, haar_random_pure_state(3, seed=7))
    assert not np.allclose(first, haar_random_pure_state(3, seed=8))


def test_haar_states_average_to_maximally_mixed():
    gen = np.random.default_rng(1)
    mean = np.mean([haar_random_pure_state(2, gen) for _ in range(4000)], axis=0)
    np.testing.assert_allclose(mean, np.eye(2) / 2, atol=0.03)


def test_density_matrix_validation():
    assert is_density_matrix(np.eye(2) / 2)
    assert not is_density_matrix(np.eye(2))
    assert not is_density_matrix(np.array([[0.5, 0.5j], [0.5j, 0.5]]))
    with pytest.raises(InvalidDensityMatrixError, match="trace"):
        as_density_matrix(np.eye(3))


def test_trace_is_cyclic(rng):
    for _ in range(20):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert abs(np.trace(a @ b) - np.trace(b @ a)) <= 1e-12 * max(1.0, abs(np.trace(a @ b)))
