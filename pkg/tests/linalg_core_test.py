import numpy as np
import pytest

from secrecy_regions.errors import DensityValidationError, DimensionError
from secrecy_regions.linalg_core import (
    dagger,
    hermitian_eigenvalues,
    ket,
    partial_trace,
    permute_subsystems,
    projector,
    random_density_matrix,
    random_unitary,
    tensor_product,
    trace_distance,
    validate_density,
    von_neumann_entropy,
)

BELL = (np.kron(ket(0, 2), ket(0, 2)) + np.kron(ket(1, 2), ket(1, 2))) / np.sqrt(2)


def test_tensor_product_matches_kron():
    a = np.arange(4).reshape(2, 2)
    b = np.arange(9).reshape(3, 3)
    c = np.eye(2)
    np.testing.assert_allclose(tensor_product(a, b, c), np.kron(np.kron(a, b), c))


def test_partial_trace_of_product_state(rng):
    a, b, c = (random_density_matrix(d, rng) for d in (2, 3, 2))
    rho = tensor_product(a, b, c)
    np.testing.assert_allclose(partial_trace(rho, (2, 3, 2), keep=[1]), b, atol=1e-12)
    # kept factors come back in their original order
    np.testing.assert_allclose(partial_trace(rho, (2, 3, 2), keep=[2, 0]), np.kron(a, c), atol=1e-12)


def test_partial_trace_of_bell_state_is_maximally_mixed():
    rho = projector(BELL)
    np.testing.assert_allclose(partial_trace(rho, (2, 2), keep=[0]), np.eye(2) / 2, atol=1e-12)


def test_partial_trace_errors():
    rho = np.eye(4) / 4
    with pytest.raises(DimensionError, match="multiplies to"):
        partial_trace(rho, (2, 3), keep=[0])
    with pytest.raises(DimensionError, match="at least one"):
        partial_trace(rho, (2, 2), keep=[])
    with pytest.raises(DimensionError, match="out of range"):
        partial_trace(rho, (2, 2), keep=[2])


def test_permute_subsystems_swaps_factors(rng):
    a, b = random_density_matrix(2, rng), random_density_matrix(3, rng)
    swapped = permute_subsystems(np.kron(a, b), (2, 3), [1, 0])
    np.testing.assert_allclose(swapped, np.kron(b, a), atol=1e-12)
    with pytest.raises(DimensionError, match="not a permutation"):
        permute_subsystems(np.kron(a, b), (2, 3), [0, 0])


def test_von_neumann_entropy_values(h2):
    assert von_neumann_entropy(projector(BELL)) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    assert von_neumann_entropy(np.diag([0.35, 0.65])) == pytest.approx(h2(0.35))


def test_von_neumann_entropy_rejects_non_states():
    with pytest.raises(DensityValidationError, match="not Hermitian"):
        von_neumann_entropy(np.array([[0.5, 0.3], [0.0, 0.5]]))
    with pytest.raises(DensityValidationError, match="not a state"):
        von_neumann_entropy(np.diag([1.1, -0.1]))


def test_trace_distance():
    zero, one = projector(ket(0, 2)), projector(ket(1, 2))
    assert trace_distance(zero, one) == pytest.approx(1.0)
    assert trace_distance(zero, zero) == pytest.approx(0.0, abs=1e-15)
    assert trace_distance(zero, np.eye(2) / 2) == pytest.approx(0.5)
    with pytest.raises(DimensionError, match="cannot compare"):
        trace_distance(zero, np.eye(4) / 4)


def test_validate_density_reports_failures():
    assert validate_density(np.eye(3) / 3)
    report = validate_density(np.eye(2))
    assert not report
    assert any(f.startswith("trace") for f in report.failures)
    report = validate_density(np.diag([1.5, -0.5]))
    assert any(f.startswith("positivity") for f in report.failures)


def test_random_states_and_unitaries(rng):
    for dim in (1, 2, 5):
        assert validate_density(random_density_matrix(dim, rng))
        u = random_unitary(dim, rng)
        np.testing.assert_allclose(dagger(u) @ u, np.eye(dim), atol=1e-12)
    assert np.linalg.matrix_rank(random_density_matrix(4, rng, rank=1)) == 1


def test_entropy_is_unitarily_invariant(rng):
    rho = random_density_matrix(4, rng)
    u = random_unitary(4, rng)
    assert von_neumann_entropy(u @ rho @ dagger(u)) == pytest.approx(von_neumann_entropy(rho), abs=1e-10)


def test_entropy_is_additive_on_products(rng):
    rho, sigma = random_density_matrix(2, rng), random_density_matrix(3, rng)
    expected = von_neumann_entropy(rho) + von_neumann_entropy(sigma)
    assert von_neumann_entropy(tensor_product(rho, sigma)) == pytest.approx(expected, abs=1e-10)


def test_trace_distance_is_a_metric(rng):
    rho, sigma, tau = (random_density_matrix(3, rng) for _ in range(3))
    assert trace_distance(rho, sigma) == pytest.approx(trace_distance(sigma, rho), abs=1e-14)
    assert trace_distance(rho, tau) <= trace_distance(rho, sigma) + trace_distance(sigma, tau) + 1e-12
    p, q = np.array([0.5, 0.3, 0.2]), np.array([0.1, 0.1, 0.8])
    assert trace_distance(np.diag(p), np.diag(q)) == pytest.approx(0.5 * np.abs(p - q).sum())


def test_partial_trace_matches_index_sums(rng):
    dims = (2, 3, 2)
    rho = random_density_matrix(12, rng)
    t = rho.reshape(dims + dims)
    np.testing.assert_allclose(
        partial_trace(rho, dims, keep=[0, 2]), np.einsum("ajbcjd->abcd", t).reshape(4, 4), atol=1e-12
    )
    np.testing.assert_allclose(partial_trace(rho, dims, keep=[1]), np.einsum("iajibj->ab", t), atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, dims, keep=[0, 1, 2]), rho, atol=1e-15)
    assert np.trace(partial_trace(rho, dims, keep=[1])) == pytest.approx(np.trace(rho))


def test_hermitian_eigenvalues_are_descending():
    np.testing.assert_allclose(hermitian_eigenvalues(np.diag([-1.0, 1.0])), [1.0, -1.0])
    with pytest.raises(DensityValidationError, match="not Hermitian"):
        hermitian_eigenvalues([[0, 1], [0, 0]])
