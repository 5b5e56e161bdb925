import numpy as np
import pytest
from scipy.linalg import block_diag

from secrecy_regions.codec_sim.type_classes import conditional_types
from secrecy_regions.codec_sim.weyl import (
    GammaKey,
    enumerate_keys,
    heisenberg_weyl,
    input_unitary,
    key_from_index,
    key_space_size,
    keyed_unitary,
    random_key,
)
from secrecy_regions.ensembles import PAULI_X
from secrecy_regions.errors import EnsembleError, KeyRangeError
from secrecy_regions.linalg_core import dagger, random_density_matrix


def test_qubit_operators_are_paulis():
    np.testing.assert_allclose(heisenberg_weyl(2, 1, 0), PAULI_X, atol=1e-15)
    np.testing.assert_allclose(heisenberg_weyl(2, 0, 1), np.diag([1, -1]), atol=1e-15)


def test_commutation_phase_in_dimension_three():
    x, z = heisenberg_weyl(3, 1, 0), heisenberg_weyl(3, 0, 1)
    omega = np.exp(2j * np.pi / 3)
    np.testing.assert_allclose(x @ z, omega * z @ x, atol=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_operators_are_unitary_with_order_d(d):
    for a in range(d):
        for b in range(d):
            w = heisenberg_weyl(d, a, b)
            np.testing.assert_allclose(dagger(w) @ w, np.eye(d), atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(heisenberg_weyl(d, 1, 0), d), np.eye(d), atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(heisenberg_weyl(d, 0, 1), d), np.eye(d), atol=1e-12)


def test_out_of_range_exponents():
    with pytest.raises(KeyRangeError, match="out of range"):
        heisenberg_weyl(2, 2, 0)
    with pytest.raises(KeyRangeError, match="positive"):
        heisenberg_weyl(0, 0, 0)


def test_identity_key_gives_identity():
    decomp = conditional_types((0, 1, 0), 2)
    np.testing.assert_allclose(keyed_unitary(decomp, GammaKey.identity(decomp)), np.eye(8))


def test_shift_on_the_two_dimensional_class():
    decomp = conditional_types((0, 0), 2)
    key = GammaKey(((0, 0, 0), (1, 0, 0), (0, 0, 0)))
    np.testing.assert_allclose(keyed_unitary(decomp, key), block_diag(1, PAULI_X, 1), atol=1e-15)


def test_key_space_enumeration():
    decomp = conditional_types((0, 0), 2)
    assert key_space_size(decomp) == 32
    keys = list(enumerate_keys(decomp))
    assert len(set(keys)) == 32
    for key in keys:
        key.validate(decomp)
    assert key_from_index(decomp, 0) == GammaKey.identity(decomp)
    with pytest.raises(KeyRangeError, match="out of range"):
        key_from_index(decomp, 32)


@pytest.mark.parametrize("x_n", [(0,), (0, 1), (1, 1), (0, 0, 1)])
def test_keyed_unitaries_are_unitary(x_n, rng):
    decomp = conditional_types(x_n, 2)
    keys = list(enumerate_keys(decomp)) if key_space_size(decomp) <= 64 else [random_key(decomp, rng) for _ in range(64)]
    for key in keys:
        u = keyed_unitary(decomp, key)
        assert np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) < 1e-10


@pytest.mark.parametrize("x_n", [(0,), (0, 0), (0, 1)])
def test_key_average_depolarizes_each_class(x_n, rng):
    decomp = conditional_types(x_n, 2)
    rho = random_density_matrix(2 ** len(x_n), rng)
    keys = list(enumerate_keys(decomp))
    average = sum(keyed_unitary(decomp, k) @ rho @ dagger(keyed_unitary(decomp, k)) for k in keys) / len(keys)
    expected, start = [], 0
    for size in decomp.sizes:
        block = rho[start : start + size, start : start + size]
        expected.append(np.trace(block) / size * np.eye(size))
        start += size
    np.testing.assert_allclose(average, block_diag(*expected), atol=1e-12)


def test_key_validation():
    decomp = conditional_types((0, 0), 2)
    with pytest.raises(KeyRangeError, match="triples"):
        GammaKey(((0, 0, 0),)).validate(decomp)
    with pytest.raises(KeyRangeError, match="out of range"):
        keyed_unitary(decomp, GammaKey(((0, 0, 0), (2, 0, 0), (0, 0, 0))))
    with pytest.raises(KeyRangeError, match="out of range"):
        GammaKey(((0, 0, 2), (0, 0, 0), (0, 0, 0))).validate(decomp)


def test_input_unitary_needs_schmidt_bases():
    decomp = conditional_types((0,), 2)
    with pytest.raises(EnsembleError, match="Schmidt"):
        input_unitary(decomp, GammaKey.identity(decomp))
