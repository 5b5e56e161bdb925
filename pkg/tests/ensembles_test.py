import numpy as np
import pytest

from secrecy_regions.ensembles import (
    MAXIMALLY_ENTANGLED,
    PAULI_X,
    Ensemble,
    Subsystem,
    beta_ensemble,
    build_omega,
    build_phi,
    custom_ensemble,
    marginal,
    to_block_diagonal,
    u_beta_norm_squared,
)
from secrecy_regions.errors import EnsembleError, SubsystemError
from secrecy_regions.linalg_core import validate_density, von_neumann_entropy
from secrecy_regions.rate_regions import entropic_quantities


def test_build_phi_endpoints():
    np.testing.assert_allclose(build_phi(1.0), MAXIMALLY_ENTANGLED, atol=1e-15)
    np.testing.assert_allclose(build_phi(0.0), [1, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("beta", np.linspace(0.0, 1.0, 11))
def test_unnormalized_norm_matches_closed_form(beta):
    u = np.sqrt(1 - beta) * np.array([1, 0, 0, 0]) + np.sqrt(beta) * MAXIMALLY_ENTANGLED
    assert np.linalg.norm(u) ** 2 == pytest.approx(u_beta_norm_squared(beta))
    assert np.linalg.norm(build_phi(beta)) == pytest.approx(1.0)


def test_build_phi_rejects_beta_out_of_range():
    with pytest.raises(EnsembleError, match="beta must lie"):
        build_phi(1.5)


def test_ensemble_validation():
    with pytest.raises(EnsembleError, match="not a probability vector"):
        Ensemble(p_x=[0.6, 0.6], phi=build_phi(1.0), d_g1=2, d_g2=2, encoders=(np.eye(2), PAULI_X))
    with pytest.raises(EnsembleError, match="not an isometry"):
        Ensemble(p_x=[1.0], phi=build_phi(1.0), d_g1=2, d_g2=2, encoders=(2 * np.eye(2),))
    with pytest.raises(EnsembleError, match="encoders"):
        Ensemble(p_x=[0.5, 0.5], phi=build_phi(1.0), d_g1=2, d_g2=2, encoders=(np.eye(2),))
    with pytest.raises(EnsembleError, match="not normalized"):
        Ensemble(p_x=[1.0], phi=[1, 1, 0, 0], d_g1=2, d_g2=2, encoders=(np.eye(2),))


def test_psi_applies_the_encoder_on_the_first_factor():
    ens = beta_ensemble(0.0)
    np.testing.assert_allclose(ens.psi(0), [[1, 0], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(ens.psi(1), [[0, 0], [1, 0]], atol=1e-15)


def test_omega_blocks_are_states(channel, entangled_ensemble):
    cq = build_omega(channel, entangled_ensemble)
    assert cq.dims == (2, 2, 2)
    assert cq.labels == (Subsystem.G2, Subsystem.B, Subsystem.E)
    for block in cq.blocks:
        assert validate_density(block)
    assert cq.provenance["gamma"] == 0.3
    assert cq.provenance["beta"] == 1.0


def test_bob_marginal_of_maximally_entangled_input(channel, entangled_ensemble):
    bob = marginal(build_omega(channel, entangled_ensemble), [Subsystem.B])
    for block in bob.blocks:
        np.testing.assert_allclose(block, np.diag([0.65, 0.35]), atol=1e-12)


def test_marginal_accepts_names_and_indices(channel, entangled_ensemble):
    cq = build_omega(channel, entangled_ensemble)
    by_name = marginal(cq, ["E", Subsystem.G2])
    by_index = marginal(cq, [2, 0])
    assert by_name.labels == (Subsystem.G2, Subsystem.E)
    for a, b in zip(by_name.blocks, by_index.blocks, strict=True):
        np.testing.assert_allclose(a, b)
    with pytest.raises(SubsystemError, match="out of range"):
        marginal(cq, [3])
    with pytest.raises(SubsystemError):
        marginal(cq, ["X"])


def test_block_diagonal_matrix(channel, entangled_ensemble):
    matrix = to_block_diagonal(build_omega(channel, entangled_ensemble))
    assert matrix.shape == (16, 16)
    assert validate_density(matrix)
    assert np.allclose(matrix[:8, 8:], 0)


def test_relabeled_swaps_letters():
    ens = beta_ensemble(0.5)
    swapped = ens.relabeled([1, 0])
    np.testing.assert_allclose(swapped.psi(0), ens.psi(1))
    np.testing.assert_allclose(swapped.psi(1), ens.psi(0))


def test_custom_ensemble_with_unequal_dimensions():
    ens = custom_ensemble(p_x=[1.0], phi=[1, 0, 0, 0, 0, 0], encoders=[np.eye(4)[:, :2]], phi_dims=(2, 3))
    assert (ens.d_g1, ens.d_g2, ens.d_a) == (2, 3, 4)
    assert ens.psi(0).shape == (4, 3)


def test_build_omega_rejects_dimension_mismatch(channel):
    ens = custom_ensemble(p_x=[1.0], phi=[1, 0, 0, 0, 0, 0], encoders=[np.eye(4)[:, :2]], phi_dims=(2, 3))
    with pytest.raises(EnsembleError, match="channel input"):
        build_omega(channel, ens)


@pytest.mark.parametrize("beta", [0.0, 0.4, 1.0])
def test_omega_blocks_are_pure(channel, beta):
    cq = build_omega(channel, beta_ensemble(beta))
    for block in cq.blocks:
        assert von_neumann_entropy(block) <= 1e-9


def test_eve_and_g2_marginal_matches_index_sums(channel, entangled_ensemble):
    cq = build_omega(channel, entangled_ensemble)
    eve = marginal(cq, [Subsystem.E, Subsystem.G2])
    assert eve.labels == (Subsystem.G2, Subsystem.E)
    for block, rho in zip(eve.blocks, cq.blocks, strict=True):
        expected = np.einsum("abcdbf->acdf", rho.reshape(2, 2, 2, 2, 2, 2)).reshape(4, 4)
        np.testing.assert_allclose(block, expected, atol=1e-12)


def test_relabeling_letters_leaves_informations_unchanged(channel):
    ens = beta_ensemble(0.6)
    ens = Ensemble(p_x=[0.3, 0.7], phi=ens.phi, d_g1=2, d_g2=2, encoders=ens.encoders)
    original = entropic_quantities(build_omega(channel, ens))
    swapped = entropic_quantities(build_omega(channel, ens.relabeled([1, 0])))
    for name in ("i_xb", "i_xe", "i_xeg2", "i_g2b_x", "i_g2e_x"):
        assert getattr(swapped, name) == pytest.approx(getattr(original, name), abs=1e-10)
