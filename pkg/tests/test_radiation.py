import math

import numpy as np
import pytest

from rmt_entanglement import (ContractViolation, EntryDistribution, RngStream, page_experiment,
                              random_pure_state, reduced_density_matrix, von_neumann_entropy)
from rmt_entanglement.radiation import BipartiteState, state_entropy
from rmt_entanglement.spectral import gram


def test_single_amplitude_state():
    psi = random_pure_state(RngStream(1), 1, 1)
    assert abs(abs(psi.amplitudes[0, 0]) - 1) < 1e-15


@pytest.mark.parametrize("dist", list(EntryDistribution))
@pytest.mark.parametrize("shape", [(2, 3), (7, 4), (16, 16)])
def test_states_are_normalized(dist, shape):
    for i in range(5):
        A = random_pure_state(RngStream(2, i), *shape, dist).amplitudes
        assert abs(np.sum(np.abs(A) ** 2) - 1) <= 1e-12


def test_uniform_sphere_symmetry():
    x = np.array([abs(random_pure_state(RngStream(3, i), 2, 2).amplitudes[0, 0]) ** 2
                  for i in range(100_000)])
    assert abs(x.mean() - 0.25) <= 5 * x.std() / np.sqrt(x.size)


def test_zero_vector_rejected(monkeypatch):
    import rmt_entanglement.radiation as rad
    monkeypatch.setattr(rad, "draw_entries", lambda gen, shape, dist: np.zeros(shape, complex))
    with pytest.raises(ContractViolation):
        rad.random_pure_state(RngStream(0), 2, 2)


def test_product_state_is_pure():
    a, b = np.array([0.6, 0.8j]), np.array([1, 1, 1]) / np.sqrt(3)
    rho = reduced_density_matrix(BipartiteState(np.outer(a, b)))
    w = np.linalg.eigvalsh(rho)
    np.testing.assert_allclose(w, [0, 1], atol=1e-12)
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)


def test_maximally_entangled():
    L = 5
    rho = reduced_density_matrix(BipartiteState(np.eye(L) / np.sqrt(L)))
    np.testing.assert_allclose(rho, np.eye(L) / L, atol=1e-15)
    assert von_neumann_entropy(rho) == pytest.approx(math.log(L), abs=1e-12)
    assert von_neumann_entropy(rho, base=2) == pytest.approx(math.log2(L), abs=1e-12)


def test_random_rho_is_density_matrix():
    rho = reduced_density_matrix(random_pure_state(RngStream(4), 6, 9))
    assert abs(np.trace(rho).real - 1) <= 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-10


def test_negative_eigenvalue_rejected():
    with pytest.raises(ContractViolation):
        von_neumann_entropy(np.diag([1.1, -0.1]))


@pytest.mark.parametrize("L,K", [(3, 8), (9, 4), (6, 6)])
def test_rank_bound_and_subsystem_symmetry(L, K):
    for i in range(20):
        psi = random_pure_state(RngStream(5, i), L, K, EntryDistribution.DISK)
        s_l = von_neumann_entropy(gram(psi.amplitudes))
        s_k = von_neumann_entropy(gram(psi.amplitudes.T))
        assert abs(s_l - s_k) <= 1e-9
        assert 0 <= s_l <= math.log(min(L, K)) + 1e-9
        assert abs(state_entropy(psi) - s_l) <= 1e-9


def test_page_experiment_trivial_subsystem():
    res = page_experiment(1, 1, 7, n_samples=50)
    assert np.all(np.abs(res.samples) <= 1e-12)


def test_page_experiment_deterministic():
    a = page_experiment(42, 3, 4, n_samples=30)
    b = page_experiment(42, 3, 4, n_samples=30)
    np.testing.assert_array_equal(a.samples, b.samples)
    c = page_experiment(42, 12, 10, n_samples=5)
    d = page_experiment(42, 12, 10, n_samples=5)
    np.testing.assert_array_equal(c.samples, d.samples)


def test_page_experiment_batched_matches_direct():
    res = page_experiment(7, 3, 5, n_samples=20)
    direct = [state_entropy(random_pure_state(RngStream(7, i), 3, 5)) for i in range(20)]
    np.testing.assert_allclose(res.samples, direct, atol=1e-12)


def test_page_mean_2x2():
    res = page_experiment(2024, 2, 2, n_samples=100_000)
    assert abs(res.mean - 1 / 3) <= 3 * res.stderr


def test_fluctuations_shrink():
    small = page_experiment(5, 64, 128, n_samples=200).samples.std(ddof=1)
    large = page_experiment(6, 256, 512, n_samples=200).samples.std(ddof=1)
    assert small > large


def test_marchenko_pastur_histogram():
    from rmt_entanglement.harness import mp_spectrum
    from rmt_entanglement.config import ExperimentConfig
    from rmt_entanglement.theory import ks_distance, marchenko_pastur_law
    cfg = ExperimentConfig("mp-hist", L=500, K=1000, master_seed=31)
    w = mp_spectrum(cfg)
    assert ks_distance(w, marchenko_pastur_law(0.5).cdf) <= 0.05
