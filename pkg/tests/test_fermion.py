import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmt_entanglement import (ContractViolation, FermiSea, RngStream, binary_entropy, eigh,
                              entanglement_entropy, expected_lower_bound, fermi_projection, h0,
                              kac_fermi_projection, offdiag_lower_bound, rank_one_entropy,
                              restricted_projection, sample_gue, sample_haar_unitary)
from rmt_entanglement.fermion import RestrictedProjection, projection_from_columns


def haar_projection(seed, N, K, index=0):
    U = sample_haar_unitary(RngStream(seed, index), N)
    return U, projection_from_columns(U, K)


# h(1/4) = (2 - (3/4) log2 3), evaluated to 30 digits with mpmath
H_QUARTER = 0.8112781244591328
H_03 = 0.8812908992306926


def test_binary_entropy_values():
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert binary_entropy(0.25) == pytest.approx(H_QUARTER, abs=1e-12)
    assert binary_entropy(0.5, base="e") == pytest.approx(np.log(2), abs=1e-15)


def test_binary_entropy_clamps_and_rejects():
    assert binary_entropy(-5e-10) == 0.0
    assert binary_entropy(1 + 5e-10) == 0.0
    with pytest.raises(ValueError):
        binary_entropy(-1e-6)
    with pytest.raises(ValueError):
        binary_entropy(0.5, base=10)


def test_binary_entropy_dominates_quadratic():
    x = np.linspace(0, 1, 100_001)
    assert np.all(binary_entropy(x) >= 4 * x * (1 - x) - 1e-15)


def test_h0_values():
    assert h0(0.25) == pytest.approx(1.0, abs=1e-15)
    assert h0(0.0) == 0.0
    for x in (0.1, 0.3, 0.7):
        assert abs(h0(x * (1 - x)) - binary_entropy(x)) <= 1e-12
    with pytest.raises(ValueError):
        h0(0.3)


def test_h0_concave():
    y = np.linspace(0, 0.25, 2001)
    v = h0(y)
    assert np.all(v[:-2] + v[2:] - 2 * v[1:-1] <= 1e-12)


def test_fermi_projection_full_and_empty():
    dec = eigh(sample_gue(RngStream(1), 6))
    np.testing.assert_allclose(fermi_projection(dec, FermiSea(K=6)), np.eye(6), atol=1e-12)
    np.testing.assert_array_equal(fermi_projection(dec, FermiSea(K=0)), np.zeros((6, 6)))


def test_fermi_projection_k3():
    dec = eigh(sample_gue(RngStream(2), 10))
    P = fermi_projection(dec, FermiSea(K=3))
    assert abs(np.trace(P).real - 3) < 1e-9
    assert np.max(np.abs(P @ P - P)) <= 1e-9


def test_fermi_energy_form():
    dec = eigh(np.diag([-1.0, 0.0, 2.0]))
    P = fermi_projection(dec, FermiSea(fermi_energy=0.5))
    assert np.trace(P).real == pytest.approx(2)
    with pytest.raises(ContractViolation):
        fermi_projection(dec, FermiSea(fermi_energy=0.0))
    with pytest.raises(ValueError):
        FermiSea(K=1, fermi_energy=0.0)
    with pytest.raises(ValueError):
        fermi_projection(dec, FermiSea(K=4))


def test_restricted_projection_full_block():
    _, P = haar_projection(3, 9, 4)
    np.testing.assert_array_equal(restricted_projection(P, 9).matrix, P)
    with pytest.raises(ValueError):
        restricted_projection(P, 0)
    with pytest.raises(ValueError):
        restricted_projection(P, 10)


@pytest.mark.parametrize("N,L", [(4, 2), (10, 3), (7, 7), (50, 1)])
def test_kac_block_spectrum(N, L):
    p = entanglement_entropy(restricted_projection(kac_fermi_projection(N), L)).block_spectrum
    expected = np.sort(np.r_[np.ones(L - 1), 1 - L / N])
    np.testing.assert_allclose(p, expected, atol=1e-12)


def test_haar_block_matches_summation():
    U, P = haar_projection(4, 30, 12)
    Pb = restricted_projection(P, 9).matrix
    for l1 in range(9):
        for l2 in range(9):
            direct = sum(U[l1, k] * np.conj(U[l2, k]) for k in range(12))
            assert abs(Pb[l1, l2] - direct) <= 1e-12


def test_entropy_single_half_mode():
    rep = entanglement_entropy(RestrictedProjection(matrix=np.array([[0.5]])))
    assert (rep.S, rep.lower, rep.upper) == pytest.approx((1.0, 1.0, 1.0), abs=1e-15)


def test_entropy_pure_block():
    rep = entanglement_entropy(RestrictedProjection(matrix=np.diag([1.0, 0.0, 1.0])))
    assert rep.S == 0.0 and rep.lower == 0.0 and rep.upper == 0.0


def test_entropy_kac_closed_form():
    rep = entanglement_entropy(restricted_projection(kac_fermi_projection(100), 30))
    assert rep.S == pytest.approx(H_03, abs=1e-10)


def test_entropy_rejects_out_of_range_spectrum():
    with pytest.raises(ContractViolation):
        entanglement_entropy(RestrictedProjection(matrix=np.diag([1.1, 0.2])))


@settings(max_examples=40, deadline=None)
@given(N=st.integers(2, 60), data=st.data())
def test_sandwich_and_trace_range(N, data):
    K = data.draw(st.integers(0, N))
    L = data.draw(st.integers(1, N))
    _, P = haar_projection(data.draw(st.integers(0, 2**32)), N, K)
    rep = entanglement_entropy(restricted_projection(P, L))
    rep.check_sandwich(1e-9)
    assert 0 <= rep.S <= L + 1e-12
    tr = rep.block_spectrum.sum()
    assert max(0, K + L - N) - 1e-8 <= tr <= min(K, L) + 1e-8


def test_offdiag_lower_bound_examples():
    assert offdiag_lower_bound(np.eye(5), 2) == 0.0
    for N, L in ((10, 3), (7, 5)):
        assert offdiag_lower_bound(kac_fermi_projection(N), L) == pytest.approx(
            4 * L * (N - L) / N ** 2, abs=1e-12)
    with pytest.raises(ValueError):
        offdiag_lower_bound(np.diag([0.5, 1.0]), 1)


def test_offdiag_matches_spectral_lower_bound():
    _, P = haar_projection(5, 40, 17)
    rep = entanglement_entropy(restricted_projection(P, 11))
    assert abs(offdiag_lower_bound(P, 11) - rep.lower) <= 1e-8


def test_expected_lower_bound_arithmetic():
    assert expected_lower_bound(10, 0, 4) == 0
    assert expected_lower_bound(2, 1, 1) == pytest.approx(2 / 3, abs=1e-15)
    with pytest.raises(ValueError):
        expected_lower_bound(1, 1, 1)


def test_expected_lower_bound_monte_carlo_u2():
    vals = np.array([entanglement_entropy(restricted_projection(haar_projection(6, 2, 1, i)[1], 1)).lower
                     for i in range(20_000)])
    se = vals.std(ddof=1) / np.sqrt(vals.size)
    assert abs(vals.mean() - 2 / 3) <= 3 * se


def test_rank_one_examples():
    # u = 1/2 gives q = 1/4 and one full bit
    U = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert rank_one_entropy(U, 1) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        rank_one_entropy(np.eye(1), 1)


def test_rank_one_identity_per_realization():
    for i in range(10):
        U, P = haar_projection(8, 60, 25, i)
        direct = entanglement_entropy(restricted_projection(P, 59)).S
        assert abs(direct - rank_one_entropy(U, 25)) <= 1e-9


def test_particle_hole():
    N, K, L = 50, 20, 13
    U, P = haar_projection(9, N, K)
    Q = U[:, K:] @ U[:, K:].conj().T
    Pb, Qb = P[:L, :L], Q[:L, :L]
    np.testing.assert_allclose(Pb, np.eye(L) - Qb, atol=1e-12, rtol=0)
    s1 = entanglement_entropy(restricted_projection(P, L)).S
    s2 = entanglement_entropy(restricted_projection(0.5 * (Q + Q.conj().T), L)).S
    assert abs(s1 - s2) <= 1e-9


def test_gram_duality():
    N, K, L = 50, 12, 30
    U, P = haar_projection(10, N, K)
    B = U[:L, :K]
    s_l = entanglement_entropy(RestrictedProjection(matrix=B @ B.conj().T)).S
    s_k = entanglement_entropy(RestrictedProjection(matrix=B.conj().T @ B)).S
    assert abs(s_l - s_k) <= 1e-9


@pytest.mark.parametrize("base", [2, "e"])
def test_sandwich_in_both_bases(base):
    for i in range(10):
        _, P = haar_projection(12, 30, 11, i)
        entanglement_entropy(restricted_projection(P, 14), base).check_sandwich(1e-9)


def test_natural_log_report_is_rescaled_bits():
    _, P = haar_projection(13, 30, 11)
    Pb = restricted_projection(P, 14)
    bits, nats = entanglement_entropy(Pb, 2), entanglement_entropy(Pb, "e")
    assert nats.S == pytest.approx(bits.S * np.log(2), rel=1e-12)
    assert nats.lower == pytest.approx(bits.lower * np.log(2), rel=1e-12)
    assert nats.upper == pytest.approx(bits.upper * np.log(2), rel=1e-12)
