import numpy as np
import pytest
from scipy.stats import chisquare

from sqdkit import (
    Determinant,
    NoiseModel,
    fci_ground_state,
    prepare_basis_state,
    sample_bitstrings,
    spin_pools,
    symmetry_filter,
)
from sqdkit.sampling import EmpiricalDistribution, valid_determinants
from sqdkit.statevector import StateVector


def test_basis_state_sampling_deterministic():
    s = prepare_basis_state(0b1010, 4)
    d = sample_bitstrings(s, 50, seed=1)
    assert d.counts == {0b1010: 50}
    assert d.total == 50


def test_uniform_chi_square():
    amps = np.full(4, 0.5, dtype=complex)
    d = sample_bitstrings(StateVector(2, amps), 100_000, seed=2)
    counts = [d.counts.get(i, 0) for i in range(4)]
    assert chisquare(counts).pvalue > 0.01


def test_h2o_hf_frequency(h2o_fci):
    d = sample_bitstrings(h2o_fci.state, 1_000_000, seed=3)
    hf = Determinant.hartree_fock(4, 4).to_qubit_index(6)
    freq = d.counts[hf] / d.total
    assert freq == pytest.approx(0.972, abs=2e-3)


def test_reproducible_and_prefix_stable(h2o_fci):
    a = sample_bitstrings(h2o_fci.state, 1000, seed=7)
    b = sample_bitstrings(h2o_fci.state, 1000, seed=7)
    assert a.counts == b.counts
    # discovery monotonicity: unique set under a shot prefix is a subset
    small = sample_bitstrings(h2o_fci.state, 100, seed=7)
    assert set(small.counts) <= set(a.counts)
    noise = NoiseModel(0.02, 0.02)
    a_noisy = sample_bitstrings(h2o_fci.state, 1000, noise=noise, seed=7)
    small_noisy = sample_bitstrings(h2o_fci.state, 100, noise=noise, seed=7)
    assert set(small_noisy.counts) <= set(a_noisy.counts)


def test_noise_flip_rate():
    s = prepare_basis_state(0, 8)
    d = sample_bitstrings(s, 20_000, noise=NoiseModel(0.25, 0.0), seed=4)
    ones = sum(bin(idx).count("1") * c for idx, c in d.counts.items())
    rate = ones / (20_000 * 8)
    assert rate == pytest.approx(0.25, abs=0.01)


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(-0.1, 0.0)
    with pytest.raises(ValueError):
        NoiseModel(0.0, 1.5)


def test_sector_purity_noise_free(h2o_fci):
    d = sample_bitstrings(h2o_fci.state, 50_000, seed=5)
    valid, n_invalid = symmetry_filter(d, 6, 4, 4)
    assert n_invalid == 0
    assert valid.total == 50_000


def test_symmetry_filter_drops_wrong_popcount():
    # 3 alpha bits when n_alpha = 4 on six orbitals
    idx = 0b000111 | (0b001111 << 6)
    d = EmpiricalDistribution({idx: 5}, 5, 12)
    valid, n_invalid = symmetry_filter(d, 6, 4, 4)
    assert n_invalid == 5
    assert valid.total == 0


def test_symmetry_filter_qubit_mismatch(h2o_fci):
    d = EmpiricalDistribution({0: 1}, 1, 4)
    with pytest.raises(ValueError):
        symmetry_filter(d, 6, 4, 4)


def test_noisy_filter_counts(h2o_fci):
    d = sample_bitstrings(h2o_fci.state, 1000, noise=NoiseModel(0.01, 0.01),
                          seed=6)
    valid, n_invalid = symmetry_filter(d, 6, 4, 4)
    invalid_unique = d.n_unique() - valid.n_unique()
    assert 10 <= valid.n_unique() <= 60  # "in the tens"
    assert invalid_unique > valid.n_unique()


def test_spin_pools_paper_example():
    # samples {|1001>, |1010>} over two orbitals -> U_a={10}, U_b={10,01}
    d1 = Determinant.from_string("1001")
    d2 = Determinant.from_string("1010")
    dist = EmpiricalDistribution(
        {d1.to_qubit_index(2): 3, d2.to_qubit_index(2): 2}, 5, 4)
    ua, ub = spin_pools(dist, 2, 1, 1)
    assert ua == (0b01,)
    assert set(ub) == {0b01, 0b10}


def test_spin_pools_empty():
    dist = EmpiricalDistribution({}, 0, 4)
    ua, ub = spin_pools(dist, 2, 1, 1)
    assert ua == () and ub == ()


def test_spin_pools_bounded(h2o_fci):
    from math import comb

    d = sample_bitstrings(h2o_fci.state, 200_000, seed=8)
    ua, ub = spin_pools(d, 6, 4, 4)
    assert len(ua) <= comb(6, 4)
    assert len(ub) <= comb(6, 4)


def test_valid_determinants_map(h2o_fci):
    d = sample_bitstrings(h2o_fci.state, 1000, seed=9)
    dets = valid_determinants(d, 6, 4, 4)
    assert sum(dets.values()) == 1000
    for det in dets:
        assert det.n_alpha() == 4 and det.n_beta() == 4


def test_distribution_json_round_trip(h2o_fci):
    d = sample_bitstrings(h2o_fci.state, 500, seed=10)
    again = EmpiricalDistribution.from_json_dict(d.to_json_dict())
    assert again.counts == d.counts
    assert again.total == d.total and again.n_qubits == d.n_qubits


def test_display_convention():
    d = EmpiricalDistribution({0b1001: 1}, 1, 4)
    assert d.display(0b1001) == "1001"
