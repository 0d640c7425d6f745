import numpy as np
import pytest

from sqdkit.coupon import (
    AmplitudeDistribution,
    DiscoveryCurve,
    discovery_curve,
    expected_shots_exact,
    expected_shots_integral,
    expected_shots_lower_bound,
    expected_shots_uniform,
    simulate_discovery,
    skew_lower_bound,
)


def rand_dist(m, rng, skew=1.0):
    p = rng.random(m) ** skew + 1e-6
    return AmplitudeDistribution(p / p.sum())


def test_distribution_validation():
    with pytest.raises(ValueError):
        AmplitudeDistribution([0.5, 0.0, 0.5])
    with pytest.raises(ValueError):
        AmplitudeDistribution([0.5, 0.4])
    AmplitudeDistribution([0.25] * 4)


def test_exact_single_category():
    assert expected_shots_exact(AmplitudeDistribution([1.0])) == 1.0


def test_exact_uniform_three():
    val = expected_shots_exact(AmplitudeDistribution([1 / 3] * 3))
    assert val == pytest.approx(5.5, abs=1e-12)


def test_exact_example_values():
    # inclusion-exclusion by hand for p = (0.5, 0.3, 0.2):
    # 1 - 1/.5 - 1/.7 - 1/.8 + 1/.2 + 1/.3 + 1/.5 = 6.654761904...
    val = expected_shots_exact(AmplitudeDistribution([0.5, 0.3, 0.2]))
    assert val == pytest.approx(6.654761904761905, rel=1e-12)


def test_exact_m_limit():
    p = AmplitudeDistribution(np.full(25, 1 / 25))
    with pytest.raises(ValueError):
        expected_shots_exact(p)


def test_exact_at_least_m():
    rng = np.random.default_rng(0)
    for m in (2, 5, 9):
        p = rand_dist(m, rng, skew=3.0)
        assert expected_shots_exact(p) >= m


def test_integral_single():
    assert expected_shots_integral(AmplitudeDistribution([1.0])) == \
        pytest.approx(1.0, rel=1e-8)


def test_integral_uniform_50():
    p = AmplitudeDistribution(np.full(50, 0.02))
    target = expected_shots_uniform(50)
    assert target == pytest.approx(224.9602669, abs=1e-4)
    assert expected_shots_integral(p) == pytest.approx(target, rel=1e-7)


@pytest.mark.parametrize("m", [2, 4, 8, 12, 16, 20])
def test_integral_matches_exact(m):
    rng = np.random.default_rng(m)
    for _ in range(3):
        p = rand_dist(m, rng, skew=2.0)
        a = expected_shots_exact(p)
        b = expected_shots_integral(p)
        assert b == pytest.approx(a, rel=1e-6)


def test_uniform_closed_form():
    assert expected_shots_uniform(1) == 1.0
    assert expected_shots_uniform(2) == pytest.approx(3.0, abs=1e-12)
    assert expected_shots_uniform(3) == pytest.approx(5.5, abs=1e-12)


def test_lower_bound_uniform_fixed_point():
    p = AmplitudeDistribution(np.full(7, 1 / 7))
    assert expected_shots_lower_bound(p) == \
        pytest.approx(expected_shots_uniform(7), rel=1e-10)


def test_lower_bound_below_exact():
    rng = np.random.default_rng(5)
    for m in (3, 6, 10, 15):
        for _ in range(5):
            p = rand_dist(m, rng, skew=4.0)
            assert expected_shots_lower_bound(p) <= \
                expected_shots_exact(p) + 1e-6


def test_lower_bound_below_integral_large_m():
    rng = np.random.default_rng(7)
    for m in (30, 80, 150, 200):
        p = rand_dist(m, rng, skew=3.0)
        assert expected_shots_lower_bound(p) <= \
            expected_shots_integral(p) * (1 + 1e-8)


def test_skew_bound_equals_integral_of_surrogate():
    for m, p_max in ((10, 0.9), (50, 0.972), (120, 0.5)):
        q = AmplitudeDistribution.skewed(p_max, m)
        assert skew_lower_bound(p_max, m) == \
            pytest.approx(expected_shots_integral(q), rel=1e-6)


def test_skew_bound_h2o_scale():
    """Documented values around the water working point (p_max = 0.972).

    The correctly evaluated bound reaches 7838.6 at m = 50 and crosses
    8000 between m = 50 and m = 51.
    """
    at_50 = skew_lower_bound(0.972, 50)
    at_51 = skew_lower_bound(0.972, 51)
    assert at_50 == pytest.approx(7838.609, abs=0.01)
    assert at_51 == pytest.approx(8034.295, abs=0.01)
    assert at_50 < 8000 < at_51


def test_skew_bound_monotone_in_m():
    vals = [skew_lower_bound(0.972, m) for m in range(10, 80, 5)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_simulate_single():
    stats = simulate_discovery(AmplitudeDistribution([1.0]), 100, seed=0)
    assert stats.mean == 1.0 and stats.stderr == 0.0


def test_simulate_uniform_three():
    stats = simulate_discovery(AmplitudeDistribution([1 / 3] * 3), 200_000,
                               seed=1)
    assert abs(stats.mean - 5.5) < 3 * stats.stderr
    assert stats.quantiles[0.5] >= 3


def test_simulate_skewed_matches_exact():
    p = AmplitudeDistribution([0.9, 0.05, 0.05])
    exact = expected_shots_exact(p)
    stats = simulate_discovery(p, 200_000, seed=2)
    assert abs(stats.mean - exact) < 3 * stats.stderr


def test_simulate_deterministic():
    p = AmplitudeDistribution([0.6, 0.3, 0.1])
    a = simulate_discovery(p, 5000, seed=3)
    b = simulate_discovery(p, 5000, seed=3)
    assert a.mean == b.mean and a.stderr == b.stderr


def test_curve_deterministic_distribution():
    curve = discovery_curve(AmplitudeDistribution([1.0]), [1, 10, 100],
                            n_trials=5, seed=0)
    assert np.allclose(curve.mean_unique, 1.0)


def test_curve_uniform_saturates():
    p = AmplitudeDistribution(np.full(10, 0.1))
    curve = discovery_curve(p, [10_000], n_trials=5, seed=1)
    assert curve.mean_unique[-1] == pytest.approx(10.0, abs=1e-12)


def test_curve_monotone_bounded(h2o_fci):
    curve = discovery_curve(h2o_fci.state, [100, 1000, 10_000], n_trials=8,
                            seed=2)
    assert np.all(np.diff(curve.mean_unique) >= 0)
    assert curve.mean_unique[-1] <= 225


def test_curve_csv():
    curve = DiscoveryCurve(shots=np.array([10, 100]),
                           mean_unique=np.array([1.5, 2.5]),
                           stderr=np.array([0.1, 0.2]))
    text = curve.to_csv()
    assert text.splitlines()[0] == "shots,mean_unique,stderr"
    assert len(text.splitlines()) == 3


def test_curve_from_state_matches_distribution(h2o_fci):
    p = AmplitudeDistribution.from_state(h2o_fci.state)
    a = discovery_curve(h2o_fci.state, [1000], n_trials=4, seed=5)
    b = discovery_curve(p, [1000], n_trials=4, seed=5)
    assert np.allclose(a.mean_unique, b.mean_unique)
