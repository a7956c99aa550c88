import numpy as np
import pytest
from scipy.stats import norm

from rkrd.errors import CalibrationFailure, InvalidInput
from rkrd.mechanisms import (
    D,
    D_PRIME,
    GaussianMechanism,
    balle_condition,
    calibrate_sigma,
    classic_sigma,
    gaussian_cdf,
    gaussian_renyi,
)

CONFIGS = [(1.0, 0.005), (2.0, 0.2), (3.0, 0.03)]


def test_cdf_matches_reference_in_tails():
    x = np.array([-30.0, -8.0, -1.0, 0.0, 2.5, 8.0])
    np.testing.assert_allclose(gaussian_cdf(x), norm.cdf(x), rtol=1e-12, atol=1e-300)


def test_condition_vanishes_for_large_epsilon():
    assert balle_condition(5.0, 10.0, 50.0) < 1e-10


def test_condition_holds_at_reference_sigma():
    v = balle_condition(21.0444, 10.0, 1.0)
    assert 0.0045 < v <= 0.005


def test_condition_decreasing_in_sigma():
    for s in (1.0, 5.0, 21.0):
        assert balle_condition(1.1 * s, 10.0, 1.0) < balle_condition(s, 10.0, 1.0)


@pytest.mark.parametrize("eps,delta", CONFIGS)
def test_calibration_is_tight(eps, delta):
    s = calibrate_sigma(eps, delta, 10.0)
    assert balle_condition(s, 10.0, eps) <= delta
    assert balle_condition(s * (1 - 1e-8), 10.0, eps) > delta
    assert balle_condition(s, 10.0, eps) == pytest.approx(delta, abs=1e-8)


@pytest.mark.parametrize("eps,delta", CONFIGS)
def test_classic_is_conservative(eps, delta):
    assert classic_sigma(eps, delta, 10.0) >= calibrate_sigma(eps, delta, 10.0)


def test_calibration_monotone():
    assert calibrate_sigma(2.0, 0.01, 10) < calibrate_sigma(1.0, 0.01, 10)
    assert calibrate_sigma(1.0, 0.05, 10) < calibrate_sigma(1.0, 0.01, 10)


def test_calibration_scales_with_sensitivity():
    assert calibrate_sigma(1.0, 0.01, 20.0) == pytest.approx(2 * calibrate_sigma(1.0, 0.01, 10.0), rel=1e-9)


def test_calibration_preconditions():
    with pytest.raises(InvalidInput):
        calibrate_sigma(1.0, 1.5, 10.0)
    with pytest.raises(InvalidInput):
        calibrate_sigma(0.0, 0.1, 10.0)


def test_calibration_failure_outside_bracket():
    with pytest.raises(CalibrationFailure):
        calibrate_sigma(1e-9, 1e-300, 10.0)


@pytest.mark.parametrize(
    "alpha,sigma,want",
    [(6, 6.0669, 8.1506), (12, 6.0669, 16.3011), (6, 7.1850, 5.8112), (12, 7.1850, 11.6224)],
)
def test_reference_renyi_values(alpha, sigma, want):
    assert gaussian_renyi(alpha, 10.0, sigma) == pytest.approx(want, abs=1e-4)


def test_renyi_zero_sensitivity():
    assert gaussian_renyi(2, 0.0, 1.0) == 0.0


def test_tiny_sigma_concentrates():
    mech = GaussianMechanism.with_sensitivity(5, 3.0, 1e-12, seed=1)
    s = mech.sample(D_PRIME, 10)
    assert np.max(np.abs(s.rows - mech.center_d_prime)) <= 1e-9


def test_sample_mean_clt():
    mech = GaussianMechanism.with_sensitivity(3, 10.0, 2.0, seed=5)
    n = 100_000
    s = mech.sample(D, n)
    assert np.all(np.abs(s.rows.mean(axis=0) - mech.center_d) <= 4 * 2.0 / np.sqrt(n))


def test_sampling_deterministic():
    mech = GaussianMechanism.with_sensitivity(4, 1.0, 1.0, seed=9)
    assert np.array_equal(mech.sample(D, 7).rows, mech.sample(D, 7).rows)
    assert not np.array_equal(mech.sample(D, 7).rows, mech.sample(D_PRIME, 7).rows - mech.center_d_prime)
    other = GaussianMechanism.with_sensitivity(4, 1.0, 1.0, seed=10)
    assert not np.array_equal(mech.sample(D, 7).rows, other.sample(D, 7).rows)


def test_sensitivity_recorded():
    mech = GaussianMechanism.with_sensitivity(30, 10.0, 1.0)
    assert mech.sensitivity == 10.0
    assert mech.dim == 30


def test_mechanism_validation():
    with pytest.raises(InvalidInput):
        GaussianMechanism(0.0, [0.0], [1.0])
    with pytest.raises(InvalidInput):
        GaussianMechanism(1.0, [0.0], [1.0, 2.0])
    with pytest.raises(InvalidInput):
        GaussianMechanism(1.0, [0.0], [1.0]).sample("E", 3)
