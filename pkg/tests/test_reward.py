import math

import numpy as np
import pytest

from qdpa.reward import (RewardKind, RewardProperty, RewardSpec,
                         check_property_signs, comparison_reward,
                         polynomial_reward, reward_surface, reward_value)

G0 = 2.0 ** 4 - 1.0    # rate requirement 4 b/s/Hz
GK = 2.0 ** 0.5 - 1.0  # rate requirement 0.5 b/s/Hz


def test_polynomial_examples():
    assert polynomial_reward(4.0, 0.5, G0, GK, m=2) == pytest.approx(0.0, abs=1e-12)
    assert polynomial_reward(5.0, 1.5, G0, GK, m=1) == pytest.approx(2.0)
    assert polynomial_reward(3.0, 1.5, G0, GK, m=2) == pytest.approx(0.0, abs=1e-12)


def test_polynomial_antisymmetry():
    # odd exponent: flipping a progress term flips its contribution
    rng = np.random.default_rng(0)
    for _ in range(100):
        d = rng.uniform(0.1, 3.0)
        up = polynomial_reward(4.0 + d, 0.5, G0, GK, m=2)
        down = polynomial_reward(4.0 - d, 0.5, G0, GK, m=2)
        assert up == pytest.approx(-down, rel=1e-12)


def test_bias_shift_exact():
    rng = np.random.default_rng(1)
    for kind in RewardKind:
        for _ in range(50):
            r0, rk, c = rng.uniform(0, 8), rng.uniform(0, 4), rng.uniform(-5, 5)
            base = reward_value(RewardSpec(kind=kind), r0, rk, G0, GK, 20.0)
            shifted = reward_value(RewardSpec(kind=kind, bias_c=c), r0, rk, G0, GK, 20.0)
            assert shifted == base + c


def test_quadratic_peak_at_requirements():
    assert comparison_reward(RewardKind.QUADRATIC, 4.0, 0.5, G0, GK) == pytest.approx(0.0, abs=1e-12)
    assert comparison_reward(RewardKind.QUADRATIC, 5.0, 0.5, G0, GK) == pytest.approx(-1.0)
    grid = np.linspace(0.0, 8.0, 161)
    vals = [comparison_reward(RewardKind.QUADRATIC, r0, rk, G0, GK)
            for r0 in grid for rk in np.linspace(0, 4, 81)]
    assert max(vals) <= 0.0 + 1e-12


def test_exponential_peaks_at_mue_requirement():
    rk = 1.0
    grid = np.linspace(0.0, 8.0, 1601)
    vals = [comparison_reward(RewardKind.EXPONENTIAL, r0, rk, G0, GK) for r0 in grid]
    assert grid[int(np.argmax(vals))] == pytest.approx(4.0, abs=0.01)


def test_comparison_reward_rejects_polynomial():
    with pytest.raises(ValueError):
        comparison_reward(RewardKind.POLYNOMIAL, 4.0, 0.5, G0, GK)


def _fn(kind, **kw):
    spec = RewardSpec(kind=kind, **kw)
    return lambda r0, rk: reward_value(spec, r0, rk, G0, GK, fbs_mue_dist_m=15.0)


def test_sign_properties():
    rng = np.random.default_rng(2)
    checked = 0
    while checked < 200:
        pt = (rng.uniform(0, 8), rng.uniform(0, 4))
        res = check_property_signs(_fn(RewardKind.POLYNOMIAL), pt,
                                   RewardProperty.MONOTONE_BOTH, G0, GK)
        if not res.conclusive:
            continue
        checked += 1
        assert res.passed
        assert check_property_signs(_fn(RewardKind.QUADRATIC), pt,
                                    RewardProperty.TRACK_TARGET_BOTH, G0, GK).passed
        for kind in (RewardKind.EXPONENTIAL, RewardKind.PROXIMITY):
            assert check_property_signs(_fn(kind), pt,
                                        RewardProperty.TRACK_TARGET_MUE_ONLY,
                                        G0, GK).passed


def test_sign_check_can_fail():
    # the quadratic is not monotone in the rates
    res = check_property_signs(_fn(RewardKind.QUADRATIC), (6.0, 2.0),
                               RewardProperty.MONOTONE_BOTH, G0, GK)
    assert res.conclusive and res.passed is False


def test_sign_check_inconclusive_near_threshold():
    res = check_property_signs(_fn(RewardKind.POLYNOMIAL), (4.0005, 2.0),
                               RewardProperty.MONOTONE_BOTH, G0, GK)
    assert not res.conclusive and res.passed is None


def test_polynomial_monotone_everywhere_for_m2():
    # derivative is 3 d^2 >= 0; strictly positive away from the requirement
    rng = np.random.default_rng(3)
    for _ in range(200):
        r0, rk = rng.uniform(0, 8), rng.uniform(0, 4)
        if abs(r0 - 4.0) < 1e-2 or abs(rk - 0.5) < 1e-2:
            continue
        f = _fn(RewardKind.POLYNOMIAL)
        h = 1e-5
        assert (f(r0 + h, rk) - f(r0 - h, rk)) > 0.0
        assert (f(r0, rk + h) - f(r0, rk - h)) > 0.0


def test_proximity_weight_grows_when_closer():
    spec = RewardSpec(kind=RewardKind.PROXIMITY)
    near = reward_value(spec, 6.0, 1.0, G0, GK, fbs_mue_dist_m=5.0)
    far = reward_value(spec, 6.0, 1.0, G0, GK, fbs_mue_dist_m=45.0)
    assert near < far  # same MUE overshoot costs more when close


def test_reward_surface_shape_and_values():
    spec = RewardSpec(kind=RewardKind.POLYNOMIAL, m=1)
    r0g, rkg = [0.0, 4.0, 8.0], [0.0, 0.5]
    surf = reward_surface(spec, G0, GK, r0g, rkg)
    assert surf.shape == (3, 2)
    assert surf[1, 1] == pytest.approx(0.0, abs=1e-12)
    assert surf[2, 1] == pytest.approx(4.0)


def test_reward_spec_validation():
    with pytest.raises(ValueError):
        RewardSpec(m=0)
    with pytest.raises(ValueError):
        RewardSpec(bias_c=math.inf)
