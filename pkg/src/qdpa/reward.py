"""Reward functions for the power-control agents.

The headline reward is an odd-power polynomial in the two "rate progress"
terms (achieved rate minus required rate, for the MUE and for the agent's
own FUE), so raising either rate always raises the reward. Three comparison
rewards with different design philosophies are provided: a quadratic that
tracks both requirements, an exponential and a proximity-weighted variant
that track the MUE requirement only. Finite-difference sign checks verify
which behavior class a reward belongs to.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RewardKind",
    "RewardSpec",
    "RewardProperty",
    "SignCheck",
    "rate_target",
    "polynomial_reward",
    "comparison_reward",
    "reward_value",
    "check_property_signs",
    "reward_surface",
]


class RewardKind(enum.Enum):
    POLYNOMIAL = "polynomial"
    QUADRATIC = "quadratic"
    EXPONENTIAL = "exponential"
    PROXIMITY = "proximity"


@dataclass(frozen=True)
class RewardSpec:
    """Which reward to use and its shape parameters.

    ``m`` controls the polynomial exponent 2m-1. ``bias_c`` is an additive
    constant applied to every reward. ``exp_curvature`` scales the
    exponential penalty; ``proximity_ref_m`` is the distance at which the
    proximity weight equals one.
    """

    kind: RewardKind = RewardKind.POLYNOMIAL
    m: int = 2
    bias_c: float = 0.0
    exp_curvature: float = 1.0
    proximity_ref_m: float = 45.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if not math.isfinite(self.bias_c):
            raise ValueError("bias must be finite")


def rate_target(gamma_min: float) -> float:
    """Rate equivalent of a linear SINR threshold, log2(1+gamma)."""
    return math.log2(1.0 + gamma_min)


def polynomial_reward(r0: float, rk: float, gamma0_min: float, gammak_min: float,
                      m: int = 2, c: float = 0.0) -> float:
    """Odd-power progress reward: both rate surpluses raised to 2m-1, plus bias."""
    e = 2 * m - 1
    return ((r0 - rate_target(gamma0_min)) ** e
            + (rk - rate_target(gammak_min)) ** e + c)


def comparison_reward(kind: RewardKind, r0: float, rk: float,
                      gamma0_min: float, gammak_min: float, *,
                      c: float = 0.0, curvature: float = 1.0,
                      weight: float = 1.0) -> float:
    """One of the three comparison rewards.

    Quadratic peaks (at zero) exactly when both rates sit on their
    requirements. Exponential and proximity both reward the FUE rate
    unconditionally while pulling the MUE rate toward its requirement;
    ``weight`` scales the proximity pull (larger when the femtocell is
    closer to the MUE).
    """
    d0 = r0 - rate_target(gamma0_min)
    dk = rk - rate_target(gammak_min)
    if kind is RewardKind.QUADRATIC:
        return -d0 * d0 - dk * dk + c
    if kind is RewardKind.EXPONENTIAL:
        return rk - math.exp(curvature * d0 * d0) + 1.0 + c
    if kind is RewardKind.PROXIMITY:
        return rk - weight * d0 * d0 + c
    raise ValueError(f"not a comparison reward kind: {kind!r}")


def proximity_weight(spec: RewardSpec, fbs_mue_dist_m: float | None) -> float:
    if fbs_mue_dist_m is None:
        return 1.0
    return spec.proximity_ref_m / max(float(fbs_mue_dist_m), 1.0)


def reward_value(spec: RewardSpec, r0: float, rk: float,
                 gamma0_min: float, gammak_min: float,
                 fbs_mue_dist_m: float | None = None) -> float:
    """Evaluate the configured reward for one agent."""
    if spec.kind is RewardKind.POLYNOMIAL:
        return polynomial_reward(r0, rk, gamma0_min, gammak_min, spec.m, spec.bias_c)
    return comparison_reward(spec.kind, r0, rk, gamma0_min, gammak_min,
                             c=spec.bias_c, curvature=spec.exp_curvature,
                             weight=proximity_weight(spec, fbs_mue_dist_m))


class RewardProperty(enum.Enum):
    """Sign conditions on the reward partials at a rate point.

    MONOTONE_BOTH: reward never decreases when either rate increases.
    TRACK_TARGET_BOTH: each partial pushes its rate toward the requirement.
    TRACK_TARGET_MUE_ONLY: MUE partial pushes toward the requirement while
    the own-FUE partial stays non-negative.
    """

    MONOTONE_BOTH = "monotone_both"
    TRACK_TARGET_BOTH = "track_target_both"
    TRACK_TARGET_MUE_ONLY = "track_target_mue_only"


@dataclass(frozen=True)
class SignCheck:
    """Outcome of a finite-difference sign check at one point."""

    conclusive: bool
    passed: bool | None
    d_r0: float
    d_rk: float


# Central-difference step and the exclusion band around the thresholds
# inside which the sign of a partial is not trustworthy.
FD_STEP = 1e-5
THRESHOLD_BAND = 1e-3
SIGN_TOL = 1e-9


def check_property_signs(fn, point, which: RewardProperty,
                         gamma0_min: float, gammak_min: float) -> SignCheck:
    """Check the named sign property of ``fn(r0, rk)`` at ``point``.

    Points within THRESHOLD_BAND of either rate requirement produce an
    inconclusive result instead of a pass/fail verdict.
    """
    r0, rk = float(point[0]), float(point[1])
    t0, tk = rate_target(gamma0_min), rate_target(gammak_min)
    if abs(r0 - t0) <= THRESHOLD_BAND or abs(rk - tk) <= THRESHOLD_BAND:
        return SignCheck(conclusive=False, passed=None, d_r0=math.nan, d_rk=math.nan)

    h = FD_STEP
    d_r0 = (fn(r0 + h, rk) - fn(r0 - h, rk)) / (2.0 * h)
    d_rk = (fn(r0, rk + h) - fn(r0, rk - h)) / (2.0 * h)

    scale = max(1.0, abs(d_r0), abs(d_rk))
    tol = SIGN_TOL * scale
    toward_t0 = d_r0 * (r0 - t0) <= tol
    toward_tk = d_rk * (rk - tk) <= tol
    if which is RewardProperty.MONOTONE_BOTH:
        ok = d_r0 >= -tol and d_rk >= -tol
    elif which is RewardProperty.TRACK_TARGET_BOTH:
        ok = toward_t0 and toward_tk
    elif which is RewardProperty.TRACK_TARGET_MUE_ONLY:
        ok = toward_t0 and d_rk >= -tol
    else:
        raise ValueError(f"unknown property: {which!r}")
    return SignCheck(conclusive=True, passed=bool(ok), d_r0=d_r0, d_rk=d_rk)


def reward_surface(spec: RewardSpec, gamma0_min: float, gammak_min: float,
                   r0_grid, rk_grid, fbs_mue_dist_m: float | None = None) -> np.ndarray:
    """Reward evaluated on the outer product of two rate grids.

    Rows follow ``r0_grid``, columns ``rk_grid``; handy for dumping the
    reward landscape to CSV.
    """
    r0_grid = np.asarray(r0_grid, dtype=float)
    rk_grid = np.asarray(rk_grid, dtype=float)
    out = np.empty((r0_grid.size, rk_grid.size))
    for i, r0 in enumerate(r0_grid):
        for j, rk in enumerate(rk_grid):
            out[i, j] = reward_value(spec, r0, rk, gamma0_min, gammak_min,
                                     fbs_mue_dist_m)
    return out
