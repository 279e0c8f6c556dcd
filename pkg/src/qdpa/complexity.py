"""Sample-complexity formulas for the tabular learner.

High-probability bound on the distance to the optimal action values after
T visits per state-action pair, its inversion into a minimum visit count
for a target accuracy, and the rule turning that count into a training
length in frames. Also a tight bound on the reward magnitude over the
reachable rate box, needed as an input to the other formulas.
"""

import math
from dataclasses import dataclass

from .channel import rate
from .reward import RewardKind, RewardSpec, reward_value
from .topology import Scenario

__all__ = [
    "ComplexityInputs",
    "epsilon_bound",
    "min_iterations",
    "training_length",
    "v_max",
    "reward_bound",
    "rate_box",
]


@dataclass(frozen=True)
class ComplexityInputs:
    """Bundle of the quantities the bound formulas consume."""

    r_max: float
    beta: float
    epsilon: float
    delta: float
    x_card: int
    a_card: int
    t: int = 1

    def __post_init__(self):
        if self.r_max <= 0 or self.epsilon <= 0 or not 0 < self.delta <= 1:
            raise ValueError("r_max, epsilon must be positive and delta in (0, 1]")
        if not 0 < self.beta < 1:
            raise ValueError("discount must be in (0, 1)")
        if self.x_card < 1 or self.a_card < 1 or self.t < 1:
            raise ValueError("cardinalities and iteration count must be >= 1")


def v_max(r_max: float, beta: float) -> float:
    """Largest attainable value magnitude, r_max / (1 - beta)."""
    if not 0 < beta < 1:
        raise ValueError("discount must be in (0, 1)")
    return r_max / (1.0 - beta)


def epsilon_bound(r_max: float, beta: float, t: int, state_action_pairs: int,
                  delta: float) -> float:
    """Error bound holding with probability at least 1 - delta after ``t``
    visits of each cell:

        (2 r_max / (1-beta)) * [ beta / (t (1-beta))
                                 + sqrt((2/t) ln(2 |X||A| / delta)) ]
    """
    if not 0 < beta < 1:
        raise ValueError("discount must be in (0, 1)")
    if t < 1 or state_action_pairs < 1 or not 0 < delta <= 1:
        raise ValueError("need t >= 1, a positive pair count and delta in (0, 1]")
    bias = beta / (t * (1.0 - beta))
    noise = math.sqrt((2.0 / t) * math.log(2.0 * state_action_pairs / delta))
    return (2.0 * r_max / (1.0 - beta)) * (bias + noise)


def min_iterations(r_max: float, beta: float, epsilon: float, delta: float,
                   x_card: int, a_card: int) -> int:
    """Visits per cell sufficient for epsilon-optimality with probability
    1 - delta (inverts the dominant noise term of ``epsilon_bound``):

        ceil( 8 r_max^2 / (eps^2 (1-beta)^2) * ln(2 |X||A| / delta) )
    """
    if not 0 < beta < 1:
        raise ValueError("discount must be in (0, 1)")
    if epsilon <= 0 or not 0 < delta <= 1 or x_card < 1 or a_card < 1:
        raise ValueError("invalid bound inputs")
    lead = 8.0 * r_max * r_max / (epsilon * epsilon * (1.0 - beta) ** 2)
    return math.ceil(lead * math.log(2.0 * x_card * a_card / delta))


def training_length(t: int, x_card: int, a_card: int) -> int:
    """Frames needed for ``t`` visits of every cell: T * |X| * |A|."""
    if t < 1 or x_card < 1 or a_card < 1:
        raise ValueError("all inputs must be >= 1")
    return t * x_card * a_card


def rate_box(scenario: Scenario) -> tuple[float, float]:
    """Largest reachable (MUE rate, FUE rate) pair: each receiver at its own
    maximum power with zero interference."""
    cfg = scenario.config
    g = scenario.channel.gains
    r0_hat = rate(cfg.mbs_power_w * g[0, 0] / cfg.noise_w)
    p_max = 10.0 ** ((cfg.fbs_pmax_dbm - 30.0) / 10.0)
    rk_hat = max(rate(p_max * g[k, k] / cfg.noise_w)
                 for k in range(1, scenario.k_active + 1))
    return float(r0_hat), float(rk_hat)


def _candidate_points(hi: float, target: float):
    pts = [0.0, hi]
    if 0.0 < target < hi:
        pts.append(target)
    return pts


def reward_bound(scenario: Scenario, spec: RewardSpec) -> float:
    """Maximum reward magnitude over the reachable rate box.

    Every supported reward is piecewise monotone in each rate with
    breakpoints only at the rate requirements, so the extremum of |R| lies
    on the 3x3 grid of box corners and requirement lines.
    """
    cfg = scenario.config
    r0_hi, rk_hi = rate_box(scenario)
    t0 = math.log2(1.0 + cfg.mue_sinr_min)
    tk = math.log2(1.0 + cfg.fue_sinr_min)
    best = 0.0
    distances = scenario.dist_fbs_mue if spec.kind is RewardKind.PROXIMITY else [None]
    for d in distances:
        for r0 in _candidate_points(r0_hi, t0):
            for rk in _candidate_points(rk_hi, tk):
                val = abs(reward_value(spec, r0, rk, cfg.mue_sinr_min,
                                       cfg.fue_sinr_min, d))
                best = max(best, val)
    return best
