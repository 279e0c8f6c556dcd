"""Baselines and oracles.

Greedy power allocation (everyone at maximum power), a brute-force search
over the joint power grid for the constrained sum-rate problem, and exact
solvers (value iteration, policy evaluation) for small explicit MDPs used
to cross-check the learning engine.
"""

from dataclasses import dataclass

import numpy as np

from .channel import sinr_all
from .mdp import ActionSet
from .topology import Scenario

__all__ = [
    "TabularMDP",
    "random_mdp",
    "SolveResult",
    "FeasibilityResult",
    "greedy_powers",
    "check_feasible",
    "exhaustive_search",
    "value_iteration",
    "policy_evaluation",
]


@dataclass
class TabularMDP:
    """Explicit finite MDP: transition tensor (S, A, S) and rewards (S, A)."""

    transitions: np.ndarray
    rewards: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.transitions, dtype=float)
        r = np.asarray(self.rewards, dtype=float)
        if p.ndim != 3 or p.shape[0] != p.shape[2] or r.shape != p.shape[:2]:
            raise ValueError(f"inconsistent shapes: transitions {p.shape}, rewards {r.shape}")
        if np.any(p < 0) or not np.allclose(p.sum(axis=2), 1.0, atol=1e-9):
            raise ValueError("transition rows must be distributions")
        self.transitions = p
        self.rewards = r

    @property
    def n_states(self) -> int:
        return self.transitions.shape[0]

    @property
    def n_actions(self) -> int:
        return self.transitions.shape[1]


def random_mdp(n_states: int, n_actions: int, rng: np.random.Generator,
               reward_span: tuple = (0.0, 1.0)) -> TabularMDP:
    """Dense random MDP with uniform rewards in ``reward_span``."""
    p = rng.random((n_states, n_actions, n_states)) + 1e-3
    p /= p.sum(axis=2, keepdims=True)
    lo, hi = reward_span
    r = rng.uniform(lo, hi, size=(n_states, n_actions))
    return TabularMDP(transitions=p, rewards=r)


def value_iteration(mdp: TabularMDP, beta: float, tol: float = 1e-10,
                    max_iter: int = 1_000_000) -> np.ndarray:
    """Optimal action values by iterating the Bellman optimality operator
    until the sup-norm residual drops below ``tol``."""
    if not 0.0 < beta < 1.0:
        raise ValueError("discount must be in (0, 1) for value iteration")
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    q = np.zeros((mdp.n_states, mdp.n_actions))
    for _ in range(max_iter):
        v = q.max(axis=1)
        q_next = mdp.rewards + beta * (mdp.transitions @ v)
        resid = np.max(np.abs(q_next - q))
        q = q_next
        if resid < tol:
            return q
    raise RuntimeError("value iteration did not reach the residual tolerance")


def policy_evaluation(mdp: TabularMDP, policy, beta: float,
                      tol: float = 1e-12, max_iter: int = 1_000_000) -> np.ndarray:
    """State values of a deterministic policy, by fixed-point iteration."""
    if not 0.0 < beta < 1.0:
        raise ValueError("discount must be in (0, 1) for policy evaluation")
    policy = np.asarray(policy, dtype=int)
    if policy.shape != (mdp.n_states,):
        raise ValueError(f"policy must give one action per state, got {policy.shape}")
    idx = np.arange(mdp.n_states)
    r_pi = mdp.rewards[idx, policy]
    p_pi = mdp.transitions[idx, policy]
    v = np.zeros(mdp.n_states)
    for _ in range(max_iter):
        v_next = r_pi + beta * (p_pi @ v)
        resid = np.max(np.abs(v_next - v))
        v = v_next
        if resid < tol:
            return v
    raise RuntimeError("policy evaluation did not reach the residual tolerance")


def greedy_powers(k_active: int, actions: ActionSet) -> np.ndarray:
    """The greedy baseline: every active femtocell transmits at maximum power."""
    if k_active < 0:
        raise ValueError("k_active must be non-negative")
    return np.full(k_active, actions.p_max_w)


@dataclass(frozen=True)
class FeasibilityResult:
    """Constraint check of one power vector: overall verdict plus slacks
    (achieved SINR minus required SINR, per constraint)."""

    feasible: bool
    mue_slack: float
    fue_slacks: np.ndarray

    @property
    def min_slack(self) -> float:
        return min(self.mue_slack, float(np.min(self.fue_slacks))) \
            if self.fue_slacks.size else self.mue_slack


def check_feasible(p, scenario: Scenario) -> FeasibilityResult:
    """Do the given femto powers satisfy the MUE and all FUE SINR floors?"""
    cfg = scenario.config
    gamma = sinr_all(cfg.mbs_power_w, p, scenario.channel, cfg.noise_w)
    mue_slack = float(gamma[0] - cfg.mue_sinr_min)
    fue_slacks = gamma[1:] - cfg.fue_sinr_min
    ok = mue_slack >= 0.0 and bool(np.all(fue_slacks >= 0.0))
    return FeasibilityResult(feasible=ok, mue_slack=mue_slack, fue_slacks=fue_slacks)


@dataclass(frozen=True)
class SolveResult:
    """Best joint power vector found by the brute-force search."""

    best_powers: np.ndarray
    objective: float      # sum FUE rate at best_powers, b/s/Hz
    feasible: bool
    evaluated_count: int

    def to_dict(self) -> dict:
        return {
            "best_powers_w": [float(x) for x in self.best_powers],
            "objective_bps_hz": self.objective,
            "feasible": self.feasible,
            "evaluated_count": self.evaluated_count,
        }


def _joint_metrics(chunk_idx: np.ndarray, levels: np.ndarray, scenario: Scenario):
    """Sum rate, MUE/FUE SINRs for a chunk of joint grid-index rows."""
    cfg = scenario.config
    g = scenario.channel.gains
    p = levels[chunk_idx]                       # (n, K)
    tx = np.concatenate([np.full((p.shape[0], 1), cfg.mbs_power_w), p], axis=1)
    received = tx @ g
    signal = tx * np.diagonal(g)
    gamma = signal / (received - signal + cfg.noise_w)
    obj = np.log2(1.0 + gamma[:, 1:]).sum(axis=1)
    return obj, gamma


def exhaustive_search(scenario: Scenario, actions: ActionSet,
                      max_joint: int = 10_000_000,
                      chunk: int = 200_000) -> SolveResult:
    """Enumerate every joint power vector on the grid and return the best.

    Feasible vectors are ranked by sum FUE rate (ties go to the
    lexicographically lowest vector). If no vector is feasible the result
    carries ``feasible=False`` and the vector maximizing the minimum
    constraint slack. Refuses outright when the grid exceeds ``max_joint``.
    """
    k = scenario.k_active
    n_levels = len(actions)
    n_joint = n_levels ** k
    if n_joint > max_joint:
        raise ValueError(
            f"joint grid of {n_levels}^{k} = {n_joint} points exceeds the "
            f"budget of {max_joint}; pass a coarser grid or raise max_joint")

    cfg = scenario.config
    levels = np.asarray(actions.levels_w)
    shape = (n_levels,) * k
    best_obj, best_idx = -np.inf, None
    best_slack, best_slack_idx = -np.inf, None
    for start in range(0, n_joint, chunk):
        flat = np.arange(start, min(start + chunk, n_joint))
        idx = np.stack(np.unravel_index(flat, shape), axis=1)
        obj, gamma = _joint_metrics(idx, levels, scenario)
        slacks = np.minimum(gamma[:, 0] - cfg.mue_sinr_min,
                           (gamma[:, 1:] - cfg.fue_sinr_min).min(axis=1))
        feas = slacks >= 0.0
        if np.any(feas):
            sub = np.where(feas)[0]
            j = sub[np.argmax(obj[sub])]
            if obj[j] > best_obj:
                best_obj, best_idx = float(obj[j]), idx[j].copy()
        j = int(np.argmax(slacks))
        if slacks[j] > best_slack:
            best_slack, best_slack_idx = float(slacks[j]), idx[j].copy()

    feasible = best_idx is not None
    chosen = best_idx if feasible else best_slack_idx
    powers = levels[chosen]
    # Recompute the objective for the returned vector, guarding the chunked
    # bookkeeping above.
    obj, _ = _joint_metrics(chosen[None, :], levels, scenario)
    return SolveResult(best_powers=powers, objective=float(obj[0]),
                       feasible=feasible, evaluated_count=n_joint)
