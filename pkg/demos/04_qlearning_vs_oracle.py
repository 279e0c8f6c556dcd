"""Tabular Q-learning against exact solvers on small explicit MDPs.

Shows the 1/(1+n) learning rate converging to the value-iteration fixed
point, the mean-of-targets identity behind that rate, and the constant
shift a reward bias adds to every state value.

Run:  python3 demos/04_qlearning_vs_oracle.py
"""

import numpy as np

from qdpa import (TabularMDP, empirical_target_mean, policy_evaluation,
                  random_mdp, run_q_learning, value_iteration)

beta = 0.9
rng = np.random.default_rng(0)
mdp = random_mdp(4, 3, rng, reward_span=(-1.0, 1.0))
mdp.rewards = mdp.rewards - mdp.rewards.max(axis=1).mean()

qstar = value_iteration(mdp, beta)
print("learning with forced uniform exploration:")
run = None
for step in range(5):
    run = run_q_learning(mdp, 20_000, beta, rng, epsilon_explore=1.0,
                         q=None if run is None else run.q)
    err = np.max(np.abs(run.q.values - qstar))
    print(f"  after {20_000 * (step + 1):6d} updates: sup error {err:.4f}")

r_max = float(np.max(np.abs(mdp.rewards)))
print(f"sup |Q| seen during training: {run.sup_norm_max:.3f} "
      f"(bound r_max/(1-beta) = {r_max / (1 - beta):.3f})")

# the 1/(1+n) rate makes each cell the mean of its empirical targets
run2 = run_q_learning(mdp, 2000, beta, np.random.default_rng(1),
                      record_targets=True)
(s, a), targets = next(iter(run2.target_history.items()))
print(f"\ncell ({s},{a}): value {run2.q.values[s, a]:+.6f}, "
      f"mean of its {len(targets)} targets {empirical_target_mean(targets):+.6f}")

# a constant added to the reward shifts every state value by c/(1-beta)
policy = np.zeros(mdp.n_states, dtype=int)
v = policy_evaluation(mdp, policy, beta)
v_shift = policy_evaluation(TabularMDP(mdp.transitions, mdp.rewards + 1.0),
                            policy, beta)
print(f"\nreward bias +1 shifts values by {(v_shift - v).mean():.6f} "
      f"(expected {1.0 / (1 - beta):.6f})")
