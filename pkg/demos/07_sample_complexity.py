"""Sample-complexity bookkeeping: error bound, visit counts, frame budgets.

Run:  python3 demos/07_sample_complexity.py
"""

from qdpa import (RunConfig, ScenarioConfig, RewardSpec, build_scenario,
                  epsilon_bound, min_iterations, rate_box, reward_bound,
                  training_length, v_max)
from qdpa.harness import theoretical_frames

# the bound shrinks with the visit count; halving epsilon quadruples T
print("visits per state-action pair for epsilon-optimality "
      "(r_max=1, beta=0.5, |X|=2, |A|=2, delta=0.1):")
for eps in (0.5, 0.25, 0.125):
    t = min_iterations(1.0, 0.5, eps, 0.1, 2, 2)
    print(f"  eps={eps:5.3f}: T={t:6d}, bound at T = "
          f"{epsilon_bound(1.0, 0.5, t, 4, 0.1):.4f}")

# the same machinery sized for the default scenario
sc = build_scenario(ScenarioConfig(seed=0), 10)
spec = RewardSpec()
r_max = reward_bound(sc, spec)
r0_hi, rk_hi = rate_box(sc)
print(f"\ndefault scenario: reachable rates up to ({r0_hi:.1f}, {rk_hi:.1f}) "
      f"b/s/Hz, reward bound {r_max:.1f}, v_max {v_max(r_max, 0.9):.1f}")

info = theoretical_frames(sc, RunConfig())
print(f"worst-case training length for 90% optimality at delta=0.1: "
      f"{info['frames']:,} frames ({info['visits_per_pair']:,} visits/pair)")
print(f"practical default used by the harness: "
      f"{info['practical_frames']:,} frames per femtocell")
print("the gap is the point: the bound is worst-case, while the trends of")
print("interest appear orders of magnitude earlier")
