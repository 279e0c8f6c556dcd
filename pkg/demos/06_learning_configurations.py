"""Independent vs cooperative learning under each state model.

Reproduces (at desk scale) the four-configuration comparison: whose-QoS
knowledge the state carries, and whether agents share Q-rows, set the
trade-off between femto sum rate and macro-user protection.

Run:  python3 demos/06_learning_configurations.py   (takes a few minutes)
"""

from qdpa import RunConfig, compare_configurations
from qdpa.learning import LearningConfig

cfg = RunConfig(seeds=tuple(range(5)), k_max=10, run_greedy=False,
                learning=LearningConfig(training_frames=8000))
result = compare_configurations(cfg)

print("seed-mean metrics at K=10:")
for label, m in result.means.items():
    print(f"  {label:16s} power {m['fbs_sum_power_mw']:7.1f} mW   "
          f"sum FUE rate {m['fue_sum_rate']:5.1f}   MUE rate {m['mue_rate']:4.2f}")

print("\nranks (1 best):")
print(result.format_table())
print("\nindependent learning with the own-FUE state chases femto rate;")
print("cooperative learning with the MUE state protects the macro user.")
