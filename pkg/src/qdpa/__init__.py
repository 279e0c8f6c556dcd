"""Two-tier HetNet downlink simulator with distributed Q-learning power
allocation, reward-function family, sample-complexity bounds and baselines."""

from .channel import (ChannelMatrix, LinkKind, NoiseModel, gain_linear,
                      pathloss_db, rate, sinr_all, sinr_fue, sinr_mue)
from .topology import (Scenario, ScenarioConfig, build_scenario,
                       density_fbs_per_km2, ring_index, scenario_from_json,
                       scenario_to_json)
from .mdp import (ActionSet, AgentState, StateSetModel, action_set,
                  observe_state, state_from_index, state_index,
                  state_space_size)
from .reward import (RewardKind, RewardProperty, RewardSpec,
                     check_property_signs, comparison_reward,
                     polynomial_reward, reward_surface, reward_value)
from .learning import (LearningConfig, LearningMode, QTable,
                       cooperative_target, empirical_target_mean,
                       independent_target, learning_rate, run_q_learning,
                       select_action)
from .baselines import (FeasibilityResult, SolveResult, TabularMDP,
                        check_feasible, exhaustive_search, greedy_powers,
                        policy_evaluation, random_mdp, value_iteration)
from .complexity import (ComplexityInputs, epsilon_bound, min_iterations,
                         rate_box, reward_bound, training_length, v_max)
from .harness import (ComparisonResult, MetricsRecord, NetworkSim, RunConfig,
                      RunResult, compare_configurations, read_metrics_csv,
                      run_config_from_dict, run_config_to_dict,
                      run_incremental, train_one_fbs, write_metrics)

__version__ = "0.1.0"
