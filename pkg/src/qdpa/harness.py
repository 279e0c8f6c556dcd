"""Experiment orchestration.

Implements the incremental deployment protocol: femtocells join the network
one at a time, the newcomer trains its Q-table over a fixed number of
frames while the already-trained ones keep acting greedily, and steady-state
metrics are recorded after each join. Also runs the greedy / brute-force
baselines on the same scenarios, the four learning-configuration sweep, and
CSV/JSON persistence of everything.
"""

import csv
import json
import logging
import math
import os
from dataclasses import dataclass, field, asdict, replace

import numpy as np

from .baselines import check_feasible, exhaustive_search, greedy_powers
from .channel import sinr_all
from .complexity import min_iterations, reward_bound, training_length, v_max
from .learning import (LearningConfig, LearningMode, QTable, cooperative_target,
                       independent_target, select_action)
from .mdp import ActionSet, StateSetModel, action_set, state_space_size
from .reward import RewardKind, RewardSpec, reward_value
from .topology import (Scenario, ScenarioConfig, build_scenario, config_from_dict,
                       ring_index, with_seed)

log = logging.getLogger(__name__)

__all__ = [
    "RunConfig",
    "MetricsRecord",
    "TrainingTrace",
    "RunResult",
    "ComparisonResult",
    "NetworkSim",
    "train_one_fbs",
    "run_incremental",
    "compare_configurations",
    "write_metrics",
    "read_metrics_csv",
    "run_config_from_dict",
    "run_config_to_dict",
]

METRICS_COLUMNS = ("seed", "k_active", "method", "state_model", "reward_kind",
                   "mue_rate", "fue_sum_rate", "fbs_sum_power_mw", "mue_ok",
                   "fue_ok_frac", "cl_messages")


@dataclass(frozen=True)
class RunConfig:
    """Everything one reproducible experiment needs."""

    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    learning: LearningConfig = field(default_factory=LearningConfig)
    state_model: StateSetModel = StateSetModel.FUE_AWARE
    reward: RewardSpec = field(default_factory=RewardSpec)
    k_max: int = 10
    seeds: tuple = tuple(range(20))
    run_greedy: bool = True
    run_exhaustive: bool = False
    exhaustive_budget: int = 10_000_000
    output_dir: str | None = None

    def __post_init__(self):
        if len(self.seeds) == 0:
            raise ValueError("need at least one seed")
        if not 1 <= self.k_max <= self.scenario.n_apartments:
            raise ValueError(f"k_max must be in 1..{self.scenario.n_apartments}")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))

    @property
    def actions(self) -> ActionSet:
        s = self.scenario
        return action_set(s.fbs_pmin_dbm, s.fbs_pmax_dbm, s.fbs_step_db)


@dataclass(frozen=True)
class MetricsRecord:
    """Steady-state metrics after one deployment step.

    Sum power is stored in milliwatts, matching the CSV column, so records
    survive a CSV round trip bit-for-bit. ``powers_w`` carries the full
    power vector for recomputation checks but does not affect equality.
    """

    seed: int
    k_active: int
    method: str
    state_model: str
    reward_kind: str
    mue_rate: float
    fue_sum_rate: float
    fbs_sum_power_mw: float
    mue_ok: bool
    fue_ok_frac: float
    cl_messages: int
    powers_w: tuple = field(default=(), compare=False, repr=False)

    @property
    def fbs_sum_power_w(self) -> float:
        return self.fbs_sum_power_mw * 1e-3


@dataclass
class TrainingTrace:
    """Per-frame log of one agent's training."""

    agent: int
    rewards: np.ndarray
    actions: np.ndarray


class NetworkSim:
    """Mutable network state across the incremental protocol.

    Holds the per-agent Q-tables, current powers and observed states; the
    scenario is swapped out each time a femtocell joins.
    """

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.actions = cfg.actions
        self.levels = np.asarray(self.actions.levels_w)
        sc = cfg.scenario
        self.n1 = len(sc.ring_radii_mue_m)
        self.n2 = len(sc.ring_radii_mbs_m)
        self.n_states = state_space_size(cfg.state_model, self.n1, self.n2)
        self.rows_shared = 2 ** cfg.state_model.n_bits
        self.scenario: Scenario | None = None
        self.tables: list[QTable] = []
        self.powers = np.zeros(0)
        self.state_idx: list[int] = []
        self._ring_base: list[int] = []
        self.cl_messages = 0

    @property
    def k_active(self) -> int:
        return len(self.tables)

    def activate(self, scenario: Scenario) -> None:
        """Bring the next femtocell online; it starts at minimum power."""
        if scenario.k_active != self.k_active + 1:
            raise ValueError("activation must add exactly one femtocell")
        self.scenario = scenario
        self.tables.append(QTable(self.n_states, len(self.actions)))
        self.powers = np.append(self.powers, self.actions.p_min_w)
        cfg = scenario.config
        base = []
        for k in range(scenario.k_active):
            rings = (ring_index(float(scenario.dist_fbs_mue[k]), cfg.ring_radii_mue_m)
                     + (self.n1 + 1)
                     * ring_index(float(scenario.dist_fbs_mbs[k]), cfg.ring_radii_mbs_m))
            base.append(self.rows_shared * rings)
        self._ring_base = base
        self.state_idx = [0] * scenario.k_active
        self._observe(self._sinr())

    def _sinr(self) -> np.ndarray:
        cfg = self.scenario.config
        return sinr_all(cfg.mbs_power_w, self.powers, self.scenario.channel, cfg.noise_w)

    def _observe(self, gamma: np.ndarray) -> None:
        cfg = self.scenario.config
        model = self.cfg.state_model
        mue_bit = int(gamma[0] >= cfg.mue_sinr_min)
        for k in range(self.k_active):
            fue_bit = int(gamma[k + 1] >= cfg.fue_sinr_min)
            if model is StateSetModel.FUE_AWARE:
                bits = fue_bit
            elif model is StateSetModel.MUE_AWARE:
                bits = mue_bit
            else:
                bits = fue_bit + 2 * mue_bit
            self.state_idx[k] = self._ring_base[k] + bits

    def _selection_context(self, agent: int) -> list[QTable]:
        if self.cfg.learning.mode is LearningMode.INDEPENDENT:
            return [self.tables[agent]]
        s = self.state_idx[agent]
        return [self.tables[j] for j in range(self.k_active)
                if self.state_idx[j] == s]

    def _greedy_action(self, agent: int) -> int:
        """Greedy pick per mode; cooperating agents that share a state share
        the decision."""
        if self.cfg.learning.mode is LearningMode.INDEPENDENT:
            return self.tables[agent].greedy_action(self.state_idx[agent])
        return cooperative_target(self._selection_context(agent),
                                  self.state_idx[agent])[1]

    def training_frame(self, learner: int, rng: np.random.Generator,
                       epsilon: float) -> tuple[float, int]:
        """One frame: everyone picks a power, the learner updates its table."""
        cfg = self.scenario.config
        for j in range(self.k_active):
            if j != learner:
                self.powers[j] = self.levels[self._greedy_action(j)]
        a = select_action(self._selection_context(learner), self.state_idx[learner],
                          epsilon, rng)
        self.powers[learner] = self.levels[a]

        gamma = self._sinr()
        r0 = math.log2(1.0 + gamma[0])
        rk = math.log2(1.0 + gamma[learner + 1])
        rew = reward_value(self.cfg.reward, r0, rk, cfg.mue_sinr_min, cfg.fue_sinr_min,
                           float(self.scenario.dist_fbs_mue[learner]))
        prev_state = self.state_idx[learner]
        self._observe(gamma)

        if self.cfg.learning.mode is LearningMode.COOPERATIVE:
            s_next = self.state_idx[learner]
            peers = [self.tables[j] for j in range(self.k_active)
                     if self.state_idx[j] == s_next]
            target, _ = cooperative_target(peers, s_next)
            if self.k_active > 1:
                self.cl_messages += self.rows_shared * (self.k_active - 1)
        else:
            target = independent_target(self.tables[learner], self.state_idx[learner])
        self.tables[learner].update(prev_state, a, rew, target, self.cfg.learning.beta)
        return rew, a

    def greedy_frame(self) -> np.ndarray:
        """All agents act greedily (per mode); returns the SINRs."""
        for j in range(self.k_active):
            self.powers[j] = self.levels[self._greedy_action(j)]
        gamma = self._sinr()
        self._observe(gamma)
        return gamma


def train_one_fbs(net: NetworkSim, new_k: int, cfg: RunConfig,
                  rng: np.random.Generator) -> TrainingTrace:
    """Train agent ``new_k`` (1-based, must be the newest) for the configured
    number of frames while everyone else stays frozen."""
    if new_k != net.k_active:
        raise ValueError(f"can only train the newest agent {net.k_active}, got {new_k}")
    frames = cfg.learning.training_frames
    rewards = np.empty(frames)
    picks = np.empty(frames, dtype=np.int64)
    eps = cfg.learning.epsilon_explore
    learner = new_k - 1
    for f in range(frames):
        rewards[f], picks[f] = net.training_frame(learner, rng, eps)
    return TrainingTrace(agent=new_k, rewards=rewards, actions=picks)


def _record_from_powers(scenario: Scenario, powers: np.ndarray, *, seed: int,
                        method: str, cfg: RunConfig, cl_messages: int = 0) -> MetricsRecord:
    sc = scenario.config
    gamma = sinr_all(sc.mbs_power_w, powers, scenario.channel, sc.noise_w)
    rates = np.log2(1.0 + gamma)
    feas = check_feasible(powers, scenario)
    frac = float(np.mean(feas.fue_slacks >= 0.0)) if scenario.k_active else 1.0
    return MetricsRecord(
        seed=seed,
        k_active=scenario.k_active,
        method=method,
        state_model=cfg.state_model.value,
        reward_kind=cfg.reward.kind.value,
        mue_rate=float(rates[0]),
        fue_sum_rate=float(rates[1:].sum()),
        fbs_sum_power_mw=float(powers.sum() * 1e3),
        mue_ok=bool(feas.mue_slack >= 0.0),
        fue_ok_frac=frac,
        cl_messages=int(cl_messages),
        powers_w=tuple(float(p) for p in powers),
    )


@dataclass
class RunResult:
    """Records plus the trained tables of an incremental run."""

    records: list
    qtables: dict
    traces: list


def theoretical_frames(scenario: Scenario, cfg: RunConfig) -> dict:
    """Worst-case training length for the configured accuracy target.

    Interprets "90% optimality" as epsilon = 0.1 * v_max with delta = 0.1,
    and reports both the per-cell visit count and the frame count.
    """
    r_max = reward_bound(scenario, cfg.reward)
    beta = cfg.learning.beta
    n_states = state_space_size(cfg.state_model,
                                len(cfg.scenario.ring_radii_mue_m),
                                len(cfg.scenario.ring_radii_mbs_m))
    n_actions = len(cfg.actions)
    eps = 0.1 * v_max(r_max, beta)
    t = min_iterations(r_max, beta, eps, 0.1, n_states, n_actions)
    return {
        "r_max": r_max,
        "epsilon": eps,
        "visits_per_pair": t,
        "frames": training_length(t, n_states, n_actions),
        "practical_frames": cfg.learning.training_frames,
    }


def run_incremental(cfg: RunConfig) -> RunResult:
    """Run the incremental deployment protocol for every seed.

    For each seed, femtocells join one at a time up to ``k_max``; after each
    join the newcomer trains and one greedy evaluation frame defines the
    recorded metrics. Baseline records are computed on the same scenarios.
    """
    records: list[MetricsRecord] = []
    qtables: dict = {}
    traces: list[TrainingTrace] = []
    budget_warned = False
    for run_i, seed in enumerate(cfg.seeds):
        sc_cfg = with_seed(cfg.scenario, seed)
        rng = np.random.default_rng([int(seed), int(cfg.learning.rng_seed)])
        net = NetworkSim(cfg)
        for k in range(1, cfg.k_max + 1):
            scenario = build_scenario(sc_cfg, k)
            net.activate(scenario)
            msg_before = net.cl_messages
            traces.append(train_one_fbs(net, k, cfg, rng))
            net.greedy_frame()
            records.append(_record_from_powers(
                scenario, net.powers.copy(), seed=seed, method="qdpa", cfg=cfg,
                cl_messages=net.cl_messages - msg_before))
            if cfg.run_greedy:
                records.append(_record_from_powers(
                    scenario, greedy_powers(k, cfg.actions), seed=seed,
                    method="greedy", cfg=cfg))
            if cfg.run_exhaustive:
                n_joint = len(cfg.actions) ** k
                if n_joint <= cfg.exhaustive_budget:
                    sol = exhaustive_search(scenario, cfg.actions,
                                            max_joint=cfg.exhaustive_budget)
                    records.append(_record_from_powers(
                        scenario, sol.best_powers, seed=seed,
                        method="exhaustive", cfg=cfg))
                elif not budget_warned:
                    log.warning("exhaustive baseline skipped for K=%d: %d joint "
                                "vectors exceed the budget of %d", k, n_joint,
                                cfg.exhaustive_budget)
                    budget_warned = True
        for k, table in enumerate(net.tables, start=1):
            qtables[(seed, k)] = table
        if run_i == 0:
            info = theoretical_frames(scenario, cfg)
            log.info("training length: practical %d frames/agent, worst-case "
                     "bound %d frames (%d visits/pair at epsilon=%.3g)",
                     info["practical_frames"], info["frames"],
                     info["visits_per_pair"], info["epsilon"])
    return RunResult(records=records, qtables=qtables, traces=traces)


_RANK_METRICS = (
    ("fbs_sum_power_mw", +1),   # lower power ranks first
    ("fue_sum_rate", -1),       # higher sum rate ranks first
    ("mue_rate", -1),           # higher MUE rate ranks first
)

CONFIGURATION_GRID = tuple(
    (mode, model)
    for mode in (LearningMode.INDEPENDENT, LearningMode.COOPERATIVE)
    for model in (StateSetModel.FUE_AWARE, StateSetModel.MUE_AWARE)
)


def configuration_label(mode: LearningMode, model: StateSetModel) -> str:
    prefix = "IL" if mode is LearningMode.INDEPENDENT else "CL"
    return f"{prefix}+{model.value}"


@dataclass
class ComparisonResult:
    """Seed-averaged metrics and ranks of the four learning configurations."""

    records: list
    means: dict   # label -> metric -> seed-mean at k_max
    ranks: dict   # label -> metric -> rank (1 best)

    def format_table(self) -> str:
        lines = ["configuration        sum_power  sum_rate  mue_rate"]
        for label, r in self.ranks.items():
            lines.append(f"{label:<20} {r['fbs_sum_power_mw']:^9d}  "
                         f"{r['fue_sum_rate']:^8d}  {r['mue_rate']:^8d}")
        return "\n".join(lines)


def compare_configurations(cfg: RunConfig) -> ComparisonResult:
    """Run all four mode/state-model combinations on identical scenarios and
    rank their seed-averaged metrics at the final deployment step."""
    all_records: list[MetricsRecord] = []
    means: dict = {}
    for mode, model in CONFIGURATION_GRID:
        sub = replace(cfg, learning=replace(cfg.learning, mode=mode),
                      state_model=model, run_greedy=False, run_exhaustive=False)
        result = run_incremental(sub)
        label = configuration_label(mode, model)
        recs = [replace(r, method=f"qdpa:{label}") for r in result.records]
        all_records.extend(recs)
        final = [r for r in recs if r.k_active == cfg.k_max]
        means[label] = {metric: float(np.mean([getattr(r, metric) for r in final]))
                        for metric, _ in _RANK_METRICS}
    ranks: dict = {label: {} for label in means}
    for metric, direction in _RANK_METRICS:
        order = sorted(means, key=lambda lbl: direction * means[lbl][metric])
        for pos, label in enumerate(order, start=1):
            ranks[label][metric] = pos
    return ComparisonResult(records=all_records, means=means, ranks=ranks)


def write_metrics(records, output_dir, *, config: "RunConfig | None" = None,
                  qtables: dict | None = None) -> list:
    """Persist a run: metrics.csv, config echo, per-agent Q-tables and a
    seed-averaged summary. Returns the paths written."""
    from .learning import save_qtable_csv

    os.makedirs(output_dir, exist_ok=True)
    written = []

    path = os.path.join(output_dir, "metrics.csv")
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(METRICS_COLUMNS)
        for r in records:
            w.writerow([r.seed, r.k_active, r.method, r.state_model, r.reward_kind,
                        repr(r.mue_rate), repr(r.fue_sum_rate),
                        repr(r.fbs_sum_power_mw), int(r.mue_ok),
                        repr(r.fue_ok_frac), r.cl_messages])
    written.append(path)

    if config is not None:
        path = os.path.join(output_dir, "config.json")
        with open(path, "w") as f:
            json.dump(run_config_to_dict(config), f, indent=2, sort_keys=True)
        written.append(path)

    if qtables:
        qdir = os.path.join(output_dir, "qtables")
        os.makedirs(qdir, exist_ok=True)
        for (seed, agent), table in sorted(qtables.items()):
            vpath = os.path.join(qdir, f"seed{seed}_agent{agent}_values.csv")
            npath = os.path.join(qdir, f"seed{seed}_agent{agent}_visits.csv")
            save_qtable_csv(table, vpath, npath)
            written.extend([vpath, npath])

    path = os.path.join(output_dir, "summary.json")
    with open(path, "w") as f:
        json.dump(_summarize(records), f, indent=2, sort_keys=True)
    written.append(path)
    return written


def _summarize(records) -> dict:
    """Seed-averaged metric series per method, keyed for plotting."""
    series: dict = {}
    methods = sorted({r.method for r in records})
    for method in methods:
        ks = sorted({r.k_active for r in records if r.method == method})
        entry = {"k_active": ks}
        for metric in ("mue_rate", "fue_sum_rate", "fbs_sum_power_mw",
                       "fue_ok_frac"):
            entry[metric] = [
                float(np.mean([getattr(r, metric) for r in records
                               if r.method == method and r.k_active == k]))
                for k in ks]
        entry["mue_ok_frac"] = [
            float(np.mean([float(r.mue_ok) for r in records
                           if r.method == method and r.k_active == k]))
            for k in ks]
        series[method] = entry
    return {"series": series}


def read_metrics_csv(path) -> list:
    """Parse metrics.csv back into records (power vectors are not stored in
    the CSV, so ``powers_w`` comes back empty)."""
    out = []
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    for row in rows:
        out.append(MetricsRecord(
            seed=int(row["seed"]), k_active=int(row["k_active"]),
            method=row["method"], state_model=row["state_model"],
            reward_kind=row["reward_kind"], mue_rate=float(row["mue_rate"]),
            fue_sum_rate=float(row["fue_sum_rate"]),
            fbs_sum_power_mw=float(row["fbs_sum_power_mw"]),
            mue_ok=bool(int(row["mue_ok"])), fue_ok_frac=float(row["fue_ok_frac"]),
            cl_messages=int(row["cl_messages"])))
    return out


def run_config_to_dict(cfg: RunConfig) -> dict:
    sc = asdict(cfg.scenario)
    sc["noise"] = asdict(cfg.scenario.noise)
    return {
        "scenario": sc,
        "learning": {
            "beta": cfg.learning.beta,
            "epsilon_explore": cfg.learning.epsilon_explore,
            "mode": cfg.learning.mode.value,
            "training_frames": cfg.learning.training_frames,
            "rng_seed": cfg.learning.rng_seed,
        },
        "state_model": cfg.state_model.value,
        "reward": {
            "kind": cfg.reward.kind.value,
            "m": cfg.reward.m,
            "bias_c": cfg.reward.bias_c,
            "exp_curvature": cfg.reward.exp_curvature,
            "proximity_ref_m": cfg.reward.proximity_ref_m,
        },
        "k_max": cfg.k_max,
        "seeds": list(cfg.seeds),
        "baselines": {"greedy": cfg.run_greedy, "exhaustive": cfg.run_exhaustive},
        "exhaustive_budget": cfg.exhaustive_budget,
        "output_dir": cfg.output_dir,
    }


def run_config_from_dict(doc: dict) -> RunConfig:
    """Build a RunConfig from a parsed JSON document; missing sections fall
    back to the defaults."""
    doc = dict(doc)
    scenario = config_from_dict(doc.get("scenario", {}))
    learn = dict(doc.get("learning", {}))
    if "mode" in learn:
        learn["mode"] = LearningMode(learn["mode"])
    learning = LearningConfig(**learn)
    rew = dict(doc.get("reward", {}))
    if "kind" in rew:
        rew["kind"] = RewardKind(rew["kind"])
    reward = RewardSpec(**rew)
    baselines = doc.get("baselines", {})
    return RunConfig(
        scenario=scenario,
        learning=learning,
        state_model=StateSetModel(doc.get("state_model", "fue_aware")),
        reward=reward,
        k_max=int(doc.get("k_max", 10)),
        seeds=tuple(doc.get("seeds", range(20))),
        run_greedy=bool(baselines.get("greedy", True)),
        run_exhaustive=bool(baselines.get("exhaustive", False)),
        exhaustive_budget=int(doc.get("exhaustive_budget", 10_000_000)),
        output_dir=doc.get("output_dir"),
    )
